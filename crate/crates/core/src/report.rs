//! JSON report bodies. Elements are referred to by id; struct field order is
//! the key order on output.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::decompose::CanonicalDecomposition;
use crate::differential::{MDifferential, ValidationReport};
use crate::format::emit;
use crate::minimize::Minimized;
use crate::oracle::HomologyDims;
use crate::reduction::{InvariantSignature, PairingReport, Partition, ReductionResult};
use crate::triple::OrderedTriple;

pub const REPORT_FORMAT: &str = "mpair-report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub format: &'static str,
    pub version: u32,
    pub command: &'a str,
    pub result: &'a T,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(command: &str, result: &T) -> String {
    let env = Envelope { format: REPORT_FORMAT, version: REPORT_VERSION, command, result };
    serde_json::to_string_pretty(&env).expect("reports serialize") + "\n"
}

fn ids(t: &OrderedTriple, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| t.id(i).to_string()).collect()
}

fn id_pairs(t: &OrderedTriple, pairs: &[(usize, usize)]) -> Vec<[String; 2]> {
    pairs.iter().map(|&(a, b)| [t.id(a).to_string(), t.id(b).to_string()]).collect()
}

fn by_degree(h: &HomologyDims) -> BTreeMap<String, usize> {
    h.iter().map(|(d, n)| (d.to_string(), *n)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationRow {
    pub invariant: String,
    pub row: String,
    pub col: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationBody {
    pub ok: bool,
    pub field: String,
    pub elements: usize,
    pub violations: Vec<ViolationRow>,
}

impl ValidationBody {
    pub fn new(d: &MDifferential, report: &ValidationReport) -> Self {
        ValidationBody {
            ok: report.is_ok(),
            field: d.field().to_string(),
            elements: d.len(),
            violations: report
                .violations
                .iter()
                .map(|v| ViolationRow {
                    invariant: v.invariant.to_string(),
                    row: v.row_id.clone(),
                    col: v.col_id.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingBody {
    /// `[source, target]` with `d source = target` after reduction.
    pub pairs: Vec<[String; 2]>,
    pub essentials: Vec<String>,
}

impl PairingBody {
    pub fn new(t: &OrderedTriple, p: &PairingReport) -> Self {
        PairingBody { pairs: id_pairs(t, &p.pairs), essentials: ids(t, &p.essentials) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionBody {
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub r: Vec<String>,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub qr: Vec<[String; 2]>,
    pub yz: Vec<[String; 2]>,
}

impl PartitionBody {
    pub fn new(t: &OrderedTriple, p: &Partition) -> Self {
        PartitionBody {
            p: ids(t, &p.p),
            q: ids(t, &p.q),
            r: ids(t, &p.r),
            x: ids(t, &p.x),
            y: ids(t, &p.y),
            z: ids(t, &p.z),
            qr: id_pairs(t, &p.qr),
            yz: id_pairs(t, &p.yz),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageBody {
    pub stage: String,
    pub witness_kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionBody>,
    /// Canonical `.mpair` text of the output.
    pub output: String,
}

impl StageBody {
    pub fn new(stage: &str, r: &ReductionResult) -> Self {
        StageBody {
            stage: stage.into(),
            witness_kind: r.witness.kind().to_string(),
            pairing: None,
            partition: None,
            output: emit(&r.output),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantsBody {
    pub pairing: PairingBody,
    pub trivial: Vec<String>,
    pub partition: PartitionBody,
    pub h: Vec<String>,
    pub hplus: Vec<[String; 2]>,
    pub homology: BTreeMap<String, BTreeMap<String, usize>>,
}

impl InvariantsBody {
    pub fn new(
        d: &MDifferential,
        pairing: &PairingReport,
        sig: &InvariantSignature,
        homology_a: &HomologyDims,
        homology_b: &HomologyDims,
    ) -> Self {
        let t = d.triple();
        let mut homology = BTreeMap::new();
        homology.insert("A".to_string(), by_degree(homology_a));
        homology.insert("B".to_string(), by_degree(homology_b));
        InvariantsBody {
            pairing: PairingBody::new(t, pairing),
            trivial: ids(t, &d.trivial_elements()),
            partition: PartitionBody::new(t, &sig.partition),
            h: ids(t, &sig.h),
            hplus: id_pairs(t, &sig.hplus),
            homology,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryRow {
    pub interior: String,
    pub boundary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimizeBody {
    pub initial_mixed: usize,
    pub steps: Vec<EntryRow>,
    pub certificate: Vec<EntryRow>,
    pub witness_kind: String,
    pub output: String,
}

impl MinimizeBody {
    pub fn new(m: &Minimized) -> Self {
        let t = m.result.output.triple();
        MinimizeBody {
            initial_mixed: m.initial_mixed,
            steps: m
                .steps
                .iter()
                .map(|v| EntryRow {
                    interior: t.id(v.a).into(),
                    boundary: t.id(v.b).into(),
                    case: Some(v.case.to_string()),
                    condition: None,
                })
                .collect(),
            certificate: m
                .certificate
                .iter()
                .map(|c| EntryRow {
                    interior: t.id(c.a).into(),
                    boundary: t.id(c.b).into(),
                    case: None,
                    condition: Some(c.condition),
                })
                .collect(),
            witness_kind: m.result.witness.kind().to_string(),
            output: emit(&m.result.output),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentRow {
    pub label: String,
    pub elements: Vec<String>,
    pub base: Vec<String>,
    pub k: usize,
    pub l: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecomposeBody {
    pub labels: Vec<String>,
    pub components: Vec<ComponentRow>,
    pub witness_kind: String,
    pub output: String,
}

impl DecomposeBody {
    pub fn new(c: &CanonicalDecomposition) -> Self {
        let out = &c.minimized.result.output;
        let t = out.triple();
        let members = |vs: &[usize]| -> Vec<String> {
            let mut el: Vec<usize> = vs.iter().flat_map(|&v| c.graph.vertices[v].members.iter().copied()).collect();
            el.sort_unstable();
            ids(t, &el)
        };
        DecomposeBody {
            labels: c.labels.clone(),
            components: c
                .components
                .iter()
                .map(|r| ComponentRow {
                    label: r.label.clone(),
                    elements: ids(t, &r.elements),
                    base: members(&r.base_vertices),
                    k: r.k,
                    l: r.l,
                })
                .collect(),
            witness_kind: c.minimized.result.witness.kind().to_string(),
            output: emit(out),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratedBody {
    pub seed: Option<u64>,
    pub valid: bool,
    /// `.mpair` text.
    pub output: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerateBody {
    pub field: String,
    pub count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub documents: Vec<String>,
}
