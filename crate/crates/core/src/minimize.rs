//! Elimination of mixed entries (interior column, boundary row) down to a
//! minimal quasi-elementary differential, under weak equivalence.

use std::fmt;

use serde::Serialize;

use crate::differential::MDifferential;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::reduction::{
    check_quasi_elementary, reduce_quasi_elementary, signature_of_quasi_elementary, InvariantSignature,
    ReductionResult, Workspace,
};
use crate::transform::TransformKind;
use crate::triple::OrderedTriple;

/// Each trivial element `c` with its successor `c+`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CPairTable {
    pub pairs: Vec<(usize, usize)>,
}

impl CPairTable {
    pub fn new(triple: &OrderedTriple) -> Self {
        CPairTable { pairs: triple.trivial_indices().into_iter().map(|c| (c, c + 1)).collect() }
    }

    pub fn plus(&self, c: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == c).map(|p| p.1)
    }

    pub fn minus(&self, a: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.1 == a).map(|p| p.0)
    }

    pub fn is_pair(&self, c: usize, a: usize) -> bool {
        self.plus(c) == Some(a)
    }

    pub fn in_c(&self, c: usize) -> bool {
        self.plus(c).is_some()
    }

    pub fn in_c_plus(&self, a: usize) -> bool {
        self.minus(a).is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    N1,
    N2,
    N3,
    N4,
    N5,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A nonzero mixed entry `(b, a)` that no allowed pattern explains.
/// `aux` holds the helper elements: `(r, z)` for N1, `(q, y)` for N4, the
/// partner `q` of `b` for N2/N5, and `z` for N3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: usize,
    pub b: usize,
    pub case: Case,
    pub aux: Vec<usize>,
}

/// Index 1..=4 of the first allowed pattern the pair `(a, b)` matches.
pub fn allowed(sig: &InvariantSignature, cpairs: &CPairTable, a: usize, b: usize) -> Option<u8> {
    let part = &sig.partition;
    if cpairs.is_pair(b, a) {
        return Some(1);
    }
    if sig.in_h(b) && sig.hplus_of(b) == Some(a) {
        return Some(2);
    }
    if let (Some(r), Some(z)) = (part.qr_target(b), part.yz_target(a)) {
        if cpairs.is_pair(r, z) {
            return Some(3);
        }
    }
    if let (Some(q), Some(y)) = (part.qr_source(b), part.yz_source(a)) {
        if cpairs.is_pair(q, y) {
            return Some(4);
        }
    }
    None
}

pub fn classify(
    d: &MDifferential,
    sig: &InvariantSignature,
    cpairs: &CPairTable,
    a: usize,
    b: usize,
) -> Result<Violation> {
    let t = d.triple();
    let part = &sig.partition;
    let bad = || Error::Unclassifiable { interior: t.id(a).to_string(), boundary: t.id(b).to_string() };
    if d.entry(b, a).is_zero() || allowed(sig, cpairs, a, b).is_some() {
        return Err(bad());
    }
    let (case, aux) = if let Some(z) = part.yz_target(a) {
        if let Some(r) = part.qr_target(b) {
            (Case::N1, vec![r, z])
        } else if let Some(q) = part.qr_source(b) {
            (Case::N2, vec![q])
        } else if part.p.contains(&b) {
            (Case::N3, vec![z])
        } else {
            return Err(bad());
        }
    } else if let Some(y) = part.yz_source(a) {
        let q = part.qr_source(b).ok_or_else(bad)?;
        (Case::N4, vec![q, y])
    } else if part.x.contains(&a) {
        let q = part.qr_source(b).ok_or_else(bad)?;
        (Case::N5, vec![q])
    } else {
        return Err(bad());
    };
    Ok(Violation { a, b, case, aux })
}

/// Applies the basis change for one violation. With `lambda = D[b, a]`:
/// N2/N5 send `a` to `a - lambda q`; N4 likewise with `q` the partner of `b`;
/// N3 sends `z` to `z + lambda b`; N1 sends `z` to `z + lambda b`, which also
/// clears the coupled entry `(r, z)`.
fn apply(ws: &mut Workspace, v: &Violation) {
    let lambda = ws.d.get(v.b, v.a).clone();
    match v.case {
        Case::N2 | Case::N5 | Case::N4 => ws.add(v.a, v.aux[0], &-lambda),
        Case::N1 => ws.add(v.aux[1], v.b, &lambda),
        Case::N3 => ws.add(v.aux[0], v.b, &lambda),
    }
}

fn mixed_zero_pattern(t: &OrderedTriple, m: &Matrix) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for a in t.interior_indices() {
        for b in t.boundary_indices() {
            out.push((a, b, m.get(b, a).is_zero()));
        }
    }
    out
}

/// Checks the step contract between two consecutive matrices.
fn check_contract(d: &MDifferential, before: &Matrix, after: &Matrix, v: &Violation) -> Result<()> {
    let t = d.triple();
    let fail = |what: &str| {
        Err(Error::ContractViolation(format!("{} step at ({}, {}): {what}", v.case, t.id(v.b), t.id(v.a))))
    };
    if !after.get(v.b, v.a).is_zero() {
        return fail("target entry survived");
    }
    let pb = mixed_zero_pattern(t, before);
    let pa = mixed_zero_pattern(t, after);
    if pb.iter().zip(&pa).any(|(x, y)| x.2 && !y.2) {
        return fail("a zero mixed entry became nonzero");
    }
    let (bi, ii) = (t.boundary_indices(), t.interior_indices());
    if before.select(&bi, &bi) != after.select(&bi, &bi) || before.select(&ii, &ii) != after.select(&ii, &ii) {
        return fail("block matrices changed");
    }
    let out = d.with_matrix(after.clone());
    let report = out.validate();
    if !report.is_ok() {
        return fail(&format!("left the admissible class ({report})"));
    }
    if let Err(e) = check_quasi_elementary(&out) {
        return fail(&format!("no longer quasi-elementary ({e})"));
    }
    Ok(())
}

/// One elimination on a quasi-elementary differential, with a weak witness.
pub fn eliminate_step(d: &MDifferential, v: &Violation) -> Result<ReductionResult> {
    let mut ws = Workspace::new(d);
    apply(&mut ws, v);
    check_contract(d, d.matrix(), &ws.d, v)?;
    ws.finish(d, TransformKind::Weak).map_err(|e| Error::ContractViolation(e.to_string()))
}

/// First violation in lexicographic `(a, b)` order.
pub fn first_violation(d: &MDifferential, sig: &InvariantSignature, cpairs: &CPairTable) -> Result<Option<Violation>> {
    for (a, b) in d.mixed_support() {
        if allowed(sig, cpairs, a, b).is_none() {
            return classify(d, sig, cpairs, a, b).map(Some);
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateEntry {
    pub a: usize,
    pub b: usize,
    pub condition: u8,
}

#[derive(Clone, Debug)]
pub struct Minimized {
    /// Output and weak witness from the original input.
    pub result: ReductionResult,
    pub signature: InvariantSignature,
    pub cpairs: CPairTable,
    /// Every surviving mixed entry with the allowed pattern it matches.
    pub certificate: Vec<CertificateEntry>,
    pub steps: Vec<Violation>,
    /// Nonzero mixed entries of the quasi-elementary starting point.
    pub initial_mixed: usize,
}

/// Certificate for a differential that should already be minimal.
pub fn certify(d: &MDifferential, sig: &InvariantSignature, cpairs: &CPairTable) -> Result<Vec<CertificateEntry>> {
    d.mixed_support()
        .into_iter()
        .map(|(a, b)| match allowed(sig, cpairs, a, b) {
            Some(condition) => Ok(CertificateEntry { a, b, condition }),
            None => Err(Error::WrongForm("minimal")),
        })
        .collect()
}

pub fn minimize(d: &MDifferential) -> Result<Minimized> {
    let qe = reduce_quasi_elementary(d)?;
    let sig = signature_of_quasi_elementary(&qe.output)?;
    let cpairs = CPairTable::new(d.triple());
    let initial_mixed = qe.output.mixed_support().len();
    let mut ws = Workspace { d: qe.output.matrix().clone(), w: qe.witness.matrix().clone() };
    let mut steps = Vec::new();
    loop {
        let current = d.with_matrix(ws.d.clone());
        let Some(v) = first_violation(&current, &sig, &cpairs)? else { break };
        apply(&mut ws, &v);
        check_contract(d, current.matrix(), &ws.d, &v)?;
        steps.push(v);
        if steps.len() > initial_mixed {
            return Err(Error::ContractViolation("elimination did not terminate".into()));
        }
    }
    let result = ws.finish(d, TransformKind::Weak).map_err(|e| Error::ContractViolation(e.to_string()))?;
    let certificate = certify(&result.output, &sig, &cpairs)
        .map_err(|_| Error::Integrity("minimal form lacks a certificate".into()))?;
    Ok(Minimized { result, signature: sig, cpairs, certificate, steps, initial_mixed })
}

/// Same zero pattern.
pub fn similar(d1: &MDifferential, d2: &MDifferential) -> bool {
    d1.similar(d2)
}
