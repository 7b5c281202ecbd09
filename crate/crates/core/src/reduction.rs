//! Triangular reductions: the unique elementary form, its pairs and
//! essential elements, block-elementary and quasi-elementary forms, and the
//! invariant signature read off the latter.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::differential::MDifferential;
use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::matrix::Matrix;
use crate::transform::{BasisTransform, TransformKind};
use crate::triple::OrderedTriple;

/// A reduced differential together with `witness` such that
/// `output = conjugate(input, witness)`.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub output: MDifferential,
    pub witness: BasisTransform,
}

/// Running conjugation state: `d = w * d0 * w^{-1}` throughout.
pub(crate) struct Workspace {
    pub d: Matrix,
    pub w: Matrix,
}

impl Workspace {
    pub fn new(d0: &MDifferential) -> Self {
        Workspace { d: d0.matrix().clone(), w: Matrix::identity(d0.field(), d0.len()) }
    }

    /// Basis change `a_k -> a_k + c a_j`.
    pub fn add(&mut self, k: usize, j: usize, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        self.d.add_col_multiple(k, j, c);
        let neg = -c;
        self.d.add_row_multiple(j, k, &neg);
        self.w.add_row_multiple(j, k, &neg);
    }

    /// Basis change `a_k -> c a_k`.
    pub fn scale(&mut self, k: usize, c: &Coeff) {
        if c.is_one() {
            return;
        }
        let inv = c.inv().expect("scaling by a nonzero coefficient");
        self.d.scale_col(k, c);
        self.d.scale_row(k, &inv);
        self.w.scale_row(k, &inv);
    }

    pub fn finish(self, input: &MDifferential, kind: TransformKind) -> Result<ReductionResult> {
        let witness = BasisTransform::new(input.triple().clone(), self.w, kind)
            .map_err(|e| Error::Integrity(format!("reduction produced a bad witness: {e}")))?;
        Ok(ReductionResult { output: input.with_matrix(self.d), witness })
    }
}

/// Brings the block on `idx` (ascending positions) to elementary form.
/// Rows outside `idx` are ignored when reading supports.
fn elementary_pass(ws: &mut Workspace, idx: &[usize]) {
    let n = ws.d.rows();
    let mut in_block = vec![false; n];
    for &i in idx {
        in_block[i] = true;
    }
    let mut source_of: BTreeMap<usize, usize> = BTreeMap::new();
    let support = |d: &Matrix, col: usize| -> Vec<usize> { d.column_support(col).filter(|&r| in_block[r]).collect() };
    for &col in idx {
        for r in support(&ws.d, col) {
            if let Some(&s) = source_of.get(&r) {
                let lambda = ws.d.get(r, col).clone();
                ws.add(col, s, &-lambda);
            }
        }
        let rest = support(&ws.d, col);
        debug_assert!(rest.iter().all(|r| !source_of.contains_key(r)));
        let Some(&l) = rest.last() else { continue };
        let lambda_l = ws.d.get(l, col).clone();
        let others: Vec<(usize, Coeff)> =
            rest[..rest.len() - 1].iter().map(|&r| (r, ws.d.get(r, col).clone())).collect();
        ws.scale(l, &lambda_l);
        for (r, lambda_r) in others {
            ws.add(l, r, &lambda_r);
        }
        source_of.insert(l, col);
    }
}

/// The unique elementary differential equivalent to `d` under upper-triangular
/// changes of basis. Boundary marks are ignored.
pub fn reduce_elementary(d: &MDifferential) -> Result<ReductionResult> {
    d.require_complex()?;
    let mut ws = Workspace::new(d);
    let all: Vec<usize> = (0..d.len()).collect();
    elementary_pass(&mut ws, &all);
    ws.finish(d, TransformKind::Ordered)
}

/// Source/target pairs of an elementary matrix restricted to `idx`, or `None`
/// when the block is not elementary.
fn elementary_pairs(m: &Matrix, idx: &[usize]) -> Option<Vec<(usize, usize)>> {
    let mut in_block = vec![false; m.rows()];
    for &i in idx {
        in_block[i] = true;
    }
    let mut pairs = Vec::new();
    let mut hit = vec![false; m.rows()];
    for &col in idx {
        let sup: Vec<usize> = m.column_support(col).filter(|&r| in_block[r]).collect();
        match sup.as_slice() {
            [] => {}
            [r] if m.get(*r, col).is_one() && !hit[*r] => {
                hit[*r] = true;
                pairs.push((col, *r));
            }
            _ => return None,
        }
    }
    Some(pairs)
}

pub fn is_elementary(d: &MDifferential) -> bool {
    let all: Vec<usize> = (0..d.len()).collect();
    elementary_pairs(d.matrix(), &all).is_some()
}

/// Pairs are `(source, target)` with `source > target`, sorted by source.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairingReport {
    pub pairs: Vec<(usize, usize)>,
    pub essentials: Vec<usize>,
}

impl PairingReport {
    pub(crate) fn from_pairs(n: usize, mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        let mut used = vec![false; n];
        for &(s, t) in &pairs {
            used[s] = true;
            used[t] = true;
        }
        let essentials = (0..n).filter(|&i| !used[i]).collect();
        PairingReport { pairs, essentials }
    }

    /// Essential counts per degree.
    pub fn essentials_by_degree(&self, triple: &OrderedTriple) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &e in &self.essentials {
            *out.entry(triple.degree(e)).or_insert(0) += 1;
        }
        out
    }
}

pub fn pairing(d: &MDifferential) -> Result<PairingReport> {
    let red = reduce_elementary(d)?;
    let all: Vec<usize> = (0..d.len()).collect();
    let pairs = elementary_pairs(red.output.matrix(), &all)
        .ok_or_else(|| Error::Integrity("elementary reduction returned a non-elementary matrix".into()))?;
    Ok(PairingReport::from_pairs(d.len(), pairs))
}

/// Equivalent differential whose boundary block and quotient block are both
/// elementary, via an upper-triangular boundary-preserving witness.
pub fn block_elementary(d: &MDifferential) -> Result<ReductionResult> {
    d.require_valid()?;
    let mut ws = Workspace::new(d);
    elementary_pass(&mut ws, &d.triple().boundary_indices());
    elementary_pass(&mut ws, &d.triple().interior_indices());
    ws.finish(d, TransformKind::OrderedPair)
}

/// The P/Q/R and X/Y/Z blocks of a block-elementary differential.
/// `qr` and `yz` hold `(source, target)` pairs, sorted by source.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub r: Vec<usize>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    pub qr: Vec<(usize, usize)>,
    pub yz: Vec<(usize, usize)>,
}

impl Partition {
    pub fn qr_target(&self, q: usize) -> Option<usize> {
        self.qr.iter().find(|p| p.0 == q).map(|p| p.1)
    }

    pub fn qr_source(&self, r: usize) -> Option<usize> {
        self.qr.iter().find(|p| p.1 == r).map(|p| p.0)
    }

    pub fn yz_target(&self, y: usize) -> Option<usize> {
        self.yz.iter().find(|p| p.0 == y).map(|p| p.1)
    }

    pub fn yz_source(&self, z: usize) -> Option<usize> {
        self.yz.iter().find(|p| p.1 == z).map(|p| p.0)
    }
}

fn split(idx: &[usize], pairs: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut sources: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let mut targets: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    sources.sort_unstable();
    targets.sort_unstable();
    let free = idx.iter().copied().filter(|i| !sources.contains(i) && !targets.contains(i)).collect();
    (free, sources, targets)
}

pub fn partition_pqrxyz(d: &MDifferential) -> Result<Partition> {
    let t = d.triple();
    let (bi, ii) = (t.boundary_indices(), t.interior_indices());
    let qr = elementary_pairs(d.matrix(), &bi).ok_or(Error::WrongForm("block-elementary"))?;
    let yz = elementary_pairs(d.matrix(), &ii).ok_or(Error::WrongForm("block-elementary"))?;
    let (p, q, r) = split(&bi, &qr);
    let (x, y, z) = split(&ii, &yz);
    Ok(Partition { p, q, r, x, y, z, qr, yz })
}

/// Checks the four quasi-elementary conditions, returning the first failure.
pub fn check_quasi_elementary(d: &MDifferential) -> std::result::Result<Partition, String> {
    let part = partition_pqrxyz(d).map_err(|_| "blocks are not elementary".to_string())?;
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in &part.x {
        let ps: Vec<usize> = d.matrix().column_support(x).filter(|r| part.p.contains(r)).collect();
        if ps.len() > 1 {
            return Err(format!("image of `{}` contains several P elements", d.triple().id(x)));
        }
        if let Some(&p) = ps.first() {
            if !d.entry(p, x).is_one() {
                return Err(format!(
                    "coefficient of `{}` in image of `{}` is not 1",
                    d.triple().id(p),
                    d.triple().id(x)
                ));
            }
            if let Some(prev) = seen.insert(p, x) {
                return Err(format!(
                    "`{}` appears in the images of both `{}` and `{}`",
                    d.triple().id(p),
                    d.triple().id(prev),
                    d.triple().id(x)
                ));
            }
        }
    }
    Ok(part)
}

pub fn is_quasi_elementary(d: &MDifferential) -> bool {
    check_quasi_elementary(d).is_ok()
}

/// Equivalent quasi-elementary differential via an upper-triangular
/// boundary-preserving witness.
pub fn reduce_quasi_elementary(d: &MDifferential) -> Result<ReductionResult> {
    d.require_valid()?;
    let mut ws = Workspace::new(d);
    elementary_pass(&mut ws, &d.triple().boundary_indices());
    elementary_pass(&mut ws, &d.triple().interior_indices());
    let part = partition_pqrxyz(&d.with_matrix(ws.d.clone()))?;
    let mut is_p = vec![false; d.len()];
    for &p in &part.p {
        is_p[p] = true;
    }
    // P element -> the earlier x whose image holds it
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in &part.x {
        let used: Vec<(usize, usize)> =
            ws.d.column_support(x).filter(|&r| is_p[r]).filter_map(|r| owner.get(&r).map(|&xi| (xi, r))).collect();
        let mut used = used;
        used.sort_unstable();
        for (xi, p) in used {
            let lambda = ws.d.get(p, x).clone();
            ws.add(x, xi, &-lambda);
        }
        let rest: Vec<usize> = ws.d.column_support(x).filter(|&r| is_p[r]).collect();
        if let Some(&pm) = rest.last() {
            debug_assert!(!owner.contains_key(&pm));
            let mu_max = ws.d.get(pm, x).clone();
            let others: Vec<(usize, Coeff)> =
                rest[..rest.len() - 1].iter().map(|&r| (r, ws.d.get(r, x).clone())).collect();
            ws.scale(pm, &mu_max);
            for (r, mu) in others {
                ws.add(pm, r, &mu);
            }
            owner.insert(pm, x);
        }
        check_prefix(&ws.d, &part, x, &is_p)?;
    }
    let out = ws.finish(d, TransformKind::OrderedPair)?;
    check_quasi_elementary(&out.output).map_err(Error::Integrity)?;
    Ok(out)
}

/// Conditions 2-4 on the X columns up to and including `upto`.
fn check_prefix(m: &Matrix, part: &Partition, upto: usize, is_p: &[bool]) -> Result<()> {
    let mut seen = vec![false; m.rows()];
    for &x in part.x.iter().take_while(|&&x| x <= upto) {
        let ps: Vec<usize> = m.column_support(x).filter(|&r| is_p[r]).collect();
        if ps.len() > 1 || ps.iter().any(|&p| !m.get(p, x).is_one() || seen[p]) {
            return Err(Error::Integrity(format!("quasi-elementary induction broke at column {}", x + 1)));
        }
        for p in ps {
            seen[p] = true;
        }
    }
    Ok(())
}

/// `hplus` pairs `(p, x)`: the P elements hit by X images in a
/// quasi-elementary form, each with the unique X element hitting it.
fn read_hplus(d: &MDifferential, part: &Partition) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &x in &part.x {
        for p in d.matrix().column_support(x) {
            if part.p.contains(&p) {
                out.push((p, x));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Boundary-essential elements `H` and the map `h_+`, as sorted `(p, x)` pairs.
pub fn boundary_essential(d: &MDifferential) -> Result<Vec<(usize, usize)>> {
    let qe = reduce_quasi_elementary(d)?;
    let part = partition_pqrxyz(&qe.output)?;
    Ok(read_hplus(&qe.output, &part))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InvariantSignature {
    #[serde(flatten)]
    pub partition: Partition,
    pub h: Vec<usize>,
    pub hplus: Vec<(usize, usize)>,
}

impl InvariantSignature {
    pub fn hplus_of(&self, p: usize) -> Option<usize> {
        self.hplus.iter().find(|e| e.0 == p).map(|e| e.1)
    }

    pub fn in_h(&self, p: usize) -> bool {
        self.h.contains(&p)
    }

    pub fn in_hplus_image(&self, x: usize) -> bool {
        self.hplus.iter().any(|e| e.1 == x)
    }
}

/// Signature of a differential that is already quasi-elementary.
pub fn signature_of_quasi_elementary(d: &MDifferential) -> Result<InvariantSignature> {
    let partition = check_quasi_elementary(d).map_err(|_| Error::WrongForm("quasi-elementary"))?;
    let hplus = read_hplus(d, &partition);
    let h = hplus.iter().map(|e| e.0).collect();
    Ok(InvariantSignature { partition, h, hplus })
}

pub fn invariant_signature(d: &MDifferential) -> Result<InvariantSignature> {
    let qe = reduce_quasi_elementary(d)?;
    signature_of_quasi_elementary(&qe.output)
}
