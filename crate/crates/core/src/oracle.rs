//! Brute-force homology by Gaussian elimination, used to cross-check the
//! reductions. Deliberately naive and self-contained: nothing here calls into
//! `reduction`.

use std::collections::BTreeMap;

use crate::differential::MDifferential;
use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::reduction::PairingReport;

/// Dimension per degree; degrees with dimension zero are omitted.
pub type HomologyDims = BTreeMap<i64, usize>;

fn total(h: &HomologyDims) -> usize {
    h.values().sum()
}

pub(crate) mod linalg {
    use super::*;

    /// Rank of a set of equal-length vectors.
    pub fn rank(field: Field, vectors: &[Vec<Coeff>]) -> usize {
        echelon(field, vectors).len()
    }

    /// Row echelon basis of the span.
    pub fn echelon(field: Field, vectors: &[Vec<Coeff>]) -> Vec<Vec<Coeff>> {
        let mut basis: Vec<(usize, Vec<Coeff>)> = Vec::new();
        for v in vectors {
            let mut v = v.clone();
            for (pivot, b) in &basis {
                if !v[*pivot].is_zero() {
                    let f = v[*pivot].clone();
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= &(&f * y);
                    }
                }
            }
            if let Some(pivot) = v.iter().position(|c| !c.is_zero()) {
                let inv = v[pivot].inv().expect("nonzero pivot");
                for x in v.iter_mut() {
                    *x = &*x * &inv;
                }
                for (_, b) in basis.iter_mut() {
                    if !b[pivot].is_zero() {
                        let f = b[pivot].clone();
                        for (x, y) in b.iter_mut().zip(&v) {
                            *x -= &(&f * y);
                        }
                    }
                }
                basis.push((pivot, v));
            }
        }
        let _ = field;
        basis.into_iter().map(|(_, v)| v).collect()
    }

    /// Basis of `{c : sum_i c_i * columns[i] = 0}`.
    pub fn nullspace(field: Field, columns: &[Vec<Coeff>], rows: usize) -> Vec<Vec<Coeff>> {
        let n = columns.len();
        // reduced row echelon form of the rows x n matrix
        let mut m: Vec<Vec<Coeff>> = (0..rows).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(row, p);
            let inv = m[row][col].inv().expect("nonzero pivot");
            for x in m[row].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..rows {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    let pivot_row = m[row].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                        *x -= &(&f * y);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == rows {
                break;
            }
        }
        let mut out = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![field.zero(); n];
            v[free] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[r][free];
            }
            out.push(v);
        }
        out
    }
}

fn column(d: &MDifferential, i: usize) -> Vec<Coeff> {
    d.matrix().column(i).to_vec()
}

fn degrees(d: &MDifferential, idx: &[usize]) -> Vec<i64> {
    let mut out: Vec<i64> = idx.iter().map(|&i| d.triple().degree(i)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Homology of the complex spanned by `subset` with the induced differential
/// (rows outside `subset` dropped). Exact as a subcomplex when `subset` is
/// closed, and as a quotient complex when it is a window of the order.
fn dims_on(d: &MDifferential, subset: &[usize]) -> HomologyDims {
    let f = d.field();
    let restricted = |i: usize| -> Vec<Coeff> { subset.iter().map(|&r| d.entry(r, i).clone()).collect() };
    let rank_in_degree = |k: i64| -> usize {
        let cols: Vec<Vec<Coeff>> =
            subset.iter().filter(|&&i| d.triple().degree(i) == k).map(|&i| restricted(i)).collect();
        linalg::rank(f, &cols)
    };
    let mut out = HomologyDims::new();
    for k in degrees(d, subset) {
        let count = subset.iter().filter(|&&i| d.triple().degree(i) == k).count();
        let dim = count - rank_in_degree(k) - rank_in_degree(k + 1);
        if dim > 0 {
            out.insert(k, dim);
        }
    }
    out
}

/// Homology of the subcomplex spanned by `subset`, which must be closed
/// under the differential.
pub fn homology_dims(d: &MDifferential, subset: &[usize]) -> Result<HomologyDims> {
    let mut inside = vec![false; d.len()];
    for &i in subset {
        inside[i] = true;
    }
    for &i in subset {
        if d.matrix().column_support(i).any(|r| !inside[r]) {
            return Err(Error::NotClosed(d.triple().id(i).to_string()));
        }
    }
    Ok(dims_on(d, subset))
}

/// Homology of the window quotient spanned by positions `n..m` (the elements
/// `a_{n+1}, ..., a_m` in one-based terms).
pub fn relative_dims(d: &MDifferential, m: usize, n: usize) -> Result<HomologyDims> {
    if n > m || m > d.len() {
        return Err(Error::BadWindow { m, n, len: d.len() });
    }
    let window: Vec<usize> = (n..m).collect();
    Ok(dims_on(d, &window))
}

/// Pairs decided by the four-corner dimension test on windows, essentials by
/// the jump in the image of prefix homology in total homology.
pub fn pairing_via_oracle(d: &MDifferential) -> Result<PairingReport> {
    let n = d.len();
    // dtab[m][k] = total dimension of the window (k, m]
    let mut dtab = vec![vec![0usize; n + 1]; n + 1];
    for (m, row) in dtab.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate().take(m + 1) {
            *cell = total(&relative_dims(d, m, k)?);
        }
    }
    let mut pairs = Vec::new();
    for m in 1..=n {
        for k in 1..m {
            let here = dtab[m][k];
            if here == dtab[m - 1][k - 1] && here == dtab[m - 1][k] + 1 && here == dtab[m][k - 1] + 1 {
                pairs.push((m - 1, k - 1));
            }
        }
    }
    let report = PairingReport::from_pairs(n, pairs);
    let essentials = essential_elements(d);
    if report.essentials != essentials {
        return Err(Error::Integrity(format!(
            "window test leaves {:?} unpaired but the image filtration jumps at {:?}",
            report.essentials, essentials
        )));
    }
    Ok(report)
}

/// Positions where `dim image(H(A^j) -> H(A))` increases.
fn essential_elements(d: &MDifferential) -> Vec<usize> {
    let f = d.field();
    let n = d.len();
    let boundaries: Vec<Vec<Coeff>> = (0..n).map(|i| column(d, i)).collect();
    let bd_rank = linalg::rank(f, &boundaries);
    let image_dim = |j: usize| -> usize {
        let cols: Vec<Vec<Coeff>> = (0..j).map(|i| column(d, i)).collect();
        let mut span = boundaries.clone();
        for c in linalg::nullspace(f, &cols, n) {
            let mut v = vec![f.zero(); n];
            v[..j].clone_from_slice(&c);
            span.push(v);
        }
        linalg::rank(f, &span) - bd_rank
    };
    let mut out = Vec::new();
    let mut prev = 0;
    for j in 1..=n {
        let cur = image_dim(j);
        if cur > prev {
            out.push(j - 1);
        }
        prev = cur;
    }
    out
}

/// Per-degree pieces used by the boundary-essential test, all as vectors in
/// the full coordinate space.
struct BoundaryData {
    /// Boundaries of the boundary subcomplex.
    bd: Vec<Vec<Coeff>>,
    /// Images of relative cycles (they are cycles of the boundary subcomplex).
    connecting: Vec<Vec<Coeff>>,
}

fn boundary_data(d: &MDifferential, k: i64) -> BoundaryData {
    let f = d.field();
    let t = d.triple();
    let n = d.len();
    let bd = t.boundary_indices().into_iter().filter(|&i| t.degree(i) == k + 1).map(|i| column(d, i)).collect();
    // relative cycles of degree k+1: combinations whose image has no interior part
    let top: Vec<usize> = (0..n).filter(|&i| t.degree(i) == k + 1).collect();
    let interior = t.interior_indices();
    let proj: Vec<Vec<Coeff>> =
        top.iter().map(|&i| interior.iter().map(|&r| d.entry(r, i).clone()).collect()).collect();
    let mut connecting = Vec::new();
    for c in linalg::nullspace(f, &proj, interior.len()) {
        let mut v = vec![f.zero(); n];
        for (coef, &i) in c.iter().zip(&top) {
            if coef.is_zero() {
                continue;
            }
            for r in d.matrix().column_support(i) {
                v[r] += &(coef * d.entry(r, i));
            }
        }
        connecting.push(v);
    }
    BoundaryData { bd, connecting }
}

/// Cycles of the boundary subcomplex spanned by its first `count` elements,
/// restricted to degree `k`.
fn boundary_prefix_cycles(d: &MDifferential, count: usize, k: i64) -> Vec<Vec<Coeff>> {
    let f = d.field();
    let t = d.triple();
    let n = d.len();
    let cols: Vec<usize> = t.boundary_indices().into_iter().take(count).filter(|&i| t.degree(i) == k).collect();
    let vecs: Vec<Vec<Coeff>> = cols.iter().map(|&i| column(d, i)).collect();
    linalg::nullspace(f, &vecs, n)
        .into_iter()
        .map(|c| {
            let mut v = vec![f.zero(); n];
            for (coef, &i) in c.iter().zip(&cols) {
                v[i] = coef.clone();
            }
            v
        })
        .collect()
}

fn concat(a: &[Vec<Coeff>], b: &[Vec<Coeff>]) -> Vec<Vec<Coeff>> {
    a.iter().chain(b).cloned().collect()
}

/// Boundary elements `b_k` at which the intersection of the prefix image
/// `i_* H(B^k)` with the connecting image `d_* H(A, B)` grows.
pub fn boundary_essential_via_ik(d: &MDifferential) -> Vec<usize> {
    let f = d.field();
    let t = d.triple();
    let b = t.boundary_indices();
    let degs = degrees(d, &b);
    let data: BTreeMap<i64, BoundaryData> = degs.iter().map(|&k| (k, boundary_data(d, k))).collect();
    // dim I_k summed over degrees, for each prefix length
    let dim_i = |count: usize| -> usize {
        let mut sum = 0;
        for &k in &degs {
            let bd = &data[&k];
            let s = concat(&boundary_prefix_cycles(d, count, k), &bd.bd);
            let tt = concat(&bd.connecting, &bd.bd);
            let rs = linalg::rank(f, &s);
            let rt = linalg::rank(f, &tt);
            let rst = linalg::rank(f, &concat(&s, &tt));
            sum += rs + rt - rst - linalg::rank(f, &bd.bd);
        }
        sum
    };
    let mut out = Vec::new();
    let mut prev = 0;
    for (k, &pos) in b.iter().enumerate() {
        let cur = dim_i(k + 1);
        if cur > prev {
            out.push(pos);
        }
        prev = cur;
    }
    out
}

/// `dim d_*(H_{k+1}(A, B))` for each degree `k` of the boundary.
pub fn connecting_image_dims(d: &MDifferential) -> HomologyDims {
    let f = d.field();
    let b = d.triple().boundary_indices();
    let mut out = HomologyDims::new();
    for k in degrees(d, &b) {
        let bd = boundary_data(d, k);
        let dim = linalg::rank(f, &concat(&bd.connecting, &bd.bd)) - linalg::rank(f, &bd.bd);
        if dim > 0 {
            out.insert(k, dim);
        }
    }
    out
}
