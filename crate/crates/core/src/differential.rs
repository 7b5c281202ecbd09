//! The differential of an M-pair, its structural validation and the
//! operations that only need the matrix: conjugation, restriction to the
//! boundary subcomplex and the quotient complex.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::matrix::Matrix;
use crate::transform::{BasisTransform, TransformKind};
use crate::triple::OrderedTriple;

/// Square matrix on an ordered triple; `matrix[j][i]` is the coefficient of
/// `a_j` in the image of `a_i`.
///
/// Construction only checks shapes. Use [`MDifferential::validate`] for the
/// algebraic conditions; pipeline operations refuse invalid input.
#[derive(Clone, Debug)]
pub struct MDifferential {
    triple: Arc<OrderedTriple>,
    matrix: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Invariant {
    #[serde(rename = "order-triangularity")]
    OrderTriangularity,
    #[serde(rename = "degree-homogeneity")]
    DegreeHomogeneity,
    #[serde(rename = "square-zero")]
    SquareZero,
    #[serde(rename = "B-closure")]
    BoundaryClosure,
    #[serde(rename = "C-triviality")]
    CTriviality,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::OrderTriangularity => "order-triangularity",
            Invariant::DegreeHomogeneity => "degree-homogeneity",
            Invariant::SquareZero => "square-zero",
            Invariant::BoundaryClosure => "B-closure",
            Invariant::CTriviality => "C-triviality",
        })
    }
}

/// First offending cell for one invariant. `row`/`col` are positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantViolation {
    pub invariant: Invariant,
    pub row: usize,
    pub col: usize,
    pub row_id: String,
    pub col_id: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<InvariantViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated(&self, inv: Invariant) -> Option<&InvariantViolation> {
        self.violations.iter().find(|v| v.invariant == inv)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let parts: Vec<String> =
            self.violations.iter().map(|v| format!("{} at ({}, {})", v.invariant, v.row_id, v.col_id)).collect();
        f.write_str(&parts.join("; "))
    }
}

impl MDifferential {
    pub fn new(triple: Arc<OrderedTriple>, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != triple.len() || matrix.cols() != triple.len() {
            return Err(Error::InvalidTriple(format!(
                "matrix is {}x{} but the triple has {} elements",
                matrix.rows(),
                matrix.cols(),
                triple.len()
            )));
        }
        Ok(MDifferential { triple, matrix })
    }

    pub fn zero(triple: Arc<OrderedTriple>, field: Field) -> Self {
        let n = triple.len();
        MDifferential { triple, matrix: Matrix::zeros(field, n, n) }
    }

    /// Builds a differential from images written with ids:
    /// `("i4", &[("b3", 1), ("i2", 1)])` means `d(i4) = b3 + i2`.
    pub fn from_images(triple: Arc<OrderedTriple>, field: Field, images: &[(&str, &[(&str, i64)])]) -> Result<Self> {
        let mut d = MDifferential::zero(triple, field);
        for (src, terms) in images {
            let i = d.position(src)?;
            for (tgt, c) in terms.iter() {
                let j = d.position(tgt)?;
                d.matrix.set(j, i, field.from_i64(*c));
            }
        }
        Ok(d)
    }

    fn position(&self, id: &str) -> Result<usize> {
        self.triple.position(id).ok_or_else(|| Error::InvalidTriple(format!("unknown id `{id}`")))
    }

    pub fn triple(&self) -> &OrderedTriple {
        &self.triple
    }

    pub fn triple_arc(&self) -> &Arc<OrderedTriple> {
        &self.triple
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn len(&self) -> usize {
        self.triple.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triple.is_empty()
    }

    /// Coefficient of `a_row` in the image of `a_col`.
    pub fn entry(&self, row: usize, col: usize) -> &Coeff {
        self.matrix.get(row, col)
    }

    /// Same triple, new matrix.
    pub fn with_matrix(&self, matrix: Matrix) -> MDifferential {
        debug_assert_eq!(matrix.rows(), self.len());
        MDifferential { triple: Arc::clone(&self.triple), matrix }
    }

    /// Nonzero terms of the image of `a_col`, ascending by position.
    pub fn image(&self, col: usize) -> Vec<(usize, Coeff)> {
        self.matrix.column(col).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(r, c)| (r, c.clone())).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let t = &*self.triple;
        let n = t.len();
        let mut found: Vec<InvariantViolation> = Vec::new();
        let note = |found: &mut Vec<InvariantViolation>, inv: Invariant, row: usize, col: usize| {
            if !found.iter().any(|v| v.invariant == inv) {
                found.push(InvariantViolation {
                    invariant: inv,
                    row,
                    col,
                    row_id: t.id(row).to_string(),
                    col_id: t.id(col).to_string(),
                });
            }
        };
        for col in 0..n {
            for row in self.matrix.column_support(col) {
                if row >= col {
                    note(&mut found, Invariant::OrderTriangularity, row, col);
                }
                if t.degree(row) != t.degree(col) - 1 {
                    note(&mut found, Invariant::DegreeHomogeneity, row, col);
                }
                if t.is_boundary(col) && !t.is_boundary(row) {
                    note(&mut found, Invariant::BoundaryClosure, row, col);
                }
            }
        }
        let square = self.matrix.mul(&self.matrix);
        'outer: for col in 0..n {
            if let Some(row) = square.column_support(col).next() {
                note(&mut found, Invariant::SquareZero, row, col);
                break 'outer;
            }
        }
        for c in t.trivial_indices() {
            if self.matrix.get(c, c + 1).is_zero() {
                note(&mut found, Invariant::CTriviality, c, c + 1);
                break;
            }
        }
        found.sort_by_key(|v| v.invariant);
        ValidationReport { violations: found }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Validity of the bare complex: only the order, degree and square-zero
    /// conditions, ignoring the boundary and trivial marks.
    pub fn validate_complex(&self) -> ValidationReport {
        let mut report = self.validate();
        report.violations.retain(|v| {
            matches!(v.invariant, Invariant::OrderTriangularity | Invariant::DegreeHomogeneity | Invariant::SquareZero)
        });
        report
    }

    pub(crate) fn require_complex(&self) -> Result<()> {
        let report = self.validate_complex();
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidDifferential(report))
        }
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidDifferential(report))
        }
    }

    /// Positions of boundary elements `a_k` whose successor is interior and
    /// contains `a_k` in its image.
    pub fn trivial_elements(&self) -> Vec<usize> {
        let t = &*self.triple;
        (0..t.len().saturating_sub(1))
            .filter(|&k| t.is_boundary(k) && !t.is_boundary(k + 1) && !self.matrix.get(k, k + 1).is_zero())
            .collect()
    }

    /// Nonzero entries with a boundary row and an interior column, as
    /// `(interior, boundary)` pairs sorted lexicographically.
    pub fn mixed_support(&self) -> Vec<(usize, usize)> {
        let t = &*self.triple;
        let mut out = Vec::new();
        for a in t.interior_indices() {
            for b in self.matrix.column_support(a) {
                if t.is_boundary(b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The differential restricted to the boundary subcomplex.
    pub fn restrict_to_boundary(&self) -> MDifferential {
        self.select_unmarked(&self.triple.boundary_indices())
    }

    /// The induced differential on the quotient by the boundary subcomplex.
    pub fn quotient_by_boundary(&self) -> MDifferential {
        self.select_unmarked(&self.triple.interior_indices())
    }

    fn select_unmarked(&self, idx: &[usize]) -> MDifferential {
        let triple = self.triple.select(idx, false).expect("unmarked sub-triple is always valid");
        MDifferential { triple: Arc::new(triple), matrix: self.matrix.select(idx, idx) }
    }

    /// Summand on the given ascending positions, keeping trivial marks.
    pub fn select(&self, idx: &[usize]) -> Result<MDifferential> {
        let triple = self.triple.select(idx, true)?;
        Ok(MDifferential { triple: Arc::new(triple), matrix: self.matrix.select(idx, idx) })
    }

    /// Equality up to renaming ids.
    pub fn equal(&self, other: &MDifferential) -> bool {
        self.triple.isomorphic(&other.triple) && self.field() == other.field() && self.matrix == other.matrix
    }

    /// Same triple shape and identical zero pattern.
    pub fn similar(&self, other: &MDifferential) -> bool {
        self.triple.isomorphic(&other.triple) && self.matrix.same_pattern(&other.matrix)
    }

    /// `G D G^{-1}`. For ordered-pair and weak transforms the result must stay
    /// in the admissible class of the triple, otherwise an error is returned.
    pub fn conjugate(&self, g: &BasisTransform) -> Result<MDifferential> {
        if g.triple() != &*self.triple {
            return Err(Error::TripleMismatch);
        }
        if g.matrix().field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        let inv = g.inverse();
        let out = self.with_matrix(g.matrix().mul(&self.matrix).mul(&inv));
        if matches!(g.kind(), TransformKind::OrderedPair | TransformKind::Weak) {
            let report = out.validate();
            if !report.is_ok() {
                return Err(Error::LeavesClass(report));
            }
        }
        Ok(out)
    }

    pub fn shifted(&self, delta: i64) -> MDifferential {
        MDifferential { triple: Arc::new(self.triple.shifted(delta)), matrix: self.matrix.clone() }
    }

    pub fn prefixed(&self, prefix: &str) -> MDifferential {
        MDifferential { triple: Arc::new(self.triple.prefixed(prefix)), matrix: self.matrix.clone() }
    }
}
