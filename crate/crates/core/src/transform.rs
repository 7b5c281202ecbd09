//! Change-of-basis matrices in the four automorphism groups.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::matrix::Matrix;
use crate::triple::OrderedTriple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    /// Upper-triangular, degree 0.
    Ordered,
    /// Upper-triangular and boundary-preserving.
    OrderedPair,
    /// Boundary-preserving only.
    Pair,
    /// Boundary-preserving with triangular boundary block and triangular
    /// quotient block; the mixed block is free.
    Weak,
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformKind::Ordered => "ordered",
            TransformKind::OrderedPair => "ordered_pair",
            TransformKind::Pair => "pair",
            TransformKind::Weak => "weak",
        })
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ordered" => Ok(TransformKind::Ordered),
            "ordered_pair" => Ok(TransformKind::OrderedPair),
            "pair" => Ok(TransformKind::Pair),
            "weak" => Ok(TransformKind::Weak),
            _ => Err(Error::InvalidTriple(format!("unknown transform kind `{s}`"))),
        }
    }
}

impl TransformKind {
    /// Whether a nonzero `G[j, i]` is allowed by the shape constraints
    /// (degree and invertibility are checked separately).
    pub fn admits(self, triple: &OrderedTriple, j: usize, i: usize) -> bool {
        if triple.degree(i) != triple.degree(j) {
            return false;
        }
        let bi = triple.is_boundary(i);
        let bj = triple.is_boundary(j);
        let preserves = !(bi && !bj);
        match self {
            TransformKind::Ordered => j <= i,
            TransformKind::OrderedPair => j <= i && preserves,
            TransformKind::Pair => preserves,
            TransformKind::Weak => preserves && (bi != bj || j <= i),
        }
    }
}

/// `G` together with the group it is claimed to lie in. Column `i` holds the
/// coordinates of the new `a_i`.
#[derive(Clone, Debug)]
pub struct BasisTransform {
    triple: OrderedTriple,
    matrix: Matrix,
    kind: TransformKind,
}

impl BasisTransform {
    pub fn new(triple: OrderedTriple, matrix: Matrix, kind: TransformKind) -> Result<Self> {
        let bad = |reason: String| Error::InvalidTransform { kind, reason };
        let n = triple.len();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(bad(format!("matrix is {}x{}, expected {n}x{n}", matrix.rows(), matrix.cols())));
        }
        for i in 0..n {
            for j in matrix.column_support(i) {
                if triple.degree(i) != triple.degree(j) {
                    return Err(bad(format!("entry ({}, {}) changes degree", triple.id(j), triple.id(i))));
                }
                if !kind.admits(&triple, j, i) {
                    return Err(bad(format!("entry ({}, {}) is not allowed", triple.id(j), triple.id(i))));
                }
            }
        }
        let invertible = match kind {
            // Triangular or block-triangular with triangular diagonal blocks:
            // invertible iff the diagonal is.
            TransformKind::Ordered | TransformKind::OrderedPair | TransformKind::Weak => {
                (0..n).all(|i| !matrix.get(i, i).is_zero())
            }
            TransformKind::Pair => matrix.inverse().is_some(),
        };
        if !invertible {
            return Err(bad("matrix is singular".into()));
        }
        Ok(BasisTransform { triple, matrix, kind })
    }

    pub fn identity(triple: &OrderedTriple, field: Field, kind: TransformKind) -> Self {
        BasisTransform { triple: triple.clone(), matrix: Matrix::identity(field, triple.len()), kind }
    }

    pub fn triple(&self) -> &OrderedTriple {
        &self.triple
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn inverse(&self) -> Matrix {
        self.matrix.inverse().expect("validated transform is invertible")
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.field(), self.triple.len())
    }

    /// `self * other`, i.e. apply `other` first. The product is checked
    /// against `kind`.
    pub fn compose(&self, other: &BasisTransform, kind: TransformKind) -> Result<BasisTransform> {
        if self.triple != other.triple {
            return Err(Error::TripleMismatch);
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        BasisTransform::new(self.triple.clone(), self.matrix.mul(&other.matrix), kind)
    }

    /// Same matrix under a weaker group label; fails if the matrix does not fit.
    pub fn relabel(&self, kind: TransformKind) -> Result<BasisTransform> {
        BasisTransform::new(self.triple.clone(), self.matrix.clone(), kind)
    }
}

/// A nonzero coefficient: uniform over GF(p)*, or drawn from a small fixed
/// set of rationals.
pub fn random_nonzero<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Coeff {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(1..p as i64)),
        Field::Rational => {
            const NUMS: [(i64, i64); 8] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (-3, 1), (1, 2), (-2, 3)];
            let (n, d) = NUMS[rng.gen_range(0..NUMS.len())];
            &field.from_i64(n) * &field.from_i64(d).inv().expect("nonzero")
        }
    }
}

/// Any coefficient, zero included.
pub fn random_coeff<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Coeff {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
        Field::Rational => {
            if rng.gen_bool(0.25) {
                field.zero()
            } else {
                random_nonzero(field, rng)
            }
        }
    }
}

fn triangular_sample(
    triple: &OrderedTriple,
    field: Field,
    density: f64,
    rng: &mut ChaCha8Rng,
    allowed: impl Fn(usize, usize) -> bool,
) -> Matrix {
    let n = triple.len();
    let mut m = Matrix::zeros(field, n, n);
    for i in 0..n {
        m.set(i, i, random_nonzero(field, rng));
        for j in 0..n {
            if j != i && allowed(j, i) && rng.gen_bool(density) {
                m.set(j, i, random_nonzero(field, rng));
            }
        }
    }
    m
}

/// Deterministic random element of the given group. `density` is the
/// probability that an admissible off-diagonal cell is nonzero.
pub fn random_transform(
    triple: &OrderedTriple,
    kind: TransformKind,
    field: Field,
    seed: u64,
    density: f64,
) -> BasisTransform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = density.clamp(0.0, 1.0);
    let matrix = match kind {
        TransformKind::Pair => {
            // upper times lower, both boundary-preserving
            let upper = triangular_sample(triple, field, density, &mut rng, |j, i| {
                j < i && TransformKind::Pair.admits(triple, j, i)
            });
            let lower = triangular_sample(triple, field, density, &mut rng, |j, i| {
                j > i && TransformKind::Pair.admits(triple, j, i)
            });
            upper.mul(&lower)
        }
        _ => triangular_sample(triple, field, density, &mut rng, |j, i| kind.admits(triple, j, i)),
    };
    BasisTransform::new(triple.clone(), matrix, kind).expect("sampled transform satisfies its kind")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential::tests::e1;

    #[test]
    fn random_transforms_are_valid_and_deterministic() {
        let d = e1(Field::Prime(5));
        for kind in [TransformKind::Ordered, TransformKind::OrderedPair, TransformKind::Pair, TransformKind::Weak] {
            for seed in 0..20 {
                let g = random_transform(d.triple(), kind, Field::Prime(5), seed, 0.7);
                let h = random_transform(d.triple(), kind, Field::Prime(5), seed, 0.7);
                assert_eq!(g.matrix(), h.matrix());
                assert!(BasisTransform::new(d.triple().clone(), g.matrix().clone(), kind).is_ok());
            }
        }
    }

    #[test]
    fn rejects_lower_entry_for_ordered() {
        let d = e1(Field::Rational);
        let mut m = Matrix::identity(Field::Rational, 4);
        // b3 has the same degree as i2 and sits after it
        m.set(2, 1, Field::Rational.one());
        assert!(BasisTransform::new(d.triple().clone(), m.clone(), TransformKind::Ordered).is_err());
        // it maps interior i2 partly onto boundary b3, which weak allows
        assert!(BasisTransform::new(d.triple().clone(), m, TransformKind::Weak).is_ok());
    }

    #[test]
    fn rejects_degree_change_and_singular() {
        let d = e1(Field::Rational);
        let mut m = Matrix::identity(Field::Rational, 4);
        m.set(0, 1, Field::Rational.one());
        assert!(BasisTransform::new(d.triple().clone(), m, TransformKind::Pair).is_err());
        let mut m = Matrix::identity(Field::Rational, 4);
        m.set(3, 3, Field::Rational.zero());
        assert!(BasisTransform::new(d.triple().clone(), m, TransformKind::Ordered).is_err());
    }
}
