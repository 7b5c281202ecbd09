//! Exact normal forms of M-pairs: ordered, graded chain complexes with a
//! marked subcomplex, up to triangular changes of basis.

// `is_multiple_of` is newer than the declared rust-version.
#![allow(unknown_lints, clippy::manual_is_multiple_of)]

pub mod decompose;
pub mod differential;
pub mod error;
pub mod field;
pub mod format;
pub mod matrix;
pub mod minimize;
pub mod modelgen;
pub mod oracle;
pub mod reduction;
pub mod render;
pub mod report;
pub mod transform;
pub mod triple;

pub use decompose::{canonical_form, sharp, split_direct_sum, CanonicalDecomposition, Label};
pub use differential::{Invariant, InvariantViolation, MDifferential, ValidationReport};
pub use error::{Error, Result};
pub use field::{Coeff, Field};
pub use matrix::Matrix;
pub use transform::{random_transform, BasisTransform, TransformKind};
pub use triple::{BasisElement, OrderedTriple, Side};
