//! Graded, linearly ordered bases with marked boundary and trivial subsets.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Boundary,
    Interior,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Boundary => "boundary",
            Side::Interior => "interior",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisElement {
    pub id: String,
    pub degree: i64,
    pub side: Side,
    /// Member of the mandatorily trivial subset; only boundary elements may carry it.
    pub trivial: bool,
}

impl BasisElement {
    pub fn boundary(id: impl Into<String>, degree: i64) -> Self {
        BasisElement { id: id.into(), degree, side: Side::Boundary, trivial: false }
    }

    pub fn interior(id: impl Into<String>, degree: i64) -> Self {
        BasisElement { id: id.into(), degree, side: Side::Interior, trivial: false }
    }

    pub fn trivial(id: impl Into<String>, degree: i64) -> Self {
        BasisElement { id: id.into(), degree, side: Side::Boundary, trivial: true }
    }

    pub fn is_boundary(&self) -> bool {
        self.side == Side::Boundary
    }
}

/// The ordered basis. Position in `elements` is the linear order.
#[derive(Clone, Debug)]
pub struct OrderedTriple {
    elements: Vec<BasisElement>,
    index: HashMap<String, usize>,
}

impl PartialEq for OrderedTriple {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for OrderedTriple {}

impl OrderedTriple {
    pub fn new(elements: Vec<BasisElement>) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if e.id.is_empty() {
                return Err(Error::InvalidTriple(format!("element {} has an empty id", i + 1)));
            }
            if index.insert(e.id.clone(), i).is_some() {
                return Err(Error::InvalidTriple(format!("duplicate id `{}`", e.id)));
            }
        }
        for (i, e) in elements.iter().enumerate() {
            if !e.trivial {
                continue;
            }
            if e.side != Side::Boundary {
                return Err(Error::InvalidTriple(format!("trivial element `{}` is not a boundary element", e.id)));
            }
            let Some(next) = elements.get(i + 1) else {
                return Err(Error::InvalidTriple(format!("trivial element `{}` has no successor", e.id)));
            };
            if next.side != Side::Interior {
                return Err(Error::InvalidTriple(format!(
                    "successor `{}` of trivial element `{}` is not interior",
                    next.id, e.id
                )));
            }
            if next.degree != e.degree + 1 {
                return Err(Error::InvalidTriple(format!(
                    "successor `{}` of trivial element `{}` has degree {}, expected {}",
                    next.id,
                    e.id,
                    next.degree,
                    e.degree + 1
                )));
            }
        }
        Ok(OrderedTriple { elements, index })
    }

    pub fn empty() -> Self {
        OrderedTriple { elements: Vec::new(), index: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &BasisElement {
        &self.elements[i]
    }

    pub fn id(&self, i: usize) -> &str {
        &self.elements[i].id
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.elements[i].degree
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.elements[i].side == Side::Boundary
    }

    pub fn is_trivial(&self, i: usize) -> bool {
        self.elements[i].trivial
    }

    pub fn boundary_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_boundary(i)).collect()
    }

    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_boundary(i)).collect()
    }

    pub fn trivial_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_trivial(i)).collect()
    }

    /// Sub-triple on the given ascending positions. Trivial marks survive only
    /// when `keep_marks` is set; the successor condition is then rechecked.
    pub fn select(&self, indices: &[usize], keep_marks: bool) -> Result<OrderedTriple> {
        let elements = indices
            .iter()
            .map(|&i| {
                let mut e = self.elements[i].clone();
                e.trivial &= keep_marks;
                e
            })
            .collect();
        OrderedTriple::new(elements)
    }

    /// Same sizes, degrees, sides and marks position by position; ids are ignored.
    pub fn isomorphic(&self, other: &OrderedTriple) -> bool {
        self.len() == other.len()
            && self
                .elements
                .iter()
                .zip(&other.elements)
                .all(|(a, b)| a.degree == b.degree && a.side == b.side && a.trivial == b.trivial)
    }

    /// Copy with every degree moved by `delta`.
    pub fn shifted(&self, delta: i64) -> OrderedTriple {
        let elements = self.elements.iter().map(|e| BasisElement { degree: e.degree + delta, ..e.clone() }).collect();
        OrderedTriple { elements, index: self.index.clone() }
    }

    /// Copy with every id prefixed.
    pub fn prefixed(&self, prefix: &str) -> OrderedTriple {
        let elements: Vec<_> =
            self.elements.iter().map(|e| BasisElement { id: format!("{prefix}{}", e.id), ..e.clone() }).collect();
        OrderedTriple::new(elements).expect("prefixing preserves validity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_ids() {
        let err = OrderedTriple::new(vec![BasisElement::boundary("a", 0), BasisElement::interior("a", 1)]);
        assert!(matches!(err, Err(Error::InvalidTriple(_))));
    }

    #[test]
    fn trivial_needs_interior_successor_one_degree_up() {
        assert!(OrderedTriple::new(vec![BasisElement::trivial("c", 0), BasisElement::interior("x", 1)]).is_ok());
        assert!(OrderedTriple::new(vec![BasisElement::trivial("c", 0), BasisElement::interior("x", 3)]).is_err());
        assert!(OrderedTriple::new(vec![BasisElement::trivial("c", 0), BasisElement::boundary("x", 1)]).is_err());
        assert!(OrderedTriple::new(vec![BasisElement::interior("x", 1), BasisElement::trivial("c", 0)]).is_err());
    }

    #[test]
    fn isomorphism_ignores_ids() {
        let a = OrderedTriple::new(vec![BasisElement::boundary("a", 0), BasisElement::interior("b", 1)]).unwrap();
        let b = OrderedTriple::new(vec![BasisElement::boundary("u", 0), BasisElement::interior("v", 1)]).unwrap();
        assert!(a.isomorphic(&b));
        assert!(!a.isomorphic(&b.shifted(1)));
    }
}
