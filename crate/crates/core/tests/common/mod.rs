#![allow(dead_code)]

use mpair_core::{BasisElement, OrderedTriple};

/// Every well-formed triple with `n` elements and degrees in `0..=max_degree`.
pub fn all_triples(n: usize, max_degree: usize) -> Vec<OrderedTriple> {
    let per = 2 * (max_degree + 1);
    let mut out = Vec::new();
    for code in 0..per.pow(n as u32) {
        let mut c = code;
        let mut base = Vec::with_capacity(n);
        for i in 0..n {
            let (side, deg) = (c % 2, (c / 2) % (max_degree + 1));
            c /= per;
            let id = format!("e{}", i + 1);
            base.push(if side == 0 {
                BasisElement::boundary(id, deg as i64)
            } else {
                BasisElement::interior(id, deg as i64)
            });
        }
        for marks in 0..(1usize << n) {
            let els = base
                .iter()
                .enumerate()
                .map(|(i, e)| BasisElement { trivial: marks >> i & 1 == 1, ..e.clone() })
                .collect();
            if let Ok(t) = OrderedTriple::new(els) {
                out.push(t);
            }
        }
    }
    out
}
