use std::collections::BTreeMap;

mod common;

use common::all_triples;

use mpair_core::decompose::{canonical_form, realize, split_direct_sum, Label};
use mpair_core::modelgen::{enumerate_all, random_mdifferential, random_triple};
use mpair_core::oracle;
use mpair_core::{random_transform, Field, MDifferential, TransformKind};

fn total(h: BTreeMap<i64, usize>) -> usize {
    h.values().sum()
}

/// Shape data that must agree between a component and the template of its
/// label: sizes of A, B, C and total ranks of H(A), H(B).
fn shape(d: &MDifferential) -> (usize, usize, usize, usize, usize) {
    let all: Vec<usize> = (0..d.len()).collect();
    let b = d.triple().boundary_indices();
    (
        d.len(),
        b.len(),
        d.trivial_elements().len(),
        total(oracle::homology_dims(d, &all).unwrap()),
        total(oracle::homology_dims(d, &b).unwrap()),
    )
}

#[test]
fn exhaustive_small_pairs_decompose_cleanly() {
    let field = Field::Prime(2);
    let mut seen = 0;
    let mut labels = BTreeMap::new();
    for n in 1..=6 {
        for t in all_triples(n, 2) {
            for d in enumerate_all(&t, field, 1 << 16).unwrap() {
                let c = canonical_form(&d).unwrap_or_else(|e| panic!("{e} on {:?}", d.matrix().to_strings()));
                let out = &c.minimized.result.output;
                assert_eq!(c.components.iter().map(|r| r.elements.len()).sum::<usize>(), n);
                for rec in &c.components {
                    let part = out.select(&rec.elements).unwrap();
                    let template = realize(&rec.label.parse::<Label>().unwrap(), field).unwrap();
                    assert_eq!(shape(&part), shape(&template), "{}", rec.label);
                    assert_eq!(split_direct_sum(&part).unwrap().len(), 1);
                    *labels.entry(rec.label.clone()).or_insert(0usize) += 1;
                }
                seen += 1;
            }
        }
    }
    assert!(seen > 100_000, "{seen}");
    for l in [
        "CP", "CP2", "LR(1,0)", "LR(0,1)", "L_I(0)", "R_B(0)", "LCR(0,0)", "LR(2,0)", "LR(1,1)", "LR(0,2)", "L_I(1)",
        "R_B(1)",
    ] {
        assert!(labels.contains_key(l), "{l} never seen");
    }
}

#[test]
fn labels_are_conjugation_invariant() {
    let fields = [Field::Prime(2), Field::Prime(3), Field::Rational];
    let mut checked = 0;
    for seed in 0..200u64 {
        let t = random_triple(seed, 2 + (seed % 9) as usize, 2, 0.5);
        let field = fields[(seed % 3) as usize];
        let d = random_mdifferential(&t, field, seed, 0.7).unwrap();
        let base = canonical_form(&d).unwrap().labels;
        for (k, kind) in [TransformKind::Weak, TransformKind::OrderedPair, TransformKind::Weak].into_iter().enumerate()
        {
            let g = random_transform(&t, kind, field, seed * 53 + k as u64, 0.6);
            let Ok(e) = d.conjugate(&g) else { continue };
            assert_eq!(canonical_form(&e).unwrap().labels, base, "seed {seed} {kind}");
            checked += 1;
        }
    }
    assert!(checked > 200);
}
