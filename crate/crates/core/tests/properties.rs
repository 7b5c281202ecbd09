use std::sync::Arc;

use proptest::prelude::*;

use mpair_core::decompose::{canonical_form, realize, reassemble, sharp, split_direct_sum, BaseKind, Label};
use mpair_core::format::{emit, parse};
use mpair_core::minimize::{certify, minimize};
use mpair_core::modelgen::{random_mdifferential, random_triple};
use mpair_core::reduction::{is_elementary, is_quasi_elementary, reduce_elementary, reduce_quasi_elementary};
use mpair_core::{random_transform, BasisTransform, Field, MDifferential, TransformKind};

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(7)), Just(Field::Rational)]
}

prop_compose! {
    fn instance()(seed in any::<u64>(), n in 1usize..=9, rate in 0.0f64..0.8, density in 0.2f64..1.0, field in field_strategy())
        -> MDifferential
    {
        let t = random_triple(seed, n, 2, rate);
        random_mdifferential(&t, field, seed.wrapping_add(1), density).unwrap()
    }
}

fn kind_strategy() -> impl Strategy<Value = TransformKind> {
    prop_oneof![
        Just(TransformKind::Ordered),
        Just(TransformKind::OrderedPair),
        Just(TransformKind::Pair),
        Just(TransformKind::Weak)
    ]
}

fn label_strategy() -> impl Strategy<Value = Label> {
    (0usize..6, 0usize..4, 0usize..4).prop_filter_map("LR needs a chain", |(b, k, l)| {
        let base = [BaseKind::LR, BaseKind::LI, BaseKind::RB, BaseKind::LCR, BaseKind::CP, BaseKind::CP2][b];
        let label = match base {
            BaseKind::LR if k + l == 0 => return None,
            BaseKind::LR | BaseKind::LCR => Label { base, k, l },
            BaseKind::LI => Label { base, k, l: 0 },
            BaseKind::RB => Label { base, k: 0, l },
            _ => Label { base, k: 0, l: 0 },
        };
        Some(label)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_instances_validate(d in instance()) {
        prop_assert!(d.is_valid(), "{}", d.validate());
    }

    #[test]
    fn text_round_trip(d in instance()) {
        let text = emit(&d);
        let back = parse(&text).unwrap();
        prop_assert!(back.equal(&d));
        prop_assert_eq!(emit(&back), text);
    }

    #[test]
    fn conjugation_is_undone_by_the_inverse(d in instance(), kind in kind_strategy(), seed in any::<u64>()) {
        let g = random_transform(d.triple(), kind, d.field(), seed, 0.6);
        let back = BasisTransform::new(d.triple().clone(), g.inverse(), kind).unwrap();
        if let Ok(e) = d.conjugate(&g) {
            prop_assert!(e.conjugate(&back).unwrap().equal(&d));
        }
    }

    #[test]
    fn ordered_pair_conjugation_stays_in_class(d in instance(), seed in any::<u64>()) {
        let g = random_transform(d.triple(), TransformKind::OrderedPair, d.field(), seed, 0.6);
        let e = d.conjugate(&g).unwrap();
        prop_assert!(e.is_valid());
        prop_assert_eq!(e.trivial_elements(), d.trivial_elements());
    }

    #[test]
    fn elementary_form_is_a_fixed_point(d in instance()) {
        let r = reduce_elementary(&d).unwrap();
        prop_assert!(is_elementary(&r.output));
        prop_assert!(reduce_elementary(&r.output).unwrap().output.equal(&r.output));
    }

    #[test]
    fn quasi_elementary_output(d in instance()) {
        let r = reduce_quasi_elementary(&d).unwrap();
        prop_assert!(r.output.is_valid());
        prop_assert!(is_quasi_elementary(&r.output));
    }

    #[test]
    fn minimal_form_is_certified_and_stable(d in instance()) {
        let m = minimize(&d).unwrap();
        let out = &m.result.output;
        prop_assert!(out.is_valid());
        prop_assert_eq!(certify(out, &m.signature, &m.cpairs).unwrap().len(), out.mixed_support().len());
        let again = minimize(out).unwrap();
        prop_assert!(again.steps.is_empty());
        prop_assert!(again.result.output.equal(out));
    }

    #[test]
    fn split_then_reassemble_is_identity(d in instance()) {
        let parts = split_direct_sum(&d).unwrap();
        prop_assert_eq!(parts.iter().map(|p| p.indices.len()).sum::<usize>(), d.len());
        prop_assert!(reassemble(d.triple_arc(), &parts).equal(&d));
        for p in &parts {
            prop_assert_eq!(split_direct_sum(&p.differential).unwrap().len(), 1);
        }
    }

    #[test]
    fn labels_account_for_every_element(d in instance()) {
        let c = canonical_form(&d).unwrap();
        let total: usize = c.labels.iter().map(|l| realize(&l.parse().unwrap(), d.field()).unwrap().len()).sum();
        prop_assert_eq!(total, d.len());
        let mut sorted = c.labels.clone();
        sorted.sort();
        prop_assert_eq!(sorted, c.labels);
    }

    #[test]
    fn labels_survive_weak_conjugation(d in instance(), seed in any::<u64>()) {
        let g = random_transform(d.triple(), TransformKind::Weak, d.field(), seed, 0.6);
        if let Ok(e) = d.conjugate(&g) {
            prop_assert_eq!(canonical_form(&e).unwrap().labels, canonical_form(&d).unwrap().labels);
        }
    }

    #[test]
    fn realized_labels_classify_as_themselves(label in label_strategy(), field in field_strategy()) {
        let d = realize(&label, field).unwrap();
        prop_assert!(d.is_valid());
        prop_assert_eq!(canonical_form(&d).unwrap().labels, vec![label.to_string()]);
    }

    #[test]
    fn sharp_is_associative(k in 1usize..4, l in 1usize..4, field in field_strategy()) {
        let a = mpair_core::decompose::make_l(k, field).prefixed("a");
        let b = mpair_core::decompose::make_middle(field).prefixed("b");
        let c = mpair_core::decompose::make_r(l, field).shifted(-1).prefixed("c");
        let left = sharp(&sharp(&a, &b).unwrap(), &c).unwrap();
        let right = sharp(&a, &sharp(&b, &c).unwrap()).unwrap();
        prop_assert!(left.equal(&right));
        let zero = MDifferential::zero(Arc::new(mpair_core::OrderedTriple::empty()), field);
        prop_assert!(sharp(&a, &zero).unwrap().equal(&a));
        prop_assert!(sharp(&zero, &a).unwrap().equal(&a));
    }
}
