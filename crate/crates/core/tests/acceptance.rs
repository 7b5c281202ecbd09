//! Acceptance criteria AC1-AC10, exact arithmetic throughout. Prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use common::all_triples;
use mpair_core::decompose::{
    canonical_form, make_c_pair, make_l, make_r, realize, CanonicalDecomposition, Label, VertexKind,
};
use mpair_core::format::{emit, parse, WitnessFile};
use mpair_core::minimize::{certify, minimize};
use mpair_core::modelgen::{
    enumerate_all, model_from_interval, random_mdifferential, random_scenario, random_triple, Direction,
};
use mpair_core::reduction::{
    block_elementary, boundary_essential, invariant_signature, pairing, reduce_elementary, reduce_quasi_elementary,
    ReductionResult,
};
use mpair_core::render::svg;
use mpair_core::report::{to_json, DecomposeBody};
use mpair_core::{
    oracle, random_transform, BasisElement, BasisTransform, Field, MDifferential, OrderedTriple, TransformKind,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e1() -> MDifferential {
    let t = OrderedTriple::new(vec![
        BasisElement::boundary("b1", 0),
        BasisElement::interior("i2", 1),
        BasisElement::boundary("b3", 1),
        BasisElement::interior("i4", 2),
    ])
    .unwrap();
    MDifferential::from_images(
        Arc::new(t),
        Field::Rational,
        &[("i2", &[("b1", -1)]), ("b3", &[("b1", 1)]), ("i4", &[("b3", 1), ("i2", 1)])],
    )
    .unwrap()
}

/// Exhaustive GF(2) instances with N <= 5 and degrees 0..=2.
fn exhaustive_population(max_n: usize) -> Vec<MDifferential> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for t in all_triples(n, 2) {
            out.extend(enumerate_all(&t, Field::Prime(2), 1 << 20).unwrap());
        }
    }
    out
}

/// 500 random instances, N <= 12, alternating GF(5) and Q.
fn random_population() -> Vec<MDifferential> {
    (0..500u64)
        .map(|seed| {
            let field = if seed % 2 == 0 { Field::Prime(5) } else { Field::Rational };
            let t = random_triple(seed, 1 + (seed % 12) as usize, 2, 0.5);
            random_mdifferential(&t, field, seed, 0.7).unwrap()
        })
        .collect()
}

const MIXED: [Field; 3] = [Field::Prime(2), Field::Prime(5), Field::Rational];

fn mixed_instance(seed: u64, max_n: usize) -> MDifferential {
    let field = MIXED[(seed % 3) as usize];
    let t = random_triple(seed ^ 0x5eed, 1 + (seed % max_n as u64) as usize, 2, 0.5);
    random_mdifferential(&t, field, seed, 0.7).unwrap()
}

fn ac1(exhaustive: &[MDifferential], random: &[MDifferential]) -> Outcome {
    let start = Instant::now();
    let mut checks = 0usize;
    for (n, d) in exhaustive.iter().chain(random).enumerate() {
        let base = reduce_elementary(d).map_err(|e| e.to_string())?.output;
        for k in 0..20u64 {
            let g = random_transform(d.triple(), TransformKind::Ordered, d.field(), (n as u64) * 1000 + k, 0.6);
            let e = d.conjugate(&g).map_err(|e| e.to_string())?;
            let r = reduce_elementary(&e).map_err(|e| e.to_string())?.output;
            ensure!(r.equal(&base), "instance {n}, transform {k}: elementary forms differ");
            checks += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(format!("{} instances, {checks} conjugations, {secs:.1}s", exhaustive.len() + random.len()))
}

fn ac2(exhaustive: &[MDifferential], random: &[MDifferential]) -> Outcome {
    for (n, d) in exhaustive.iter().chain(random).enumerate() {
        let p = pairing(d).map_err(|e| e.to_string())?;
        let o = oracle::pairing_via_oracle(d).map_err(|e| e.to_string())?;
        ensure!(p == o, "instance {n}: pairing {:?} vs oracle {:?}", p.pairs, o.pairs);
        let all: Vec<usize> = (0..d.len()).collect();
        let h = oracle::homology_dims(d, &all).map_err(|e| e.to_string())?;
        ensure!(p.essentials_by_degree(d.triple()) == h, "instance {n}: essential counts differ from homology");
    }
    Ok(format!("{} instances", exhaustive.len() + random.len()))
}

fn ac3() -> Outcome {
    for seed in 0..200u64 {
        let d = mixed_instance(seed, 10);
        let h: Vec<usize> = boundary_essential(&d).map_err(|e| e.to_string())?.into_iter().map(|(p, _)| p).collect();
        ensure!(h == oracle::boundary_essential_via_ik(&d), "seed {seed}: boundary-essential sets differ");
    }
    Ok("200 instances over GF(2), GF(5), Q".into())
}

fn ac4() -> Outcome {
    for seed in 0..200u64 {
        let d = mixed_instance(seed, 10);
        let sig = invariant_signature(&d).map_err(|e| e.to_string())?;
        let trivial = d.trivial_elements();
        for k in 0..50u64 {
            let g = random_transform(d.triple(), TransformKind::OrderedPair, d.field(), seed * 100 + k, 0.6);
            let e = d.conjugate(&g).map_err(|e| e.to_string())?;
            ensure!(e.trivial_elements() == trivial, "seed {seed}/{k}: trivial set changed");
            ensure!(invariant_signature(&e).map_err(|e| e.to_string())? == sig, "seed {seed}/{k}: signature changed");
        }
    }
    Ok("200 instances x 50 conjugations".into())
}

fn ac5() -> Outcome {
    let mut compared = 0;
    for seed in 0..200u64 {
        let d = mixed_instance(seed, 10);
        let m = minimize(&d).map_err(|e| e.to_string())?;
        let out = &m.result.output;
        ensure!(m.steps.len() <= m.initial_mixed, "seed {seed}: {} steps > {} mixed", m.steps.len(), m.initial_mixed);
        let cert = certify(out, &m.signature, &m.cpairs).map_err(|e| e.to_string())?;
        ensure!(cert.len() == out.mixed_support().len(), "seed {seed}: uncertified mixed entry");
        for k in 0..5u64 {
            let g = random_transform(d.triple(), TransformKind::Weak, d.field(), seed * 10 + k, 0.6);
            // conjugate post-validates weak results and refuses ones leaving the class
            let Ok(e) = d.conjugate(&g) else { continue };
            let me = minimize(&e).map_err(|e| e.to_string())?;
            ensure!(me.result.output.similar(out), "seed {seed}/{k}: minimal forms not similar");
            compared += 1;
        }
    }
    ensure!(compared >= 200, "only {compared} weak conjugates stayed admissible");
    Ok(format!("200 instances, {compared} weak conjugates compared"))
}

fn witness_ok(input: &MDifferential, r: &ReductionResult, kind: TransformKind) -> Result<(), String> {
    let w = &r.witness;
    ensure!(w.kind() == kind, "witness kind {} != {kind}", w.kind());
    BasisTransform::new(w.triple().clone(), w.matrix().clone(), kind).map_err(|e| e.to_string())?;
    let out = input.conjugate(w).map_err(|e| e.to_string())?;
    ensure!(out.equal(&r.output), "output != conjugate(input, witness)");
    Ok(())
}

fn ac6(exhaustive: &[MDifferential], random: &[MDifferential]) -> Outcome {
    let mut stages = 0;
    for (n, d) in exhaustive.iter().chain(random).enumerate() {
        let ctx = |s: &str, e: String| format!("instance {n}, {s}: {e}");
        let r = reduce_elementary(d).map_err(|e| ctx("elementary", e.to_string()))?;
        witness_ok(d, &r, TransformKind::Ordered).map_err(|e| ctx("elementary", e))?;
        let r = block_elementary(d).map_err(|e| ctx("block", e.to_string()))?;
        witness_ok(d, &r, TransformKind::OrderedPair).map_err(|e| ctx("block", e))?;
        let r = reduce_quasi_elementary(d).map_err(|e| ctx("quasi", e.to_string()))?;
        witness_ok(d, &r, TransformKind::OrderedPair).map_err(|e| ctx("quasi", e))?;
        let m = minimize(d).map_err(|e| ctx("minimize", e.to_string()))?;
        witness_ok(d, &m.result, TransformKind::Weak).map_err(|e| ctx("minimize", e))?;
        stages += 4;
    }
    Ok(format!("{stages} stage outputs replayed"))
}

fn valency_holds(c: &CanonicalDecomposition) -> Result<(), String> {
    let g = &c.graph;
    for rec in &c.components {
        let closed = matches!(rec.label.as_str(), "CP" | "CP2");
        for &v in &rec.vertices {
            let val = g.neighbours(v).len();
            let kind: VertexKind = g.vertices[v].kind;
            let expected = if closed { 1 } else { kind.flag_count() };
            ensure!(
                val <= 2 && val == expected,
                "vertex {:?} valency {val}, expected {expected}",
                g.vertices[v].members
            );
        }
        ensure!(rec.edges.len() + 1 == rec.vertices.len(), "component {} is not a tree", rec.label);
    }
    Ok(())
}

fn ac7() -> Outcome {
    let mut instances = 0;
    let mut conjugates = 0;
    let mut alphabet = BTreeSet::new();
    for n in 1..=4 {
        for t in all_triples(n, 2) {
            for (idx, d) in enumerate_all(&t, Field::Prime(2), 1 << 20).unwrap().enumerate() {
                let c = canonical_form(&d).map_err(|e| format!("{e} on {}", emit(&d)))?;
                valency_holds(&c).map_err(|e| format!("{e} on {}", emit(&d)))?;
                for l in &c.labels {
                    let parsed: Label = l.parse().map_err(|_| format!("label {l} outside the grammar"))?;
                    ensure!(&parsed.to_string() == l, "label {l} not canonical");
                    alphabet.insert(l.clone());
                }
                for k in 0..3u64 {
                    let g = random_transform(&t, TransformKind::Weak, Field::Prime(2), (idx as u64) * 7 + k + 1, 0.7);
                    let Ok(e) = d.conjugate(&g) else { continue };
                    let ce = canonical_form(&e).map_err(|e| e.to_string())?;
                    ensure!(ce.labels == c.labels, "labels changed under weak conjugation on {}", emit(&d));
                    conjugates += 1;
                }
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} instances, {conjugates} weak conjugates, {} labels seen", alphabet.len()))
}

fn ac8() -> Outcome {
    let d = e1();
    ensure!(d.is_valid(), "E1 does not validate: {}", d.validate());
    let p = pairing(&d).map_err(|e| e.to_string())?;
    let named: Vec<(&str, &str)> = p.pairs.iter().map(|&(s, t)| (d.triple().id(s), d.triple().id(t))).collect();
    ensure!(named == [("i2", "b1"), ("i4", "b3")], "pairing {named:?}");
    ensure!(oracle::pairing_via_oracle(&d).map_err(|e| e.to_string())? == p, "oracle disagrees");
    let first = to_json("decompose", &DecomposeBody::new(&canonical_form(&d).map_err(|e| e.to_string())?));
    let second = to_json("decompose", &DecomposeBody::new(&canonical_form(&parse(&emit(&d)).unwrap()).unwrap()));
    ensure!(first == second, "decomposition report is not reproducible");
    let labels = canonical_form(&d).unwrap().labels;
    ensure!(labels == ["LR(0,1)", "LR(1,0)"], "labels {labels:?}");
    Ok("pairing {(i2,b1),(i4,b3)}, labels {LR(0,1), LR(1,0)}".into())
}

fn ac9() -> Outcome {
    let interval: oracle::HomologyDims = [(0i64, 1usize)].into_iter().collect();
    for seed in 0..1000u64 {
        let events = random_scenario(seed, (seed % 7) as usize);
        let field = MIXED[(seed % 3) as usize];
        let model = model_from_interval(&events, field).map_err(|e| format!("seed {seed}: {e}"))?;
        let d = &model.differential;
        ensure!(d.is_valid(), "seed {seed}: {}", d.validate());
        let boundary = events.iter().filter(|e| e.direction.is_some()).count();
        let interior = events.len() - boundary;
        let outward = events.iter().filter(|e| e.direction == Some(Direction::Outward)).count();
        let b = d.triple().boundary_indices().len();
        ensure!(b == boundary, "seed {seed}: |B| = {b}");
        ensure!(d.len() == b + interior + outward, "seed {seed}: |A| = {}", d.len());
        ensure!(d.triple().trivial_indices().len() == outward, "seed {seed}: |C| != outward count");
        let all: Vec<usize> = (0..d.len()).collect();
        ensure!(
            oracle::homology_dims(d, &all).unwrap() == interval,
            "seed {seed}: homology is not that of an interval"
        );
    }
    let e4 = mpair_core::format::parse_scenario(
        "boundary_right inward value=0\ninterior_min pos=1/3 value=1\nboundary_left outward value=2\ninterior_max pos=2/3 value=3\n",
    )
    .unwrap();
    let m = model_from_interval(&e4, Field::Prime(2)).map_err(|e| e.to_string())?;
    let d = &m.differential;
    let counts = (d.len(), d.triple().boundary_indices().len(), d.triple().trivial_indices().len());
    ensure!(counts == (5, 2, 1), "E4 counts {counts:?}");
    Ok("1000 scenarios; E4 gives 5/2/1".into())
}

fn corpus() -> Vec<MDifferential> {
    let mut docs = vec![e1(), make_c_pair(Field::Prime(2)), make_l(3, Field::Rational), make_r(4, Field::Prime(3))];
    for s in ["LR(2,1)", "L_I(2)", "R_B(1)", "LCR(1,2)", "CP2"] {
        docs.push(realize(&s.parse().unwrap(), Field::Prime(5)).unwrap());
    }
    for seed in 0..16u64 {
        docs.push(mixed_instance(seed, 9));
    }
    docs
}

fn ac10() -> Outcome {
    let docs = corpus();
    for (n, d) in docs.iter().enumerate() {
        let text = emit(d);
        let back = parse(&text).map_err(|e| format!("doc {n}: {e}"))?;
        ensure!(emit(&back) == text, "doc {n}: emit(parse(text)) != text");
        ensure!(back.equal(d), "doc {n}: parse(emit(d)) != d");

        type Stage = fn(&MDifferential) -> mpair_core::Result<ReductionResult>;
        let stages: [(&str, Stage); 3] = [
            ("elementary", reduce_elementary),
            ("quasi", reduce_quasi_elementary),
            ("minimize", |d| minimize(d).map(|m| m.result)),
        ];
        for (name, stage) in stages {
            let r = stage(&back).map_err(|e| e.to_string())?;
            let w = WitnessFile::from_json(&WitnessFile::from_transform(&r.witness).to_json())
                .map_err(|e| e.to_string())?;
            let g = w.to_transform(back.triple()).map_err(|e| e.to_string())?;
            let replayed = back.conjugate(&g).map_err(|e| e.to_string())?;
            ensure!(emit(&replayed) == emit(&r.output), "doc {n}: {name} witness replay differs");
        }
        let image = svg(d);
        roxmltree::Document::parse(&image).map_err(|e| format!("doc {n}: SVG is not well-formed: {e}"))?;
    }
    Ok(format!("{} documents round-tripped, 3 witnesses each replayed, SVG well-formed", docs.len()))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let started = Instant::now();
    let exhaustive = exhaustive_population(5);
    let random = random_population();
    let criteria: Vec<Criterion<'_>> = vec![
        ("AC1", Box::new(|| ac1(&exhaustive, &random))),
        ("AC2", Box::new(|| ac2(&exhaustive, &random))),
        ("AC3", Box::new(ac3)),
        ("AC4", Box::new(ac4)),
        ("AC5", Box::new(ac5)),
        ("AC6", Box::new(|| ac6(&exhaustive, &random))),
        ("AC7", Box::new(ac7)),
        ("AC8", Box::new(ac8)),
        ("AC9", Box::new(ac9)),
        ("AC10", Box::new(ac10)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{name} PASS ({secs:.1}s) {detail}"),
            Err(why) => {
                failed += 1;
                println!("{name} FAIL ({secs:.1}s) {why}");
            }
        }
    }
    println!("acceptance: {} of 10 passed in {:.1}s", 10 - failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
