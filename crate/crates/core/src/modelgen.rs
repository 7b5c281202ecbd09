//! Input generators: algebraic models of strong Morse functions on an
//! interval, random admissible differentials, and exhaustive enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::differential::MDifferential;
use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::matrix::Matrix;
use crate::oracle::linalg;
use crate::transform::{random_coeff, random_nonzero};
use crate::triple::{BasisElement, OrderedTriple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    InteriorMin,
    InteriorMax,
    BoundaryLeft,
    BoundaryRight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Inward,
    Outward,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::InteriorMin => "interior_min",
            EventKind::InteriorMax => "interior_max",
            EventKind::BoundaryLeft => "boundary_left",
            EventKind::BoundaryRight => "boundary_right",
        })
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Inward => "inward",
            Direction::Outward => "outward",
        })
    }
}

/// A critical point of `F` or of `F` restricted to the endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalEvent {
    pub position: BigRational,
    pub value: BigRational,
    pub kind: EventKind,
    /// Set for boundary kinds only.
    pub direction: Option<Direction>,
}

impl CriticalEvent {
    pub fn interior(kind: EventKind, position: BigRational, value: BigRational) -> Self {
        CriticalEvent { position, value, kind, direction: None }
    }

    pub fn boundary(kind: EventKind, direction: Direction, value: BigRational) -> Self {
        let position = match kind {
            EventKind::BoundaryRight => BigRational::from_integer(BigInt::from(1)),
            _ => BigRational::from_integer(BigInt::from(0)),
        };
        CriticalEvent { position, value, kind, direction: Some(direction) }
    }

    fn is_boundary(&self) -> bool {
        matches!(self.kind, EventKind::BoundaryLeft | EventKind::BoundaryRight)
    }

    /// Whether the point is a local maximum of `F` on the closed interval.
    fn is_local_max(&self) -> bool {
        match self.kind {
            EventKind::InteriorMax => true,
            EventKind::InteriorMin => false,
            _ => self.direction == Some(Direction::Outward),
        }
    }
}

/// Where a basis element of a model comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    Event {
        index: usize,
    },
    /// The extra generator attached to an outward endpoint.
    Plus {
        index: usize,
    },
}

#[derive(Clone, Debug)]
pub struct ScenarioModel {
    pub differential: MDifferential,
    /// One entry per basis element, in order.
    pub provenance: Vec<Provenance>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn scenario_err(msg: impl Into<String>) -> Error {
    Error::Scenario(msg.into())
}

/// Checks the events and returns their indices sorted by position.
fn check_events(events: &[CriticalEvent]) -> Result<Vec<usize>> {
    let count = |k: EventKind| events.iter().filter(|e| e.kind == k).count();
    if count(EventKind::BoundaryLeft) != 1 || count(EventKind::BoundaryRight) != 1 {
        return Err(scenario_err("exactly one left and one right boundary event are required"));
    }
    for e in events {
        if e.is_boundary() != e.direction.is_some() {
            return Err(scenario_err(format!(
                "{} event must {}carry a direction",
                e.kind,
                if e.is_boundary() { "" } else { "not " }
            )));
        }
    }
    let mut values: Vec<&BigRational> = events.iter().map(|e| &e.value).collect();
    values.sort();
    if values.windows(2).any(|w| w[0] == w[1]) {
        return Err(scenario_err("critical values must be pairwise distinct"));
    }
    let mut order: Vec<usize> = (0..events.len()).collect();
    order.sort_by(|&a, &b| {
        let rank = |e: &CriticalEvent| match e.kind {
            EventKind::BoundaryLeft => 0,
            EventKind::BoundaryRight => 2,
            _ => 1,
        };
        (rank(&events[a]), &events[a].position).cmp(&(rank(&events[b]), &events[b].position))
    });
    let inner = &order[1..order.len() - 1];
    let (lo, hi) = (&events[order[0]].position, &events[order[order.len() - 1]].position);
    for w in inner.windows(2) {
        if events[w[0]].position == events[w[1]].position {
            return Err(scenario_err("interior events must sit at distinct positions"));
        }
    }
    if inner.iter().any(|&i| &events[i].position <= lo || &events[i].position >= hi) {
        return Err(scenario_err("interior events must lie strictly between the endpoints"));
    }
    for w in order.windows(2) {
        let (a, b) = (&events[w[0]], &events[w[1]]);
        if a.is_local_max() == b.is_local_max() {
            return Err(scenario_err(format!(
                "no valid function realizes events: {} and {} are adjacent without an extremum of the other type between them",
                describe(a),
                describe(b)
            )));
        }
        let (max, min) = if a.is_local_max() { (a, b) } else { (b, a) };
        if max.value <= min.value {
            return Err(scenario_err(format!(
                "no valid function realizes events: maximum {} is not above neighbouring minimum {}",
                describe(max),
                describe(min)
            )));
        }
    }
    Ok(order)
}

fn describe(e: &CriticalEvent) -> String {
    match e.direction {
        Some(d) => format!("{} {} @{}", e.kind, d, e.value),
        None => format!("{} @{}", e.kind, e.value),
    }
}

/// Algebraic model of a strong Morse function on an interval.
///
/// Minima and both endpoints have degree 0, interior maxima degree 1. Each
/// outward endpoint `b` gets a degree-1 interior partner `b+` placed right
/// after it; the outward endpoints form the trivial set. The differential is
/// read off a sweep of sublevel sets.
pub fn model_from_interval(events: &[CriticalEvent], field: Field) -> Result<ScenarioModel> {
    let by_pos = check_events(events)?;
    let m = by_pos.len();
    let mut pos_of = vec![0usize; events.len()];
    for (p, &e) in by_pos.iter().enumerate() {
        pos_of[e] = p;
    }
    let mut by_value: Vec<usize> = (0..events.len()).collect();
    by_value.sort_by(|&a, &b| events[a].value.cmp(&events[b].value));

    let mut elements = Vec::new();
    let mut provenance = Vec::new();
    let mut elem_of_event = vec![0usize; events.len()];
    let mut plus_of_event: BTreeMap<usize, usize> = BTreeMap::new();
    for &e in &by_value {
        let ev = &events[e];
        let id = format!("e{}", elements.len() + 1);
        elem_of_event[e] = elements.len();
        provenance.push(Provenance::Event { index: e });
        match (ev.kind, ev.direction) {
            (EventKind::InteriorMin, _) => elements.push(BasisElement::interior(id, 0)),
            (EventKind::InteriorMax, _) => elements.push(BasisElement::interior(id, 1)),
            (_, Some(Direction::Inward)) => elements.push(BasisElement::boundary(id, 0)),
            _ => {
                elements.push(BasisElement::trivial(id.clone(), 0));
                plus_of_event.insert(e, elements.len());
                provenance.push(Provenance::Plus { index: e });
                elements.push(BasisElement::interior(format!("{id}_plus"), 1));
            }
        }
    }
    let triple = Arc::new(OrderedTriple::new(elements)?);
    let n = triple.len();
    let mut d = Matrix::zeros(field, n, n);
    let one = field.one();
    let minus = -&one;

    // union-find over positions; each root remembers its oldest generator
    let mut parent: Vec<usize> = (0..m).collect();
    let mut rep: Vec<usize> = vec![usize::MAX; m];
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let mut alive = vec![false; m];
    for &e in &by_value {
        let p = pos_of[e];
        let ev = &events[e];
        let me = elem_of_event[e];
        alive[p] = true;
        if !ev.is_local_max() {
            rep[p] = me;
            continue;
        }
        let neighbours: Vec<usize> = [p.checked_sub(1), (p + 1 < m).then_some(p + 1)].into_iter().flatten().collect();
        let roots: Vec<usize> = neighbours
            .iter()
            .map(|&q| {
                debug_assert!(alive[q]);
                find(&mut parent, q)
            })
            .collect();
        match ev.kind {
            EventKind::InteriorMax => {
                let (left, right) = (rep[roots[0]], rep[roots[1]]);
                d.set(right, me, one.clone());
                d.set(left, me, minus.clone());
                let elder = if left < right { left } else { right };
                parent[roots[0]] = p;
                parent[roots[1]] = p;
                rep[p] = elder;
            }
            EventKind::BoundaryLeft => {
                let plus = plus_of_event[&e];
                d.set(rep[roots[0]], plus, one.clone());
                d.set(me, plus, minus.clone());
                parent[roots[0]] = p;
                rep[p] = rep[roots[0]];
            }
            EventKind::BoundaryRight => {
                let plus = plus_of_event[&e];
                d.set(me, plus, one.clone());
                d.set(rep[roots[0]], plus, minus.clone());
                parent[roots[0]] = p;
                rep[p] = rep[roots[0]];
            }
            EventKind::InteriorMin => unreachable!(),
        }
    }
    let differential = MDifferential::new(triple, d)?;
    let report = differential.validate();
    if !report.is_ok() {
        return Err(Error::Integrity(format!("interval model is not admissible: {report}")));
    }
    Ok(ScenarioModel { differential, provenance })
}

/// Random valid event list with `interior` interior critical points.
pub fn random_scenario(seed: u64, interior: usize) -> Vec<CriticalEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = interior + 2;
    let start_max: bool = rng.gen();
    // alternating walk; the index term keeps values distinct
    let mut walk = Vec::with_capacity(len);
    let mut v: i64 = 0;
    for i in 0..len {
        if i > 0 {
            let step = rng.gen_range(1..=5);
            let up = (i % 2 == 0) == start_max;
            v += if up { step } else { -step };
        }
        walk.push(v * (len as i64 + 1) + i as i64);
    }
    let is_max = |i: usize| (i % 2 == 0) == start_max;
    let mut events = Vec::with_capacity(len);
    let dir = |i: usize| if is_max(i) { Direction::Outward } else { Direction::Inward };
    events.push(CriticalEvent::boundary(EventKind::BoundaryLeft, dir(0), rat(walk[0])));
    for (i, &w) in walk.iter().enumerate().take(len - 1).skip(1) {
        let kind = if is_max(i) { EventKind::InteriorMax } else { EventKind::InteriorMin };
        events.push(CriticalEvent::interior(kind, BigRational::new(BigInt::from(i), BigInt::from(len - 1)), rat(w)));
    }
    events.push(CriticalEvent::boundary(EventKind::BoundaryRight, dir(len - 1), rat(walk[len - 1])));
    events.shuffle(&mut rng);
    events
}

/// Random triple with `n` elements and degrees in `0..=max_degree`. Trivial
/// marks are placed on boundary elements followed by an interior element one
/// degree up, each with probability `trivial_rate`.
pub fn random_triple(seed: u64, n: usize, max_degree: i64, trivial_rate: f64) -> OrderedTriple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements: Vec<BasisElement> = (0..n)
        .map(|i| {
            let deg = rng.gen_range(0..=max_degree);
            if rng.gen_bool(0.5) {
                BasisElement::boundary(format!("b{}", i + 1), deg)
            } else {
                BasisElement::interior(format!("i{}", i + 1), deg)
            }
        })
        .collect();
    for i in 0..n.saturating_sub(1) {
        let ok = elements[i].is_boundary()
            && !elements[i + 1].is_boundary()
            && elements[i + 1].degree == elements[i].degree + 1;
        if ok && rng.gen_bool(trivial_rate.clamp(0.0, 1.0)) {
            elements[i].trivial = true;
            elements[i].id = format!("c{}", i + 1);
        }
    }
    OrderedTriple::new(elements).expect("generated triple is well formed")
}

/// Rows that may be nonzero in column `i`.
pub fn admissible_rows(triple: &OrderedTriple, i: usize) -> Vec<usize> {
    (0..i)
        .filter(|&j| triple.degree(j) == triple.degree(i) - 1 && (!triple.is_boundary(i) || triple.is_boundary(j)))
        .collect()
}

const COLUMN_TRIES: usize = 8;

/// Random admissible differential on `triple`, built column by column inside
/// the kernel of the columns already fixed.
pub fn random_mdifferential(triple: &OrderedTriple, field: Field, seed: u64, density: f64) -> Result<MDifferential> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = density.clamp(0.0, 1.0);
    let n = triple.len();
    let forced: BTreeMap<usize, usize> = triple.trivial_indices().into_iter().map(|c| (c + 1, c)).collect();
    let budget = 32;
    'attempt: for _ in 0..budget {
        let mut d = Matrix::zeros(field, n, n);
        for i in 0..n {
            let rows = admissible_rows(triple, i);
            let must = forced.get(&i).copied();
            if let Some(c) = must {
                if !rows.contains(&c) {
                    continue 'attempt;
                }
            }
            let mut placed = false;
            for tryno in 0..COLUMN_TRIES {
                let chosen: Vec<usize> = rows
                    .iter()
                    .copied()
                    .filter(|&j| Some(j) == must || tryno + 1 == COLUMN_TRIES || rng.gen_bool(density))
                    .collect();
                let cols: Vec<Vec<Coeff>> = chosen.iter().map(|&j| d.column(j).to_vec()).collect();
                let kernel = linalg::nullspace(field, &cols, n);
                let mut v = vec![field.zero(); chosen.len()];
                for k in &kernel {
                    let c =
                        if must.is_some() { random_nonzero(field, &mut rng) } else { random_coeff(field, &mut rng) };
                    for (x, y) in v.iter_mut().zip(k) {
                        *x += &(&c * y);
                    }
                }
                if let Some(c) = must {
                    let at = chosen.iter().position(|&j| j == c).expect("forced row chosen");
                    if v[at].is_zero() {
                        continue;
                    }
                }
                for (coef, &j) in v.into_iter().zip(&chosen) {
                    d.set(j, i, coef);
                }
                placed = true;
                break;
            }
            if !placed {
                continue 'attempt;
            }
        }
        let out = MDifferential::new(Arc::new(triple.clone()), d)?;
        debug_assert!(out.is_valid(), "{}", out.validate());
        return Ok(out);
    }
    Err(Error::RetryBudgetExhausted(budget))
}

/// All admissible cells `(row, col)` in column-major order.
pub fn admissible_cells(triple: &OrderedTriple) -> Vec<(usize, usize)> {
    (0..triple.len()).flat_map(|i| admissible_rows(triple, i).into_iter().map(move |j| (j, i))).collect()
}

/// Iterator over every valid differential on a triple over a prime field.
pub struct Enumeration {
    triple: Arc<OrderedTriple>,
    field: Field,
    cells: Vec<(usize, usize)>,
    digits: Vec<u32>,
    done: bool,
}

impl Iterator for Enumeration {
    type Item = MDifferential;

    fn next(&mut self) -> Option<MDifferential> {
        let p = self.field.characteristic();
        let n = self.triple.len();
        while !self.done {
            let mut m = Matrix::zeros(self.field, n, n);
            for (&(j, i), &v) in self.cells.iter().zip(&self.digits) {
                if v != 0 {
                    m.set(j, i, self.field.from_i64(v as i64));
                }
            }
            // advance the odometer
            let mut k = 0;
            loop {
                if k == self.digits.len() {
                    self.done = true;
                    break;
                }
                self.digits[k] += 1;
                if self.digits[k] < p {
                    break;
                }
                self.digits[k] = 0;
                k += 1;
            }
            let d = MDifferential::new(Arc::clone(&self.triple), m).expect("square");
            if d.is_valid() {
                return Some(d);
            }
        }
        None
    }
}

/// Exhaustive enumeration, refused when `p^cells` exceeds `budget`.
pub fn enumerate_all(triple: &OrderedTriple, field: Field, budget: u128) -> Result<Enumeration> {
    let Field::Prime(p) = field else {
        return Err(Error::InvalidField("enumeration needs a finite field".into()));
    };
    let cells = admissible_cells(triple);
    let needed = (p as u128).checked_pow(cells.len() as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(Enumeration { triple: Arc::new(triple.clone()), field, digits: vec![0; cells.len()], cells, done: false })
}
