//! Direct-sum splitting, the vertex graph of a minimal differential, canonical
//! component labels, and the building blocks they name.
//!
//! Label grammar, with `k`, `l` the lengths of the left and right chains:
//!
//! | label       | summand                                   |
//! |-------------|-------------------------------------------|
//! | `LR(k,l)`   | `L_k # R_l`                               |
//! | `L_I(k)`    | `L_k #` a lone interior element           |
//! | `R_B(l)`    | a lone boundary element `# R_l`           |
//! | `LCR(k,l)`  | `L_k # M # R_l`, `M` = `{p < x}`, `dx = p`|
//! | `CP`        | a single trivial pair `c < c+`            |
//! | `CP2`       | two interlocked trivial pairs             |

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::differential::MDifferential;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::minimize::{certify, minimize, CPairTable, Minimized};
use crate::reduction::InvariantSignature;
use crate::triple::{BasisElement, OrderedTriple};

/// One direct summand: ascending positions in the parent and the restriction.
#[derive(Clone, Debug)]
pub struct Summand {
    pub indices: Vec<usize>,
    pub differential: MDifferential,
}

fn components(n: usize, adjacent: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut part = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in adjacent(v) {
                if !seen[w] {
                    seen[w] = true;
                    part.push(w);
                    queue.push_back(w);
                }
            }
        }
        part.sort_unstable();
        out.push(part);
    }
    out
}

/// Splits along connected components of the support, ordered by their
/// smallest element.
pub fn split_direct_sum(d: &MDifferential) -> Result<Vec<Summand>> {
    let n = d.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in d.matrix().column_support(i) {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    components(n, |v| adj[v].clone())
        .into_iter()
        .map(|indices| Ok(Summand { differential: d.select(&indices)?, indices }))
        .collect()
}

/// Inverse of [`split_direct_sum`] given the parent triple.
pub fn reassemble(triple: &Arc<OrderedTriple>, parts: &[Summand]) -> MDifferential {
    let field = parts.first().map(|p| p.differential.field()).unwrap_or_default();
    let n = triple.len();
    let mut m = Matrix::zeros(field, n, n);
    for part in parts {
        for (ci, &c) in part.indices.iter().enumerate() {
            for (ri, &r) in part.indices.iter().enumerate() {
                let v = part.differential.entry(ri, ci);
                if !v.is_zero() {
                    m.set(r, c, v.clone());
                }
            }
        }
    }
    MDifferential::new(Arc::clone(triple), m).expect("square")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum VertexKind {
    P {
        in_c: bool,
        in_h: bool,
    },
    X {
        in_c_plus: bool,
        in_hplus_image: bool,
    },
    /// Members are `[q, r]`.
    QR {
        q_in_c: bool,
        r_in_c: bool,
    },
    /// Members are `[y, z]`.
    YZ {
        y_in_c_plus: bool,
        z_in_c_plus: bool,
    },
}

impl VertexKind {
    pub fn is_pair(self) -> bool {
        matches!(self, VertexKind::QR { .. } | VertexKind::YZ { .. })
    }

    pub fn flag_count(self) -> usize {
        let (a, b) = match self {
            VertexKind::P { in_c, in_h } => (in_c, in_h),
            VertexKind::X { in_c_plus, in_hplus_image } => (in_c_plus, in_hplus_image),
            VertexKind::QR { q_in_c, r_in_c } => (q_in_c, r_in_c),
            VertexKind::YZ { y_in_c_plus, z_in_c_plus } => (y_in_c_plus, z_in_c_plus),
        };
        a as usize + b as usize
    }

    /// Position of this kind in a fixed list of all sixteen.
    pub fn code(self) -> usize {
        let (family, a, b) = match self {
            VertexKind::P { in_c, in_h } => (0, in_c, in_h),
            VertexKind::X { in_c_plus, in_hplus_image } => (1, in_c_plus, in_hplus_image),
            VertexKind::QR { q_in_c, r_in_c } => (2, q_in_c, r_in_c),
            VertexKind::YZ { y_in_c_plus, z_in_c_plus } => (3, y_in_c_plus, z_in_c_plus),
        };
        family * 4 + 2 * a as usize + b as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphVertex {
    pub kind: VertexKind,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Graph {
    pub vertices: Vec<GraphVertex>,
    /// Undirected edges `(u, v)` with `u < v`.
    pub edges: BTreeSet<(usize, usize)>,
    /// Vertex holding each element.
    pub vertex_of: Vec<usize>,
}

impl Graph {
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parts = components(self.vertices.len(), |v| self.neighbours(v));
        parts.sort_by_key(|p| p.iter().flat_map(|&v| self.vertices[v].members.iter().copied()).min());
        parts
    }
}

/// Vertex graph of a minimal differential.
pub fn build_graph(d: &MDifferential, sig: &InvariantSignature, cpairs: &CPairTable) -> Result<Graph> {
    certify(d, sig, cpairs)?;
    let part = &sig.partition;
    let mut vertices = Vec::new();
    for &p in &part.p {
        vertices
            .push(GraphVertex { kind: VertexKind::P { in_c: cpairs.in_c(p), in_h: sig.in_h(p) }, members: vec![p] });
    }
    for &x in &part.x {
        vertices.push(GraphVertex {
            kind: VertexKind::X { in_c_plus: cpairs.in_c_plus(x), in_hplus_image: sig.in_hplus_image(x) },
            members: vec![x],
        });
    }
    for &(q, r) in &part.qr {
        vertices.push(GraphVertex {
            kind: VertexKind::QR { q_in_c: cpairs.in_c(q), r_in_c: cpairs.in_c(r) },
            members: vec![q, r],
        });
    }
    for &(y, z) in &part.yz {
        vertices.push(GraphVertex {
            kind: VertexKind::YZ { y_in_c_plus: cpairs.in_c_plus(y), z_in_c_plus: cpairs.in_c_plus(z) },
            members: vec![y, z],
        });
    }
    vertices.sort_by_key(|v| *v.members.iter().min().expect("nonempty"));
    let mut vertex_of = vec![usize::MAX; d.len()];
    for (vi, v) in vertices.iter().enumerate() {
        for &m in &v.members {
            vertex_of[m] = vi;
        }
    }
    let mut edges = BTreeSet::new();
    for i in 0..d.len() {
        for j in d.matrix().column_support(i) {
            let (u, v) = (vertex_of[i], vertex_of[j]);
            if u != v {
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    Ok(Graph { vertices, edges, vertex_of })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BaseKind {
    LR,
    #[serde(rename = "L_I")]
    LI,
    #[serde(rename = "R_B")]
    RB,
    LCR,
    CP,
    CP2,
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseKind::LR => "LR",
            BaseKind::LI => "L_I",
            BaseKind::RB => "R_B",
            BaseKind::LCR => "LCR",
            BaseKind::CP => "CP",
            BaseKind::CP2 => "CP2",
        })
    }
}

/// A parsed component label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub base: BaseKind,
    pub k: usize,
    pub l: usize,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            BaseKind::LR | BaseKind::LCR => write!(f, "{}({},{})", self.base, self.k, self.l),
            BaseKind::LI => write!(f, "L_I({})", self.k),
            BaseKind::RB => write!(f, "R_B({})", self.l),
            BaseKind::CP | BaseKind::CP2 => write!(f, "{}", self.base),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidTriple(format!("unknown label `{s}`"));
        let s = s.trim();
        let (head, args) = match s.split_once('(') {
            Some((h, rest)) => (h, rest.strip_suffix(')').ok_or_else(bad)?),
            None => (s, ""),
        };
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',').map(|a| a.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        let label = match (head, nums.as_slice()) {
            ("LR", [k, l]) if k + l >= 1 => Label { base: BaseKind::LR, k: *k, l: *l },
            ("LCR", [k, l]) => Label { base: BaseKind::LCR, k: *k, l: *l },
            ("L_I", [k]) => Label { base: BaseKind::LI, k: *k, l: 0 },
            ("R_B", [l]) => Label { base: BaseKind::RB, k: 0, l: *l },
            ("CP", []) => Label { base: BaseKind::CP, k: 0, l: 0 },
            ("CP2", []) => Label { base: BaseKind::CP2, k: 0, l: 0 },
            _ => return Err(bad()),
        };
        Ok(label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentEdge {
    pub from: usize,
    pub to: usize,
    /// Set when `to` is nested inside `from` in the order with every
    /// trivial pair swapped.
    pub oriented: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentRecord {
    pub elements: Vec<usize>,
    pub vertices: Vec<usize>,
    pub edges: Vec<ComponentEdge>,
    pub base: BaseKind,
    pub base_vertices: Vec<usize>,
    pub k: usize,
    pub l: usize,
    pub label: String,
}

fn integrity(msg: impl Into<String>) -> Error {
    Error::Integrity(msg.into())
}

/// Orients one graph component and reads off its label.
pub fn orient_and_classify(
    graph: &Graph,
    component: &[usize],
    sig: &InvariantSignature,
    cpairs: &CPairTable,
) -> Result<ComponentRecord> {
    let vs = &graph.vertices;
    let in_comp: BTreeSet<usize> = component.iter().copied().collect();
    let comp_edges: Vec<(usize, usize)> =
        graph.edges.iter().copied().filter(|(a, b)| in_comp.contains(a) && in_comp.contains(b)).collect();
    if comp_edges.len() + 1 != component.len() {
        return Err(integrity(format!(
            "component with {} vertices has {} edges (a cycle)",
            component.len(),
            comp_edges.len()
        )));
    }
    let mut elements: Vec<usize> = component.iter().flat_map(|&v| vs[v].members.iter().copied()).collect();
    elements.sort_unstable();
    let valency = |v: usize| comp_edges.iter().filter(|(a, b)| *a == v || *b == v).count();

    let closed = closed_kind(component, vs, sig, cpairs);
    for &v in component {
        let expected = if closed.is_some() { 1 } else { vs[v].kind.flag_count() };
        if valency(v) != expected || valency(v) > 2 {
            return Err(integrity(format!(
                "vertex {:?} has valency {}, expected {expected}",
                vs[v].members,
                valency(v)
            )));
        }
    }
    let mut sorted = component.to_vec();
    sorted.sort_unstable();
    if let Some(base) = closed {
        let edges = comp_edges.iter().map(|&(a, b)| ComponentEdge { from: a, to: b, oriented: false }).collect();
        return Ok(ComponentRecord {
            elements,
            vertices: sorted.clone(),
            edges,
            base,
            base_vertices: sorted,
            k: 0,
            l: 0,
            label: Label { base, k: 0, l: 0 }.to_string(),
        });
    }

    // positions in the order with every trivial pair swapped
    let swapped = |a: usize| -> usize {
        if cpairs.in_c(a) {
            a + 1
        } else if cpairs.in_c_plus(a) {
            a - 1
        } else {
            a
        }
    };
    let span = |v: usize| -> (usize, usize) {
        let ps: Vec<usize> = vs[v].members.iter().map(|&m| swapped(m)).collect();
        (*ps.iter().min().unwrap(), *ps.iter().max().unwrap())
    };
    let mut edges = Vec::new();
    let mut outgoing: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut incoming: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in &comp_edges {
        let (from, to, oriented) = if vs[a].kind.is_pair() && vs[b].kind.is_pair() {
            let (sa, sb) = (span(a), span(b));
            if sa.0 < sb.0 && sb.1 < sa.1 {
                (a, b, true)
            } else if sb.0 < sa.0 && sa.1 < sb.1 {
                (b, a, true)
            } else {
                (a, b, false)
            }
        } else {
            (a, b, false)
        };
        if oriented {
            outgoing.entry(from).or_default().push(to);
            *incoming.entry(to).or_default() += 1;
        }
        edges.push(ComponentEdge { from, to, oriented });
    }
    let heads: Vec<usize> =
        sorted.iter().copied().filter(|&v| vs[v].kind.is_pair() && !incoming.contains_key(&v)).collect();
    let mut on_chain = BTreeSet::new();
    let (mut k, mut l) = (None, None);
    for &h in &heads {
        let mut len = 0;
        let mut cur = h;
        loop {
            if !on_chain.insert(cur) {
                return Err(integrity("two chains share a vertex"));
            }
            len += 1;
            match outgoing.get(&cur).map(Vec::as_slice) {
                None | Some([]) => break,
                Some([next]) => cur = *next,
                Some(_) => return Err(integrity("a vertex has two nested neighbours")),
            }
        }
        let slot = if matches!(vs[h].kind, VertexKind::QR { .. }) { &mut k } else { &mut l };
        if slot.replace(len).is_some() {
            return Err(integrity("two chains of the same side in one component"));
        }
    }
    let (k, l) = (k.unwrap_or(0), l.unwrap_or(0));
    let base_vertices: Vec<usize> = sorted.iter().copied().filter(|v| !on_chain.contains(v)).collect();
    let has = |f: fn(&VertexKind) -> bool| base_vertices.iter().filter(|&&v| f(&vs[v].kind)).count();
    let n_p = has(|k| matches!(k, VertexKind::P { .. }));
    let n_x = has(|k| matches!(k, VertexKind::X { .. }));
    if n_p + n_x != base_vertices.len() {
        return Err(integrity("a pair vertex lies off every chain"));
    }
    let base = match (n_x, n_p) {
        (0, 0) if k + l >= 1 => BaseKind::LR,
        (1, 0) if l == 0 => BaseKind::LI,
        (0, 1) if k == 0 => BaseKind::RB,
        (1, 1) => BaseKind::LCR,
        _ => {
            return Err(integrity(format!(
                "unrecognised component: {n_x} interior and {n_p} boundary singletons with chains ({k},{l})"
            )))
        }
    };
    Ok(ComponentRecord {
        elements,
        vertices: sorted,
        edges,
        base,
        base_vertices,
        k,
        l,
        label: Label { base, k, l }.to_string(),
    })
}

/// Closed couples: a trivial boundary singleton with its successor as `h_+`
/// image, or a QR pair whose both members are trivial with successors forming
/// a YZ pair.
fn closed_kind(
    component: &[usize],
    vs: &[GraphVertex],
    sig: &InvariantSignature,
    cpairs: &CPairTable,
) -> Option<BaseKind> {
    if component.len() != 2 {
        return None;
    }
    let (a, b) = (&vs[component[0]], &vs[component[1]]);
    for (u, v) in [(a, b), (b, a)] {
        match (u.kind, v.kind) {
            (VertexKind::P { .. }, VertexKind::X { .. }) => {
                let (p, x) = (u.members[0], v.members[0]);
                if cpairs.plus(p) == Some(x) && sig.hplus_of(p) == Some(x) {
                    return Some(BaseKind::CP);
                }
            }
            (VertexKind::QR { .. }, VertexKind::YZ { .. }) => {
                let (q, r, y, z) = (u.members[0], u.members[1], v.members[0], v.members[1]);
                if cpairs.plus(q) == Some(y) && cpairs.plus(r) == Some(z) {
                    return Some(BaseKind::CP2);
                }
            }
            _ => {}
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct CanonicalDecomposition {
    pub minimized: Minimized,
    pub graph: Graph,
    pub components: Vec<ComponentRecord>,
    /// Sorted label multiset.
    pub labels: Vec<String>,
}

pub fn canonical_form(d: &MDifferential) -> Result<CanonicalDecomposition> {
    let minimized = minimize(d)?;
    let out = &minimized.result.output;
    let graph = build_graph(out, &minimized.signature, &minimized.cpairs)?;
    let mut components = Vec::new();
    for comp in graph.components() {
        components.push(orient_and_classify(&graph, &comp, &minimized.signature, &minimized.cpairs)?);
    }
    let split: Vec<Vec<usize>> = split_direct_sum(out)?.into_iter().map(|s| s.indices).collect();
    let from_graph: Vec<Vec<usize>> = components.iter().map(|c| c.elements.clone()).collect();
    if split != from_graph {
        return Err(integrity("graph components disagree with the direct-sum splitting"));
    }
    let mut labels: Vec<String> = components.iter().map(|c| c.label.clone()).collect();
    labels.sort();
    Ok(CanonicalDecomposition { minimized, graph, components, labels })
}

struct Builder {
    elements: Vec<BasisElement>,
    images: Vec<(String, Vec<(String, i64)>)>,
}

impl Builder {
    fn new() -> Self {
        Builder { elements: Vec::new(), images: Vec::new() }
    }

    fn image(&mut self, src: impl Into<String>, terms: Vec<(String, i64)>) {
        self.images.push((src.into(), terms));
    }

    fn build(self, field: Field, trivial: &[String]) -> MDifferential {
        let elements = self
            .elements
            .into_iter()
            .map(|mut e| {
                e.trivial = trivial.contains(&e.id);
                e
            })
            .collect();
        let triple = Arc::new(OrderedTriple::new(elements).expect("template triple"));
        let mut d = MDifferential::zero(Arc::clone(&triple), field);
        let mut m = d.matrix().clone();
        for (src, terms) in &self.images {
            let i = triple.position(src).expect("template id");
            for (tgt, c) in terms {
                let j = triple.position(tgt).expect("template id");
                m.set(j, i, field.from_i64(*c));
            }
        }
        d = d.with_matrix(m);
        debug_assert!(d.is_valid(), "{}", d.validate());
        d
    }
}

fn empty(field: Field) -> MDifferential {
    MDifferential::zero(Arc::new(OrderedTriple::empty()), field)
}

fn s(prefix: &str, i: usize) -> String {
    format!("{prefix}{i}")
}

/// Left chain template with `k` vertices: QR, YZ, QR, ... Degrees: `r` 0,
/// `q` and `z` 1, `y` 2.
pub fn make_l(k: usize, field: Field) -> MDifferential {
    if k == 0 {
        return empty(field);
    }
    let (nq, ny) = (k.div_ceil(2), k / 2);
    let mut b = Builder::new();
    let mut order: Vec<BasisElement> = vec![BasisElement::boundary("r1", 0)];
    for i in 1..=ny {
        if i < nq {
            order.push(BasisElement::boundary(s("r", i + 1), 0));
        }
        order.push(BasisElement::interior(s("z", i), 1));
    }
    let mut top = Vec::new();
    for i in 1..=nq {
        if i <= ny {
            top.push(BasisElement::interior(s("y", i), 2));
        }
        top.push(BasisElement::boundary(s("q", i), 1));
    }
    order.extend(top.into_iter().rev());
    b.elements = order;
    let mut trivial = Vec::new();
    for i in 1..=nq {
        b.image(s("q", i), vec![(s("r", i), 1)]);
    }
    for i in 1..=ny {
        let mut dz = vec![(s("r", i), -1)];
        let mut dy = vec![(s("z", i), 1), (s("q", i), 1)];
        trivial.push(s("q", i));
        if i < nq {
            dz.push((s("r", i + 1), 1));
            dy.push((s("q", i + 1), -1));
            trivial.push(s("r", i + 1));
        }
        b.image(s("z", i), dz);
        b.image(s("y", i), dy);
    }
    b.build(field, &trivial)
}

/// Right chain template with `l` vertices: YZ, QR, YZ, ... Degrees as in
/// [`make_l`].
pub fn make_r(l: usize, field: Field) -> MDifferential {
    if l == 0 {
        return empty(field);
    }
    let (nz, nq) = (l.div_ceil(2), l / 2);
    let mut b = Builder::new();
    let mut order = Vec::new();
    for i in 1..=nz {
        if i <= nq {
            order.push(BasisElement::boundary(s("r", i), 0));
        }
        order.push(BasisElement::interior(s("z", i), 1));
    }
    let mut top = vec![BasisElement::interior("y1", 2)];
    for i in 2..=nz.max(nq + 1) {
        if i <= nz {
            top.push(BasisElement::interior(s("y", i), 2));
        }
        if i - 1 <= nq {
            top.push(BasisElement::boundary(s("q", i - 1), 1));
        }
    }
    order.extend(top.into_iter().rev());
    b.elements = order;
    let mut trivial = Vec::new();
    for i in 1..=nq {
        b.image(s("q", i), vec![(s("r", i), 1)]);
        trivial.push(s("r", i));
        if i < nz {
            trivial.push(s("q", i));
        }
    }
    for i in 1..=nz {
        let mut dz = Vec::new();
        let mut dy = vec![(s("z", i), 1)];
        if i <= nq {
            dz.push((s("r", i), 1));
            dy.push((s("q", i), -1));
        }
        if i >= 2 {
            dz.push((s("r", i - 1), -1));
            dy.push((s("q", i - 1), 1));
        }
        b.image(s("z", i), dz);
        b.image(s("y", i), dy);
    }
    b.build(field, &trivial)
}

/// `c < c+` with `d(c+) = c`.
pub fn make_c_pair(field: Field) -> MDifferential {
    let mut b = Builder::new();
    b.elements = vec![BasisElement::boundary("c", 0), BasisElement::interior("x", 1)];
    b.image("x", vec![("c".into(), 1)]);
    b.build(field, &["c".into()])
}

/// `r < z < q < y` with `dq = r`, `dz = r`, `dy = z - q`; `r` and `q` trivial.
pub fn make_double_c_pair(field: Field) -> MDifferential {
    let mut b = Builder::new();
    b.elements = vec![
        BasisElement::boundary("r", 0),
        BasisElement::interior("z", 1),
        BasisElement::boundary("q", 1),
        BasisElement::interior("y", 2),
    ];
    b.image("q", vec![("r".into(), 1)]);
    b.image("z", vec![("r".into(), 1)]);
    b.image("y", vec![("z".into(), 1), ("q".into(), -1)]);
    b.build(field, &["r".into(), "q".into()])
}

/// `p < x` with `dx = p`, nothing trivial.
pub fn make_middle(field: Field) -> MDifferential {
    let mut b = Builder::new();
    b.elements = vec![BasisElement::boundary("p", 0), BasisElement::interior("x", 1)];
    b.image("x", vec![("p".into(), 1)]);
    b.build(field, &[])
}

fn single(field: Field, boundary: bool) -> MDifferential {
    let mut b = Builder::new();
    b.elements = vec![if boundary { BasisElement::boundary("p", 0) } else { BasisElement::interior("x", 0) }];
    b.build(field, &[])
}

fn sharp_err(msg: &str) -> Error {
    Error::Sharp(msg.into())
}

/// The gluing `m1 # m2`: order `x_1 .. x_{L-1}, a_1, x_L, a_2 .. a_K`, with
/// `a_1` added to the image of `x_L` and made trivial.
pub fn sharp(m1: &MDifferential, m2: &MDifferential) -> Result<MDifferential> {
    if m2.is_empty() {
        return Ok(m1.clone());
    }
    if m1.is_empty() {
        return Ok(m2.clone());
    }
    if m1.field() != m2.field() {
        return Err(Error::FieldMismatch);
    }
    let (t1, t2) = (m1.triple(), m2.triple());
    if t1.elements().iter().any(|e| t2.position(&e.id).is_some()) {
        return Err(sharp_err("operands share an id"));
    }
    let a1 = t1.get(0);
    let big_l = t2.len();
    let xl = t2.get(big_l - 1);
    if !a1.is_boundary() {
        return Err(sharp_err("first element of the left operand is not a boundary element"));
    }
    if a1.trivial {
        return Err(sharp_err("first element of the left operand is already trivial"));
    }
    if xl.is_boundary() {
        return Err(sharp_err("last element of the right operand is not interior"));
    }
    if xl.degree != a1.degree + 1 {
        return Err(sharp_err("last element of the right operand must sit one degree above the first of the left"));
    }
    if big_l >= 2 && t2.is_trivial(big_l - 2) {
        return Err(sharp_err("second-to-last element of the right operand is trivial"));
    }
    // new position of each element of m1 and m2
    let k = t1.len();
    let pos1 = |i: usize| if i == 0 { big_l - 1 } else { big_l + i };
    let pos2 = |i: usize| if i + 1 == big_l { big_l } else { i };
    let mut elements = vec![BasisElement::boundary("", 0); k + big_l];
    for i in 0..k {
        elements[pos1(i)] = t1.get(i).clone();
    }
    for i in 0..big_l {
        elements[pos2(i)] = t2.get(i).clone();
    }
    elements[pos1(0)].trivial = true;
    let triple = Arc::new(OrderedTriple::new(elements)?);
    let field = m1.field();
    let mut m = Matrix::zeros(field, k + big_l, k + big_l);
    for i in 0..k {
        for (j, c) in m1.image(i) {
            m.set(pos1(j), pos1(i), c);
        }
    }
    for i in 0..big_l {
        for (j, c) in m2.image(i) {
            m.set(pos2(j), pos2(i), c);
        }
    }
    let (r, c) = (pos1(0), pos2(big_l - 1));
    let v = m.get(r, c) + &field.one();
    m.set(r, c, v);
    let out = MDifferential::new(triple, m)?;
    let report = out.validate();
    if !report.is_ok() {
        return Err(sharp_err(&format!("result is not admissible: {report}")));
    }
    Ok(out)
}

/// `m1 # m2` after renaming both operands apart and shifting `m2` so the
/// degree condition holds.
pub fn glue(m1: &MDifferential, m2: &MDifferential, tag1: &str, tag2: &str) -> Result<MDifferential> {
    if m1.is_empty() || m2.is_empty() {
        return sharp(m1, m2);
    }
    let delta = m1.triple().degree(0) + 1 - m2.triple().degree(m2.len() - 1);
    sharp(&m1.prefixed(tag1), &m2.shifted(delta).prefixed(tag2))
}

/// A representative summand for a label.
pub fn realize(label: &Label, field: Field) -> Result<MDifferential> {
    let (k, l) = (label.k, label.l);
    Ok(match label.base {
        BaseKind::LR => glue(&make_l(k, field), &make_r(l, field), "L", "R")?,
        BaseKind::LI => glue(&make_l(k, field), &single(field, false), "L", "I")?,
        BaseKind::RB => glue(&single(field, true), &make_r(l, field), "B", "R")?,
        BaseKind::LCR => {
            let left = glue(&make_l(k, field), &make_middle(field), "L", "M")?;
            glue(&left, &make_r(l, field), "", "R")?
        }
        BaseKind::CP => make_c_pair(field),
        BaseKind::CP2 => make_double_c_pair(field),
    })
}
