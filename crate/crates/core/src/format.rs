//! Text formats: `.mpair` documents, `.scenario` event lists and witness JSON.
//!
//! ```text
//! # comments run to the end of the line
//! field Q
//! element b1 deg=0 side=boundary
//! element i2 deg=1 side=interior
//! d i2 = -1*b1
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::differential::MDifferential;
use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::matrix::Matrix;
use crate::modelgen::{CriticalEvent, Direction, EventKind};
use crate::transform::{BasisTransform, TransformKind};
use crate::triple::{BasisElement, OrderedTriple, Side};

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Whitespace-separated tokens of one line with their 1-based columns,
/// comments removed.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &body[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &body[s..]));
    }
    out
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && !id.contains(['*', '+', '=', '#']) && !id.starts_with('-')
}

fn key_value<'a>(line: usize, (col, tok): (usize, &'a str), key: &str) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| err(line, col, format!("expected `{key}=...`, found `{tok}`")))
}

/// Parses an `.mpair` document. Only syntax and name resolution are checked;
/// use [`MDifferential::validate`] for the algebraic conditions.
pub fn parse(text: &str) -> Result<MDifferential> {
    let mut field: Option<Field> = None;
    let mut elements: Vec<BasisElement> = Vec::new();
    // (line, column of target id, source id, terms as (column, coefficient, id))
    type Terms<'a> = Vec<(usize, &'a str, &'a str)>;
    let mut equations: Vec<(usize, usize, &str, Terms)> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else { continue };
        match head {
            "field" => {
                if field.is_some() {
                    return Err(err(ln, col, "second field statement"));
                }
                if !elements.is_empty() || !equations.is_empty() {
                    return Err(err(ln, col, "field statement must come first"));
                }
                let &[_, (fc, spec)] = toks.as_slice() else {
                    return Err(err(ln, col, "expected `field <GF(p)|Q>`"));
                };
                field = Some(spec.parse().map_err(|e: Error| err(ln, fc, e.to_string()))?);
            }
            "element" => {
                if toks.len() < 4 || toks.len() > 5 {
                    return Err(err(ln, col, "expected `element <id> deg=<int> side=boundary|interior [trivial]`"));
                }
                let (ic, id) = toks[1];
                if !valid_id(id) {
                    return Err(err(ln, ic, format!("bad element id `{id}`")));
                }
                let deg = key_value(ln, toks[2], "deg")?;
                let degree: i64 = deg.parse().map_err(|_| err(ln, toks[2].0, format!("bad degree `{deg}`")))?;
                let side = match key_value(ln, toks[3], "side")? {
                    "boundary" => Side::Boundary,
                    "interior" => Side::Interior,
                    s => return Err(err(ln, toks[3].0, format!("bad side `{s}`"))),
                };
                let trivial = match toks.get(4) {
                    None => false,
                    Some(&(_, "trivial")) => true,
                    Some(&(c, t)) => return Err(err(ln, c, format!("unexpected `{t}`"))),
                };
                elements.push(BasisElement { id: id.to_string(), degree, side, trivial });
            }
            "d" => {
                if toks.len() < 4 || toks[2].1 != "=" {
                    return Err(err(ln, col, "expected `d <id> = <term> (+ <term>)*`"));
                }
                let mut terms = Vec::new();
                let rest = &toks[3..];
                if rest.len() == 1 && rest[0].1 == "0" {
                    equations.push((ln, toks[1].0, toks[1].1, terms));
                    continue;
                }
                for (k, &(c, t)) in rest.iter().enumerate() {
                    if k % 2 == 1 {
                        if t != "+" {
                            return Err(err(ln, c, format!("expected `+`, found `{t}`")));
                        }
                        continue;
                    }
                    let (coef, id) = match t.rsplit_once('*') {
                        Some((coef, id)) => (coef, id),
                        None => match t.strip_prefix('-') {
                            Some(id) => ("-1", id),
                            None => ("1", t),
                        },
                    };
                    if !valid_id(id) {
                        return Err(err(ln, c, format!("bad term `{t}`")));
                    }
                    terms.push((c, coef, id));
                }
                if rest.len() % 2 == 0 {
                    return Err(err(ln, rest.last().unwrap().0, "dangling `+`"));
                }
                equations.push((ln, toks[1].0, toks[1].1, terms));
            }
            other => return Err(err(ln, col, format!("unknown statement `{other}`"))),
        }
    }
    let field = field.ok_or_else(|| err(1, 1, "missing field statement"))?;
    let triple = Arc::new(OrderedTriple::new(elements)?);
    let n = triple.len();
    let mut m = Matrix::zeros(field, n, n);
    let mut seen = vec![false; n];
    for (ln, ic, src, terms) in equations {
        let i = triple.position(src).ok_or_else(|| err(ln, ic, format!("unknown element `{src}`")))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(err(ln, ic, format!("second equation for `{src}`")));
        }
        for (c, coef, id) in terms {
            let j = triple.position(id).ok_or_else(|| err(ln, c, format!("unknown element `{id}`")))?;
            let v: Coeff = field.parse_coeff(coef).map_err(|e| err(ln, c, e.to_string()))?;
            if !m.get(j, i).is_zero() {
                return Err(err(ln, c, format!("repeated term `{id}`")));
            }
            m.set(j, i, v);
        }
    }
    MDifferential::new(triple, m)
}

/// Canonical text: field, elements in order, one equation per nonzero
/// column with terms from the highest position down.
pub fn emit(d: &MDifferential) -> String {
    let mut out = String::new();
    let t = d.triple();
    writeln!(out, "field {}", d.field()).unwrap();
    for e in t.elements() {
        write!(out, "element {} deg={} side={}", e.id, e.degree, e.side).unwrap();
        if e.trivial {
            out.push_str(" trivial");
        }
        out.push('\n');
    }
    for i in 0..d.len() {
        let mut image = d.image(i);
        if image.is_empty() {
            continue;
        }
        image.reverse();
        let terms: Vec<String> = image
            .into_iter()
            .map(|(j, c)| if c.is_one() { t.id(j).to_string() } else { format!("{c}*{}", t.id(j)) })
            .collect();
        writeln!(out, "d {} = {}", t.id(i), terms.join(" + ")).unwrap();
    }
    out
}

fn event_kind(s: &str) -> Option<EventKind> {
    Some(match s {
        "interior_min" => EventKind::InteriorMin,
        "interior_max" => EventKind::InteriorMax,
        "boundary_left" => EventKind::BoundaryLeft,
        "boundary_right" => EventKind::BoundaryRight,
        _ => return None,
    })
}

/// Parses a `.scenario` file, one event per line:
///
/// ```text
/// boundary_right inward value=0
/// interior_min pos=1/3 value=1
/// ```
pub fn parse_scenario(text: &str) -> Result<Vec<CriticalEvent>> {
    let rational = |ln: usize, c: usize, s: &str| -> Result<BigRational> {
        s.parse().map_err(|_| err(ln, c, format!("bad number `{s}`")))
    };
    let mut events = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else { continue };
        let kind = event_kind(head).ok_or_else(|| err(ln, col, format!("unknown event `{head}`")))?;
        let event = match kind {
            EventKind::InteriorMin | EventKind::InteriorMax => {
                let &[_, p, v] = toks.as_slice() else {
                    return Err(err(ln, col, format!("expected `{head} pos=<q> value=<q>`")));
                };
                let pos = rational(ln, p.0, key_value(ln, p, "pos")?)?;
                let val = rational(ln, v.0, key_value(ln, v, "value")?)?;
                CriticalEvent::interior(kind, pos, val)
            }
            _ => {
                let &[_, (dc, dir), v] = toks.as_slice() else {
                    return Err(err(ln, col, format!("expected `{head} inward|outward value=<q>`")));
                };
                let dir = match dir {
                    "inward" => Direction::Inward,
                    "outward" => Direction::Outward,
                    _ => return Err(err(ln, dc, format!("bad direction `{dir}`"))),
                };
                CriticalEvent::boundary(kind, dir, rational(ln, v.0, key_value(ln, v, "value")?)?)
            }
        };
        events.push(event);
    }
    Ok(events)
}

pub fn emit_scenario(events: &[CriticalEvent]) -> String {
    let mut out = String::new();
    for e in events {
        match e.direction {
            Some(dir) => writeln!(out, "{} {} value={}", e.kind, dir, e.value),
            None => writeln!(out, "{} pos={} value={}", e.kind, e.position, e.value),
        }
        .unwrap();
    }
    out
}

/// Serialized change of basis: `matrix[row][col]` as coefficient strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub kind: TransformKind,
    pub field: String,
    pub elements: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

impl WitnessFile {
    pub fn from_transform(g: &BasisTransform) -> Self {
        WitnessFile {
            kind: g.kind(),
            field: g.field().to_string(),
            elements: g.triple().elements().iter().map(|e| e.id.clone()).collect(),
            matrix: g.matrix().to_strings(),
        }
    }

    /// Rebuilds the transform on `triple`, whose ids must match in order.
    pub fn to_transform(&self, triple: &OrderedTriple) -> Result<BasisTransform> {
        let ids: Vec<&str> = triple.elements().iter().map(|e| e.id.as_str()).collect();
        if ids != self.elements.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(Error::Witness("element list does not match the input".into()));
        }
        let field: Field = self.field.parse()?;
        let n = ids.len();
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Witness(format!("matrix must be {n}x{n}")));
        }
        let mut m = Matrix::zeros(field, n, n);
        for (r, row) in self.matrix.iter().enumerate() {
            for (c, s) in row.iter().enumerate() {
                m.set(r, c, field.parse_coeff(s).map_err(|e| Error::Witness(e.to_string()))?);
            }
        }
        BasisTransform::new(triple.clone(), m, self.kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Witness(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential::tests::e1;

    const E1: &str = "field Q\n\
element b1 deg=0 side=boundary\n\
element i2 deg=1 side=interior\n\
element b3 deg=1 side=boundary\n\
element i4 deg=2 side=interior\n\
d i2 = -1*b1\n\
d b3 = b1\n\
d i4 = b3 + i2\n";

    #[test]
    fn e1_document() {
        let d = parse(E1).unwrap();
        assert!(d.equal(&e1(Field::Rational)));
        assert_eq!(emit(&d), E1);
    }

    #[test]
    fn lenient_input_becomes_canonical() {
        let text = "# E1 again\nfield Q\nelement b1 deg=0 side=boundary   # first\nelement i2 deg=1 side=interior\n\nd i2 = -b1\n";
        let d = parse(text).unwrap();
        assert_eq!(emit(&d), "field Q\nelement b1 deg=0 side=boundary\nelement i2 deg=1 side=interior\nd i2 = -1*b1\n");
    }

    #[test]
    fn errors_carry_positions() {
        let bad = "field GF(2)\nelement a deg=x side=boundary\n";
        assert!(matches!(parse(bad), Err(Error::Parse { line: 2, column: 11, .. })));
        let bad = "field GF(2)\nelement a deg=0 side=boundary\nd a = 1*zz\n";
        assert!(matches!(parse(bad), Err(Error::Parse { line: 3, column: 7, .. })));
        assert!(matches!(parse("element a deg=0 side=boundary\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("field GF(2)\nfrob\n"), Err(Error::Parse { line: 2, column: 1, .. })));
        assert!(matches!(
            parse("field GF(2)\nelement a deg=0 side=boundary\nd a = a +\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn semantic_problems_are_deferred() {
        let text = "field GF(2)\nelement a deg=0 side=boundary\nelement b deg=0 side=interior\nd a = b\n";
        let d = parse(text).unwrap();
        assert!(!d.is_valid());
    }

    #[test]
    fn scenario_round_trip() {
        let text = "boundary_right inward value=0\ninterior_min pos=1/3 value=1\nboundary_left outward value=2\ninterior_max pos=2/3 value=3\n";
        let events = parse_scenario(text).unwrap();
        assert_eq!(events.len(), 4);
        assert_eq!(emit_scenario(&events), text);
        assert!(matches!(parse_scenario("interior_min value=1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn witness_round_trip() {
        let d = e1(Field::Rational);
        let g = crate::transform::random_transform(d.triple(), TransformKind::Weak, Field::Rational, 3, 0.7);
        let w = WitnessFile::from_transform(&g);
        let back = WitnessFile::from_json(&w.to_json()).unwrap().to_transform(d.triple()).unwrap();
        assert_eq!(back.matrix(), g.matrix());
        assert_eq!(back.kind(), TransformKind::Weak);
    }
}
