//! Drawings of an M-pair: circles stacked bottom to top in order, boundary
//! elements left of the axis, interior ones right of it, one segment per
//! nonzero coefficient and a double segment for each trivial pair.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::differential::MDifferential;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(RenderFormat::Ascii),
            "svg" => Ok(RenderFormat::Svg),
            _ => Err(Error::InvalidTriple(format!("unknown render format `{s}`"))),
        }
    }
}

/// One drawn segment from `from` (the column) to `to` (the row).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    pub label: Option<String>,
    pub double: bool,
}

/// Segments in column order, then row order.
pub fn segments(d: &MDifferential) -> Vec<Segment> {
    let t = d.triple();
    let mut out = Vec::new();
    for i in 0..d.len() {
        for (j, c) in d.image(i) {
            let double = t.is_trivial(j) && i == j + 1;
            out.push(Segment { from: i, to: j, label: (!c.is_one()).then(|| c.to_string()), double });
        }
    }
    out
}

pub fn render(d: &MDifferential, format: RenderFormat) -> String {
    match format {
        RenderFormat::Ascii => ascii(d),
        RenderFormat::Svg => svg(d),
    }
}

pub fn ascii(d: &MDifferential) -> String {
    let t = d.triple();
    let width = t.elements().iter().map(|e| e.id.len()).max().unwrap_or(1).max(1);
    let mut out = String::new();
    writeln!(out, "{:>4}  {:>w$}     | A\\B", "deg", "B", w = width + 4).unwrap();
    for i in (0..t.len()).rev() {
        let e = t.get(i);
        let mark = if e.trivial { "(c)" } else { "(o)" };
        if e.is_boundary() {
            writeln!(out, "{:>4}  {:>w$} {mark} |", e.degree, e.id, w = width).unwrap();
        } else {
            writeln!(out, "{:>4}  {:>w$}     | (o) {}", e.degree, "", e.id, w = width).unwrap();
        }
    }
    let segs = segments(d);
    if !segs.is_empty() {
        out.push_str("segments:\n");
    }
    for s in segs {
        let arrow = if s.double { "==" } else { "--" };
        write!(out, "  {} {arrow} {}", t.id(s.from), t.id(s.to)).unwrap();
        if let Some(l) = s.label {
            write!(out, "  [{l}]").unwrap();
        }
        out.push('\n');
    }
    out
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const STEP: f64 = 40.0;
const RADIUS: f64 = 10.0;
const WIDTH: f64 = 240.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;

/// SVG 1.1; the viewBox depends only on the element count.
pub fn svg(d: &MDifferential) -> String {
    let t = d.triple();
    let n = t.len();
    let height = STEP * (n as f64 + 1.0);
    let centre = |i: usize| -> (f64, f64) {
        let x = if t.is_boundary(i) { LEFT } else { RIGHT };
        (x, height - STEP * (i as f64 + 1.0))
    };
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {WIDTH} {height}\" width=\"{WIDTH}\" height=\"{height}\">"
    )
    .unwrap();
    writeln!(out, "  <line class=\"axis\" x1=\"120\" y1=\"0\" x2=\"120\" y2=\"{height}\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>").unwrap();
    for s in segments(d) {
        let (x1, y1) = centre(s.from);
        let (x2, y2) = centre(s.to);
        let offsets: &[f64] = if s.double { &[-2.0, 2.0] } else { &[0.0] };
        let (dx, dy) = (x2 - x1, y2 - y1);
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (nx, ny) = (-dy / len, dx / len);
        for o in offsets {
            writeln!(
                out,
                "  <line class=\"{}\" x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
                if s.double { "double" } else { "segment" },
                x1 + o * nx,
                y1 + o * ny,
                x2 + o * nx,
                y2 + o * ny
            )
            .unwrap();
        }
        if let Some(l) = &s.label {
            writeln!(
                out,
                "  <text class=\"coef\" x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"middle\">{}</text>",
                (x1 + x2) / 2.0 + 6.0 * nx,
                (y1 + y2) / 2.0 + 6.0 * ny,
                escape(l)
            )
            .unwrap();
        }
    }
    for i in 0..n {
        let (x, y) = centre(i);
        let e = t.get(i);
        writeln!(out, "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{RADIUS}\" fill=\"white\" stroke=\"black\"/>")
            .unwrap();
        let (tx, anchor) = if e.is_boundary() { (x - RADIUS - 4.0, "end") } else { (x + RADIUS + 4.0, "start") };
        writeln!(
            out,
            "  <text x=\"{tx:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"{anchor}\">{}</text>",
            y + 4.0,
            escape(&e.id)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
