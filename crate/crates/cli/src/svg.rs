//! SVG drawing of an orbit and its elementary segments.
//!
//! Geometry stays exact until the last moment: every coordinate is computed
//! as a rational and only truncated to a decimal string when written out.

use std::collections::BTreeMap;
use std::fmt::Write;

use diagonal_billiard::{Orbit, Rational, Segment, WeightProfile};

const CANVAS: i64 = 640;
const MARGIN: i64 = 48;
const LEGEND_ROW: i64 = 20;
const DIGITS: usize = 12;

const PALETTE: [&str; 5] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e"];

fn num(r: &Rational) -> String {
    r.to_decimal_string(DIGITS)
}

/// Maps table coordinates to canvas coordinates, y pointing down.
struct Frame {
    scale: Rational,
    left: Rational,
    bottom: Rational,
}

impl Frame {
    fn new(p: &Rational, q: &Rational) -> Self {
        let inner = Rational::from_integer(CANVAS - 2 * MARGIN);
        let scale = &inner / p.max(q);
        let left = Rational::from_integer(MARGIN) + (&inner - p * &scale) / Rational::from_integer(2);
        let bottom = Rational::from_integer(CANVAS - MARGIN) - (&inner - q * &scale) / Rational::from_integer(2);
        Frame { scale, left, bottom }
    }

    fn point(&self, x: &Rational, y: &Rational) -> String {
        let cx = &self.left + x * &self.scale;
        let cy = &self.bottom - y * &self.scale;
        format!("{},{}", num(&cx), num(&cy))
    }
}

/// Table coordinates of the point at perimeter coordinate `s` (corners included).
fn perimeter_xy(p: &Rational, q: &Rational, s: &Rational) -> (Rational, Rational) {
    let pq = p + q;
    let top_end = &pq + p;
    if s <= p {
        (s.clone(), Rational::ZERO)
    } else if s <= &pq {
        (p.clone(), s - p)
    } else if s <= &top_end {
        (&top_end - s, q.clone())
    } else {
        (Rational::ZERO, Rational::ONE - s)
    }
}

/// Polyline along the perimeter from `from` counter-clockwise by `len`, through any corners.
fn arc_points(p: &Rational, q: &Rational, from: &Rational, len: &Rational) -> Vec<(Rational, Rational)> {
    let pq = p + q;
    let corners = [Rational::ZERO, p.clone(), pq.clone(), &pq + p];
    let mut offsets: Vec<Rational> =
        corners.iter().map(|c| (c - from).rem_euclid(&Rational::ONE)).filter(|d| d.is_positive() && d < len).collect();
    offsets.sort();
    let mut pts = vec![perimeter_xy(p, q, from)];
    for d in offsets.iter().chain(std::iter::once(len)) {
        pts.push(perimeter_xy(p, q, &(from + d).rem_euclid(&Rational::ONE)));
    }
    pts
}

/// One legend row: a stroke class and its label.
struct Class {
    label: String,
    members: usize,
}

/// Draws the table, the trajectory `F(1) → … → F(n)`, the labelled points and
/// the elementary segments along the perimeter, stroked by weight class.
///
/// With a profile, class `i` is the weight `ωᵢ`; without one, each distinct
/// weight gets its own class. The legend lists only classes that occur.
pub fn render_svg(orbit: &Orbit, elementary: &[Segment], profile: Option<&WeightProfile>) -> String {
    let table = orbit.spec().table();
    let (p, q) = (table.p(), table.q());
    let frame = Frame::new(p, q);

    let mut distinct: Vec<usize> = elementary.iter().map(|s| s.weight().value).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let class_of = |weight: usize| -> Option<usize> {
        match profile {
            Some(prof) => prof.class_of(weight),
            None => distinct.iter().position(|&w| w == weight),
        }
    };

    let mut classes: BTreeMap<Option<usize>, Class> = BTreeMap::new();
    for seg in elementary {
        let w = seg.weight();
        let key = class_of(w.value);
        let entry = classes.entry(key).or_insert_with(|| {
            let label = match (key, profile) {
                (Some(i), Some(prof)) => {
                    format!("ω{i} = {}, a{i} = {}, |A{i}| = {}", prof.omega[i], prof.a[i], prof.counts[i])
                }
                (Some(_), None) => format!("weight {} ({:?}), length {}", w.value, w.parity, seg.length).to_lowercase(),
                (None, _) => format!("weight {} outside ω0..ω4", w.value),
            };
            Class { label, members: 0 }
        });
        entry.members += 1;
    }

    let height = CANVAS + LEGEND_ROW * (classes.len() as i64 + 2);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{height}" viewBox="0 0 {CANVAS} {height}">"#
    );
    out.push_str("<style>\n");
    out.push_str("  .table { fill: none; stroke: #999; stroke-width: 1; }\n");
    out.push_str("  .path { fill: none; stroke: #333; stroke-width: 1; stroke-opacity: 0.7; }\n");
    out.push_str("  .arc { fill: none; stroke-width: 5; stroke-opacity: 0.8; stroke-linecap: butt; }\n");
    out.push_str("  .pt { fill: #000; }\n");
    out.push_str("  text { font: 12px sans-serif; }\n");
    for (i, color) in PALETTE.iter().enumerate() {
        let _ = writeln!(out, "  .w{i} {{ stroke: {color}; }}");
    }
    out.push_str("  .wx { stroke: #f00; stroke-dasharray: 4 2; }\n");
    out.push_str("</style>\n");

    let corners = [
        (Rational::ZERO, Rational::ZERO),
        (p.clone(), Rational::ZERO),
        (p.clone(), q.clone()),
        (Rational::ZERO, q.clone()),
    ];
    let rect: Vec<String> = corners.iter().map(|(x, y)| frame.point(x, y)).collect();
    let _ = writeln!(out, r#"<polygon class="table" points="{}"/>"#, rect.join(" "));

    for seg in elementary {
        let from = orbit.point(seg.from).s.value();
        let pts: Vec<String> = arc_points(p, q, from, &seg.length).iter().map(|(x, y)| frame.point(x, y)).collect();
        let class = class_of(seg.weight().value).map_or("wx".to_string(), |i| format!("w{i}"));
        let _ = writeln!(
            out,
            r#"<polyline class="arc {class}" data-from="{}" data-to="{}" data-weight="{}" points="{}"/>"#,
            seg.from,
            seg.to,
            seg.weight().value,
            pts.join(" ")
        );
    }

    let path: Vec<String> = orbit.points().iter().map(|pt| frame.point(&pt.side_point.x, &pt.side_point.y)).collect();
    let _ = writeln!(out, r#"<polyline class="path" points="{}"/>"#, path.join(" "));

    for (pt, xy) in orbit.points().iter().zip(&path) {
        let (cx, cy) = xy.split_once(',').expect("point is x,y");
        let _ = writeln!(out, r#"<circle class="pt" cx="{cx}" cy="{cy}" r="3"/>"#);
        let _ = writeln!(out, r#"<text class="label" x="{cx}" y="{cy}" dx="5" dy="-5">F{}</text>"#, pt.index);
    }

    let spec = orbit.spec();
    let mut y = CANVAS;
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{y}">p = {p}, q = {q}, s1 = {}, {}, n = {}</text>"#,
        spec.s1().value(),
        spec.dir(),
        orbit.n()
    );
    for (key, class) in &classes {
        y += LEGEND_ROW;
        let css = key.map_or("wx".to_string(), |i| format!("w{i}"));
        let _ = writeln!(
            out,
            r#"<line class="arc legend {css}" x1="{MARGIN}" y1="{}" x2="{}" y2="{}"/>"#,
            y - 4,
            MARGIN + 24,
            y - 4
        );
        let _ = writeln!(out, r#"<text x="{}" y="{y}">{} ({} shown)</text>"#, MARGIN + 32, class.label, class.members);
    }
    out.push_str("</svg>\n");
    out
}
