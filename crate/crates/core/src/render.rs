//! SVG rendering: the diagram drawn on its fundamental polygon.
//!
//! The layout is fixed. Sides of the regular `4g`-gon are labelled with
//! their edge (capitalized on the reversed occurrence), crossings sit at
//! evenly spaced ticks in slot order, and every chord is a straight line
//! coloured by family. Genus 0 draws an empty disk.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write;

use crate::diagram::MultisectionDiagram;
use crate::surface::{CrossingToken, Edge, EdgeKind};

const SIZE: f64 = 480.0;
const RADIUS: f64 = 200.0;
const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub fn family_color(f: usize) -> &'static str {
    PALETTE[f % PALETTE.len()]
}

type Point = (f64, f64);

struct Layout {
    vertices: Vec<Point>,
    /// Slots crossing each edge, sorted.
    slots: BTreeMap<Edge, Vec<i64>>,
}

impl Layout {
    fn new(d: &MultisectionDiagram) -> Self {
        let sides = 4 * d.genus();
        let c = SIZE / 2.0;
        let vertices = (0..sides)
            .map(|k| {
                let a = -PI / 2.0 - PI / sides as f64 + 2.0 * PI * k as f64 / sides as f64;
                // SVG's y axis points down; negate so the order is counterclockwise on screen
                (c + RADIUS * a.cos(), c - RADIUS * a.sin())
            })
            .collect();
        let mut slots: BTreeMap<Edge, Vec<i64>> = BTreeMap::new();
        for t in d.curves().flat_map(|c| c.tokens()) {
            slots.entry(t.edge).or_default().push(t.slot);
        }
        for v in slots.values_mut() {
            v.sort_unstable();
        }
        Layout { vertices, slots }
    }

    fn along(&self, side: usize, t: f64) -> Point {
        let (a, b) = (
            self.vertices[side],
            self.vertices[(side + 1) % self.vertices.len()],
        );
        (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
    }

    /// The crossing `t` seen on the positive or negative occurrence of its
    /// edge. Slots run along the side on a positive occurrence and against
    /// it on a negative one.
    fn point(&self, t: &CrossingToken, positive: bool) -> Point {
        let on_edge = &self.slots[&t.edge];
        let rank = on_edge.binary_search(&t.slot).expect("slot recorded") as f64;
        let frac = (rank + 1.0) / (on_edge.len() as f64 + 1.0);
        self.along(
            t.edge.side(positive),
            if positive { frac } else { 1.0 - frac },
        )
    }
}

fn side_label(edge: Edge, positive: bool) -> String {
    let letter = match (edge.kind, positive) {
        (EdgeKind::X, true) => 'x',
        (EdgeKind::X, false) => 'X',
        (EdgeKind::Y, true) => 'y',
        (EdgeKind::Y, false) => 'Y',
    };
    format!("{letter}{}", edge.handle)
}

/// Deterministic SVG document for `d`.
pub fn render_svg(d: &MultisectionDiagram) -> String {
    let mut s = String::new();
    let c = SIZE / 2.0;
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    if d.genus() == 0 {
        writeln!(s, r#"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="black" stroke-width="2"/>"#).unwrap();
        s.push_str("</svg>\n");
        return s;
    }
    let layout = Layout::new(d);
    let pts: Vec<String> = layout
        .vertices
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    writeln!(
        s,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        pts.join(" ")
    )
    .unwrap();
    for (side, (edge, sign)) in d.surface().boundary_word().into_iter().enumerate() {
        let (mx, my) = layout.along(side, 0.5);
        let (lx, ly) = (c + (mx - c) * 1.09, c + (my - c) * 1.09);
        writeln!(
            s,
            r#"<text x="{lx:.2}" y="{ly:.2}" font-family="monospace" font-size="14" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            side_label(edge, sign.is_pos())
        )
        .unwrap();
    }
    writeln!(s, r#"<g class="ticks" stroke="black" stroke-width="1">"#).unwrap();
    for t in d.curves().flat_map(|c| c.tokens()) {
        for positive in [true, false] {
            let (x, y) = layout.point(t, positive);
            let (dx, dy) = ((x - c) / RADIUS * 6.0, (y - c) / RADIUS * 6.0);
            writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                x - dx,
                y - dy,
                x + dx,
                y + dy
            )
            .unwrap();
        }
    }
    s.push_str("</g>\n");
    for (f, fam) in d.families().iter().enumerate() {
        for (i, curve) in fam.iter().enumerate() {
            writeln!(
                s,
                r#"<g class="curve" data-family="{}" data-curve="{}" stroke="{}" stroke-width="2">"#,
                f + 1,
                i + 1,
                family_color(f)
            )
            .unwrap();
            let t = curve.tokens();
            for k in 0..t.len() {
                let (x1, y1) = layout.point(&t[k], !t[k].sign.is_pos());
                let next = &t[(k + 1) % t.len()];
                let (x2, y2) = layout.point(next, next.sign.is_pos());
                writeln!(
                    s,
                    r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
                )
                .unwrap();
            }
            s.push_str("</g>\n");
        }
    }
    s.push_str("</svg>\n");
    s
}
