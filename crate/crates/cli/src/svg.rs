//! Minimal static SVG renderings: line and stem plots, a bipartite interval
//! chart, a circular weighted graph, and a heat map.

use std::f64::consts::TAU;
use std::fmt::Write;

use consonoscope::{PairwiseAnalysis, WeightedGraph};

const W: f64 = 800.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;

pub const BLUE: &str = "#1f5fbf";
pub const RED: &str = "#c0392b";

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn open(width: f64, height: f64, title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        width / 2.0,
        escape(title)
    )
}

pub struct Series<'a> {
    pub name: &'a str,
    pub points: &'a [(f64, f64)],
    pub color: &'a str,
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Stem,
}

fn bounds(series: &[Series<'_>], style: Style) -> (f64, f64, f64, f64) {
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if style == Style::Stem {
        y0 = y0.min(0.0);
    }
    if !x0.is_finite() {
        return (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    (x0, x1, y0, y1)
}

/// Axes with min/max tick labels and one polyline (or stem set) per series.
pub fn plot(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>], style: Style) -> String {
    let (x0, x1, y0, y1) = bounds(series, style);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);
    let mut out = open(W, H, title);
    let (left, right, top, bottom) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
    writeln!(out, "<path d=\"M{left:.1} {top:.1} V{bottom:.1} H{right:.1}\" stroke=\"black\" fill=\"none\"/>").unwrap();
    writeln!(out, "<text x=\"{left:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>", bottom + 18.0, fmt_tick(x0)).unwrap();
    writeln!(out, "<text x=\"{right:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>", bottom + 18.0, fmt_tick(x1)).unwrap();
    writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>", left - 6.0, bottom, fmt_tick(y0)).unwrap();
    writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>", left - 6.0, top + 4.0, fmt_tick(y1)).unwrap();
    writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>", W / 2.0, H - 16.0, escape(x_label)).unwrap();
    writeln!(
        out,
        "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>",
        H / 2.0,
        H / 2.0,
        escape(y_label)
    )
    .unwrap();
    for (k, s) in series.iter().enumerate() {
        match style {
            Style::Line => {
                let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                writeln!(
                    out,
                    "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" points=\"{}\"/>",
                    s.color,
                    pts.join(" ")
                )
                .unwrap();
            }
            Style::Stem => {
                let base = sy(0f64.clamp(y0, y1));
                for &(x, y) in s.points {
                    writeln!(
                        out,
                        "<line x1=\"{0:.2}\" y1=\"{base:.2}\" x2=\"{0:.2}\" y2=\"{1:.2}\" stroke=\"{2}\"/><circle cx=\"{0:.2}\" cy=\"{1:.2}\" r=\"2.5\" fill=\"{2}\"/>",
                        sx(x),
                        sy(y),
                        s.color
                    )
                    .unwrap();
                }
            }
        }
        writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"{}\" text-anchor=\"end\">{}</text>",
            right,
            top + 14.0 * k as f64,
            s.color,
            escape(s.name)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1000.0 || (v != 0.0 && v.abs() < 0.01) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Pitches in two columns; every nonzero off-diagonal score is an edge whose
/// width and opacity follow the score. Flagged pairs are drawn solid.
pub fn bipartite(title: &str, a: &PairwiseAnalysis) -> String {
    let n = a.len();
    let (w, h) = (520.0, 60.0 + 34.0 * n as f64);
    let (xl, xr) = (110.0, w - 110.0);
    let y = |i: usize| 60.0 + 34.0 * i as f64;
    let upper = |m: &Vec<Vec<f64>>| {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| m[i][j]).fold(0.0, f64::max)
    };
    let cmax = upper(&a.consonance);
    let dmax = upper(&a.dissonance);
    let mut out = open(w, h, title);
    for (m, flags, max, color) in [
        (&a.dissonance, &a.dissonant, dmax, RED),
        (&a.consonance, &a.consonant, cmax, BLUE),
    ] {
        for i in 0..n {
            for j in 0..n {
                if i == j || m[i][j] <= 0.0 || max <= 0.0 {
                    continue;
                }
                let r = m[i][j] / max;
                let dash = if flags[i][j] { "" } else { " stroke-dasharray=\"4 3\"" };
                writeln!(
                    out,
                    "<line x1=\"{xl:.1}\" y1=\"{:.1}\" x2=\"{xr:.1}\" y2=\"{:.1}\" stroke=\"{color}\" stroke-width=\"{:.2}\" stroke-opacity=\"{:.3}\"{dash}/>",
                    y(i),
                    y(j),
                    0.5 + 4.0 * r,
                    0.15 + 0.85 * r
                )
                .unwrap();
            }
        }
    }
    for (i, label) in a.labels.iter().enumerate() {
        for (x, anchor, dx) in [(xl, "end", -10.0), (xr, "start", 10.0)] {
            writeln!(
                out,
                "<circle cx=\"{x:.1}\" cy=\"{:.1}\" r=\"5\" fill=\"black\"/><text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"{anchor}\">{}</text>",
                y(i),
                x + dx,
                y(i) + 4.0,
                escape(label)
            )
            .unwrap();
        }
    }
    writeln!(out, "<text x=\"10\" y=\"{:.1}\" fill=\"{BLUE}\">consonance</text>", h - 10.0).unwrap();
    writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"{RED}\" text-anchor=\"end\">dissonance</text>", w - 10.0, h - 10.0).unwrap();
    out.push_str("</svg>\n");
    out
}

/// Nodes on a circle, edge width proportional to weight.
pub fn circle_graph(title: &str, g: &WeightedGraph, color: &str) -> String {
    let (w, h) = (520.0, 520.0);
    let (cx, cy, r) = (w / 2.0, h / 2.0 + 10.0, 190.0);
    let n = g.nodes.len().max(1);
    let pos = |k: usize| {
        let t = TAU * k as f64 / n as f64 - TAU / 4.0;
        (cx + r * t.cos(), cy + r * t.sin())
    };
    let max = g.edges.iter().map(|e| e.weight).fold(0.0, f64::max);
    let mut out = open(w, h, title);
    for e in &g.edges {
        let ((x1, y1), (x2, y2)) = (pos(e.a), pos(e.b));
        let width = if max > 0.0 { 0.5 + 7.5 * e.weight / max } else { 1.0 };
        writeln!(
            out,
            "<line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"{color}\" stroke-width=\"{width:.2}\" stroke-opacity=\"0.7\"/>"
        )
        .unwrap();
    }
    for (k, label) in g.nodes.iter().enumerate() {
        let (x, y) = pos(k);
        let (lx, ly) = (cx + (r + 22.0) * (x - cx) / r, cy + (r + 22.0) * (y - cy) / r);
        writeln!(
            out,
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"7\" fill=\"white\" stroke=\"black\"/><text x=\"{lx:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            ly + 4.0,
            escape(label)
        )
        .unwrap();
    }
    if g.edges.is_empty() {
        writeln!(out, "<text x=\"{cx:.1}\" y=\"{cy:.1}\" text-anchor=\"middle\" fill=\"gray\">no pair reaches the threshold</text>").unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Group name, column labels, and `values[row][column]`.
pub type HeatGroup<'a> = (&'a str, Vec<String>, Vec<Vec<f64>>);

/// Grey-scale table, dark = low, bright = high; one scale per column group.
pub fn heatmap(title: &str, row_labels: &[String], groups: &[HeatGroup<'_>]) -> String {
    let cell = 28.0;
    let cols: usize = groups.iter().map(|g| g.1.len()).sum();
    let (w, h) = (130.0 + cell * cols as f64 + 20.0 * groups.len() as f64, 110.0 + cell * row_labels.len() as f64);
    let mut out = open(w, h, title);
    for (r, label) in row_labels.iter().enumerate() {
        writeln!(out, "<text x=\"120\" y=\"{:.1}\" text-anchor=\"end\">{}</text>", 100.0 + cell * (r as f64 + 0.6), escape(label)).unwrap();
    }
    let mut x = 130.0;
    for (name, col_labels, values) in groups {
        let max = values.iter().flatten().copied().fold(0.0, f64::max);
        writeln!(out, "<text x=\"{:.1}\" y=\"52\" text-anchor=\"middle\">{}</text>", x + cell * col_labels.len() as f64 / 2.0, escape(name)).unwrap();
        for (c, cl) in col_labels.iter().enumerate() {
            writeln!(
                out,
                "<text x=\"{0:.1}\" y=\"90\" text-anchor=\"start\" transform=\"rotate(-60 {0:.1} 90)\">{1}</text>",
                x + cell * (c as f64 + 0.5),
                escape(cl)
            )
            .unwrap();
            for (r, row) in values.iter().enumerate() {
                let v = row[c];
                let level = if max > 0.0 { (255.0 * v / max).round() as u8 } else { 0 };
                writeln!(
                    out,
                    "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{cell:.0}\" height=\"{cell:.0}\" fill=\"rgb({level},{level},{level})\"><title>{v:.6}</title></rect>",
                    x + cell * c as f64,
                    100.0 + cell * r as f64
                )
                .unwrap();
            }
        }
        x += cell * col_labels.len() as f64 + 20.0;
    }
    out.push_str("</svg>\n");
    out
}
