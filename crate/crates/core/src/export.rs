//! Text exports: DOT and JSON graphs, CSV score matrices.
//!
//! Every number is printed with exactly six decimals and a period separator,
//! so repeated exports of the same data are byte-identical.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::analysis::{round6, Edge, GraphKind, PairwiseAnalysis, WeightedGraph};
use crate::error::{Error, Result};

/// Widest edge stroke in DOT output; other edges scale linearly with weight.
pub const MAX_PENWIDTH: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

impl std::str::FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(Self::Dot),
            "json" => Ok(Self::Json),
            other => Err(Error::Usage(format!("unknown graph format `{other}` (expected dot|json)"))),
        }
    }
}

/// JSON number literal with exactly six decimals; `null` when not finite.
pub fn fixed6(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.6}") } else { "null".to_string() };
    RawValue::from_string(text).expect("fixed-point float is valid JSON")
}

// Field order is alphabetical so the emitted keys are sorted.
#[derive(Serialize)]
struct JsonGraphOut<'a> {
    edges: Vec<JsonEdgeOut<'a>>,
    kind: &'static str,
    nodes: &'a [String],
}

#[derive(Serialize)]
struct JsonEdgeOut<'a> {
    a: &'a str,
    b: &'a str,
    weight: Box<RawValue>,
}

#[derive(Deserialize)]
struct JsonGraphIn {
    edges: Vec<JsonEdgeIn>,
    kind: GraphKind,
    nodes: Vec<String>,
}

#[derive(Deserialize)]
struct JsonEdgeIn {
    a: String,
    b: String,
    weight: f64,
}

pub fn export_graph(graph: &WeightedGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Json => graph_to_json(graph),
        GraphFormat::Dot => graph_to_dot(graph),
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<WeightedGraph> {
    match format {
        GraphFormat::Json => graph_from_json(text),
        GraphFormat::Dot => graph_from_dot(text),
    }
}

fn graph_to_json(graph: &WeightedGraph) -> String {
    let out = JsonGraphOut {
        edges: graph
            .edges
            .iter()
            .map(|e| JsonEdgeOut { a: &graph.nodes[e.a], b: &graph.nodes[e.b], weight: fixed6(e.weight) })
            .collect(),
        kind: graph.kind.name(),
        nodes: &graph.nodes,
    };
    serde_json::to_string(&out).expect("graph serializes")
}

fn node_index(nodes: &[String], label: &str) -> Result<usize> {
    nodes
        .iter()
        .position(|n| n == label)
        .ok_or_else(|| Error::Parse(format!("edge refers to unknown node `{label}`")))
}

fn graph_from_json(text: &str) -> Result<WeightedGraph> {
    let g: JsonGraphIn = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let edges = g
        .edges
        .iter()
        .map(|e| {
            Ok(Edge { a: node_index(&g.nodes, &e.a)?, b: node_index(&g.nodes, &e.b)?, weight: e.weight })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightedGraph { kind: g.kind, nodes: g.nodes, edges })
}

fn quote(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

fn graph_to_dot(graph: &WeightedGraph) -> String {
    let max = graph.edges.iter().map(|e| e.weight).fold(0.0, f64::max);
    let mut out = format!("graph {} {{\n", graph.kind.name());
    out.push_str("  node [shape=circle];\n");
    for n in &graph.nodes {
        out.push_str(&format!("  {};\n", quote(n)));
    }
    for e in &graph.edges {
        let pen = if max > 0.0 { MAX_PENWIDTH * e.weight / max } else { 0.0 };
        out.push_str(&format!(
            "  {} -- {} [weight=\"{:.6}\", penwidth=\"{:.6}\"];\n",
            quote(&graph.nodes[e.a]),
            quote(&graph.nodes[e.b]),
            e.weight,
            pen
        ));
    }
    out.push_str("}\n");
    out
}

// Reads a leading quoted identifier, returning it and the remainder.
fn take_quoted(s: &str) -> Result<(String, &str)> {
    let s = s.trim_start();
    let rest = s.strip_prefix('"').ok_or_else(|| Error::Parse(format!("expected quoted id in `{s}`")))?;
    let mut label = String::new();
    let mut chars = rest.char_indices();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => {
                if let Some((_, esc)) = chars.next() {
                    label.push(esc);
                }
            }
            '"' => return Ok((label, &rest[i + 1..])),
            c => label.push(c),
        }
    }
    Err(Error::Parse(format!("unterminated quoted id in `{s}`")))
}

fn dot_attribute(attrs: &str, key: &str) -> Option<String> {
    let start = attrs.find(&format!("{key}=\""))? + key.len() + 2;
    let end = attrs[start..].find('"')? + start;
    Some(attrs[start..end].to_string())
}

fn graph_from_dot(text: &str) -> Result<WeightedGraph> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty DOT input".into()))?;
    let kind = header
        .strip_prefix("graph ")
        .and_then(|h| h.strip_suffix('{'))
        .ok_or_else(|| Error::Parse(format!("bad DOT header `{header}`")))?
        .trim()
        .parse::<GraphKind>()?;
    let mut nodes = Vec::new();
    let mut pending = Vec::new();
    for line in lines {
        if line == "}" || line.starts_with("node ") {
            continue;
        }
        let (first, rest) = take_quoted(line)?;
        let rest = rest.trim_start();
        if let Some(after) = rest.strip_prefix("--") {
            let (second, attrs) = take_quoted(after)?;
            let weight = dot_attribute(attrs, "weight")
                .ok_or_else(|| Error::Parse(format!("edge without weight: `{line}`")))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(e.to_string()))?;
            pending.push((first, second, weight));
        } else {
            nodes.push(first);
        }
    }
    let edges = pending
        .into_iter()
        .map(|(a, b, weight)| Ok(Edge { a: node_index(&nodes, &a)?, b: node_index(&nodes, &b)?, weight }))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightedGraph { kind, nodes, edges })
}

/// Consonance block followed by dissonance block; each is a header row
/// `<block>,<labels...>` and one row per label.
pub fn export_matrix_csv(analysis: &PairwiseAnalysis) -> String {
    let mut out = String::new();
    for (name, m) in [("consonance", &analysis.consonance), ("dissonance", &analysis.dissonance)] {
        out.push_str(name);
        for l in &analysis.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (label, row) in analysis.labels.iter().zip(m) {
            out.push_str(label);
            for v in row {
                out.push_str(&format!(",{v:.6}"));
            }
            out.push('\n');
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCsv {
    pub labels: Vec<String>,
    pub consonance: Vec<Vec<f64>>,
    pub dissonance: Vec<Vec<f64>>,
}

impl MatrixCsv {
    /// The same matrices rounded to export precision.
    pub fn from_analysis(a: &PairwiseAnalysis) -> Self {
        let r = |m: &Vec<Vec<f64>>| m.iter().map(|row| row.iter().map(|&v| round6(v)).collect()).collect();
        Self { labels: a.labels.clone(), consonance: r(&a.consonance), dissonance: r(&a.dissonance) }
    }
}

pub fn parse_matrix_csv(text: &str) -> Result<MatrixCsv> {
    let lines: Vec<&str> = text.lines().collect();
    let header: Vec<&str> = lines.first().ok_or_else(|| Error::Parse("empty CSV".into()))?.split(',').collect();
    let labels: Vec<String> = header[1..].iter().map(|s| s.to_string()).collect();
    let n = labels.len();
    if lines.len() != 2 * (n + 1) {
        return Err(Error::Parse(format!("expected {} lines, found {}", 2 * (n + 1), lines.len())));
    }
    let block = |offset: usize, name: &str| -> Result<Vec<Vec<f64>>> {
        let head: Vec<&str> = lines[offset].split(',').collect();
        if head.first() != Some(&name) || head[1..] != header[1..] {
            return Err(Error::Parse(format!("bad `{name}` header")));
        }
        (0..n)
            .map(|i| {
                let fields: Vec<&str> = lines[offset + 1 + i].split(',').collect();
                if fields.len() != n + 1 || fields[0] != labels[i] {
                    return Err(Error::Parse(format!("bad row {i} in `{name}` block")));
                }
                fields[1..]
                    .iter()
                    .map(|f| f.parse::<f64>().map_err(|e| Error::Parse(e.to_string())))
                    .collect()
            })
            .collect()
    };
    Ok(MatrixCsv { consonance: block(0, "consonance")?, dissonance: block(n + 1, "dissonance")?, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ModelConfig;
    use crate::temperament::PITCH_NAMES;

    fn labels() -> Vec<String> {
        PITCH_NAMES.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn empty_graph_json() {
        let g = WeightedGraph { kind: GraphKind::Consonance, nodes: labels(), edges: vec![] };
        assert_eq!(
            export_graph(&g, GraphFormat::Json),
            r#"{"edges":[],"kind":"consonance","nodes":["C","C#","D","D#","E","F","F#","G","G#","A","A#","B","C2"]}"#
        );
    }

    #[test]
    fn one_edge_round_trips() {
        let g = WeightedGraph {
            kind: GraphKind::Dissonance,
            nodes: labels(),
            edges: vec![Edge { a: 0, b: 6, weight: 4.25 }],
        };
        for f in [GraphFormat::Json, GraphFormat::Dot] {
            assert_eq!(parse_graph(&export_graph(&g, f), f).unwrap(), g);
        }
        assert!(export_graph(&g, GraphFormat::Json).contains(r#"{"a":"C","b":"F#","weight":4.250000}"#));
    }

    #[test]
    fn dot_edge_lines() {
        let g = WeightedGraph {
            kind: GraphKind::Consonance,
            nodes: labels(),
            edges: vec![
                Edge { a: 0, b: 7, weight: 6.0 },
                Edge { a: 0, b: 5, weight: 3.0 },
                Edge { a: 5, b: 12, weight: 1.5 },
            ],
        };
        let dot = export_graph(&g, GraphFormat::Dot);
        assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 3);
        assert!(dot.contains(r#""C" -- "G" [weight="6.000000", penwidth="8.000000"];"#));
        assert!(dot.contains(r#""C" -- "F" [weight="3.000000", penwidth="4.000000"];"#));
        assert!(dot.starts_with("graph consonance {\n"));
    }

    #[test]
    fn unknown_format_is_usage_error() {
        assert!(matches!("gml".parse::<GraphFormat>(), Err(Error::Usage(_))));
    }

    #[test]
    fn zero_matrix_csv() {
        let z = vec![vec![0.0; 13]; 13];
        let a = PairwiseAnalysis::from_matrices(labels(), z.clone(), z, &ModelConfig::default());
        let csv = export_matrix_csv(&a);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 28);
        assert!(lines.iter().all(|l| l.split(',').count() == 14));
        for (k, l) in lines.iter().enumerate() {
            if k % 14 != 0 {
                assert!(l.split(',').skip(1).all(|f| f == "0.000000"));
            }
        }
        assert_eq!(parse_matrix_csv(&csv).unwrap(), MatrixCsv::from_analysis(&a));
    }

    #[test]
    fn symmetric_csv_equals_its_transpose() {
        let m: Vec<Vec<f64>> =
            (0..13).map(|i| (0..13).map(|j| ((i * j) as f64).sqrt() + (i + j) as f64 / 7.0).collect()).collect();
        let a = PairwiseAnalysis::from_matrices(labels(), m.clone(), m, &ModelConfig::default());
        let parsed = parse_matrix_csv(&export_matrix_csv(&a)).unwrap();
        let t: Vec<Vec<f64>> = (0..13).map(|i| (0..13).map(|j| parsed.consonance[j][i]).collect()).collect();
        let transposed = PairwiseAnalysis::from_matrices(labels(), t.clone(), t, &ModelConfig::default());
        assert_eq!(export_matrix_csv(&transposed), export_matrix_csv(&a));
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_graph("{", GraphFormat::Json).is_err());
        assert!(parse_graph("digraph x {\n}\n", GraphFormat::Dot).is_err());
        assert!(parse_matrix_csv("consonance,A\nA,1\n").is_err());
    }
}
