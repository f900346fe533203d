//! JSON and DOT encodings for graphs, colorings and results.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::bounds::Target;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexLabel};
use crate::rainbow::VertexColoring;
use crate::solver::{SolveResult, SolveStatus};

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<[usize; 2]>,
}

/// `{"vertices":[{"id","label"}],"edges":[[id,id],...]}`, edges in index order.
pub fn graph_to_json(g: &Graph) -> String {
    let doc = GraphJson {
        vertices: g.vertices().map(|v| VertexJson { id: v, label: g.label(v).to_string() }).collect(),
        edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes")
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let doc: GraphJson = serde_json::from_str(text)?;
    let n = doc.vertices.len();
    let mut labels: Vec<Option<VertexLabel>> = vec![None; n];
    for v in &doc.vertices {
        let slot = labels.get_mut(v.id).ok_or_else(|| Error::Parse(format!("vertex id {} outside 0..{n}", v.id)))?;
        if slot.is_some() {
            return Err(Error::Parse(format!("vertex id {} listed twice", v.id)));
        }
        *slot = Some(v.label.parse()?);
    }
    let labels = labels.into_iter().map(|l| l.expect("ids are a permutation")).collect();
    Graph::new(labels, doc.edges.into_iter().map(|[a, b]| (a, b)).collect())
}

/// `{"k":k,"colors":{"<id>":color,...}}` with ids in increasing order.
pub fn coloring_to_value(k: u32, colors: &[u32]) -> Value {
    let map: Map<String, Value> = colors.iter().enumerate().map(|(v, &c)| (v.to_string(), json!(c))).collect();
    json!({ "k": k, "colors": map })
}

pub fn coloring_to_json(c: &VertexColoring) -> String {
    serde_json::to_string_pretty(&coloring_to_value(c.k(), c.colors())).expect("coloring serializes")
}

#[derive(Deserialize)]
struct ColoringJson {
    k: u32,
    colors: std::collections::BTreeMap<String, u32>,
}

/// Parsed coloring plus whether unused palette colors had to be dropped.
pub struct ParsedColoring {
    pub coloring: VertexColoring,
    pub canonicalized: bool,
}

/// Reads a coloring for `g`. Every vertex id must be present exactly once
/// and colors must lie in `1..=k`. A coloring that skips palette colors is
/// relabelled to its used-color count.
pub fn coloring_from_json(text: &str, g: &Graph) -> Result<ParsedColoring> {
    let doc: ColoringJson = serde_json::from_str(text)?;
    let n = g.order();
    let mut colors = vec![0u32; n];
    for (key, &c) in &doc.colors {
        let v: usize = key.parse().map_err(|_| Error::Parse(format!("bad vertex id {key:?}")))?;
        if v >= n {
            return Err(Error::InvalidColoring(format!("vertex id {v} not in graph (0..{n})")));
        }
        if c == 0 || c > doc.k {
            return Err(Error::InvalidColoring(format!("vertex {v} has color {c} outside 1..={}", doc.k)));
        }
        colors[v] = c;
    }
    if let Some(v) = colors.iter().position(|&c| c == 0) {
        return Err(Error::InvalidColoring(format!("vertex {v} has no color")));
    }
    match VertexColoring::new(doc.k, colors.clone()) {
        Ok(coloring) => Ok(ParsedColoring { coloring, canonicalized: false }),
        Err(_) => Ok(ParsedColoring { coloring: VertexColoring::canonicalized(&colors), canonicalized: true }),
    }
}

/// Undirected DOT with labels as node names; `color` attributes come from
/// the 12-color Brewer "set3" scheme when a coloring is supplied.
pub fn graph_to_dot(g: &Graph, coloring: Option<&VertexColoring>) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        match coloring {
            Some(c) => {
                let col = c.color(v);
                out.push_str(&format!(
                    "  \"{}\" [colorscheme=set312, style=filled, fillcolor={}, xlabel=\"{}\"];\n",
                    g.label(v),
                    (col - 1) % 12 + 1,
                    col
                ));
            }
            None => out.push_str(&format!("  \"{}\";\n", g.label(v))),
        }
    }
    for &(a, b) in g.edges() {
        out.push_str(&format!("  \"{}\" -- \"{}\";\n", g.label(a), g.label(b)));
    }
    out.push_str("}\n");
    out
}

pub fn status_str(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Proved => "proved",
        SolveStatus::UpperWitnessOnly => "upper-witness-only",
        SolveStatus::BudgetExhausted => "budget-exhausted",
    }
}

pub fn solve_result_to_json(r: &SolveResult) -> String {
    let v = json!({
        "target": r.target.to_string(),
        "value": r.value,
        "status": status_str(r.status),
        "lower": r.lower,
        "witness": coloring_to_value(r.witness.k(), r.witness.colors()),
        "nodes": r.nodes_explored,
        "elapsed_ms": r.elapsed.as_millis() as u64,
        "lower_bound_rule": r.lower_bound_rule,
    });
    serde_json::to_string_pretty(&v).expect("result serializes")
}

pub fn predicted_to_json(p: &crate::constructions::PredictedValue) -> String {
    let value = match p.value {
        crate::constructions::Predicted::Exact(v) => json!(v),
        crate::constructions::Predicted::Bounds { lower, upper } => json!({ "lower": lower, "upper": upper }),
    };
    let target = match p.target {
        Target::Rvc => "rvc",
        Target::Rvcl => "rvcl",
    };
    serde_json::to_string_pretty(&json!({ "target": target, "value": value, "branch": p.branch })).unwrap()
}
