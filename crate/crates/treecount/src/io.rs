//! Reading and writing graphs and constraint sets.
//!
//! Two graph formats are supported and sniffed automatically: a line
//! oriented text format and a JSON object.
//!
//! Text:
//! ```text
//! # comment
//! v a
//! v b
//! e a b       # positional label e1
//! e a b ab2   # explicit label
//! ```
//!
//! JSON: `{"vertices": ["a", "b"], "edges": [["a", "b"], ["a", "b", "ab2"]]}`.
//!
//! Constraint sets come as a JSON object naming vertex groups and edge
//! groups by label, e.g. `{"V0": ["a"], "cliques": [["b", "c"]], "N": ["e1"]}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeSet, GraphError, MultiGraph, VertexSet};

#[derive(Error, Debug)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("bad JSON: {0}")]
    Json(String),
    #[error("unknown vertex name {0}")]
    UnknownVertex(String),
    #[error("unknown edge label {0}")]
    UnknownEdgeLabel(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parse a graph in either format, deciding by the first non-space byte.
pub fn parse_graph(text: &str) -> Result<MultiGraph, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_graph_text(text)
    }
}

pub fn parse_graph_text(text: &str) -> Result<MultiGraph, ParseError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, Option<String>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut words = body.split_whitespace();
        let kind = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        match kind {
            "v" => {
                if rest.len() != 1 {
                    return Err(ParseError::Syntax {
                        line,
                        msg: format!("expected `v <name>`, got `{body}`"),
                    });
                }
                vertices.push(rest[0].to_string());
            }
            "e" => {
                if rest.len() != 2 && rest.len() != 3 {
                    return Err(ParseError::Syntax {
                        line,
                        msg: format!("expected `e <a> <b> [label]`, got `{body}`"),
                    });
                }
                edges.push((
                    rest[0].to_string(),
                    rest[1].to_string(),
                    rest.get(2).map(|s| s.to_string()),
                ));
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("unknown directive `{other}`"),
                });
            }
        }
    }
    let vrefs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let erefs: Vec<(&str, &str, Option<&str>)> = edges
        .iter()
        .map(|(a, b, l)| (a.as_str(), b.as_str(), l.as_deref()))
        .collect();
    Ok(MultiGraph::build_labeled(&vrefs, &erefs)?)
}

#[derive(Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<Vec<String>>,
}

pub fn parse_graph_json(text: &str) -> Result<MultiGraph, ParseError> {
    let raw: GraphJson = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let mut edges: Vec<(&str, &str, Option<&str>)> = Vec::new();
    for (i, e) in raw.edges.iter().enumerate() {
        match e.len() {
            2 => edges.push((&e[0], &e[1], None)),
            3 => edges.push((&e[0], &e[1], Some(&e[2]))),
            n => {
                return Err(ParseError::Json(format!(
                    "edge {i} has {n} fields, expected 2 or 3"
                )));
            }
        }
    }
    let vrefs: Vec<&str> = raw.vertices.iter().map(String::as_str).collect();
    Ok(MultiGraph::build_labeled(&vrefs, &edges)?)
}

/// Render a graph in the text format. Output parses back to an isomorphic
/// graph with the same names and labels.
pub fn write_graph_text(g: &MultiGraph) -> String {
    let mut out = String::new();
    for &v in g.vertices() {
        out.push_str(&format!("v {}\n", g.name(v).unwrap()));
    }
    for e in g.edges() {
        out.push_str(&format!(
            "e {} {} {}\n",
            g.name(e.a).unwrap(),
            g.name(e.b).unwrap(),
            e.label()
        ));
    }
    out
}

pub fn write_graph_json(g: &MultiGraph) -> serde_json::Value {
    let vertices: Vec<&str> = g.vertices().iter().map(|&v| g.name(v).unwrap()).collect();
    let edges: Vec<Vec<&str>> = g
        .edges()
        .iter()
        .map(|e| vec![g.name(e.a).unwrap(), g.name(e.b).unwrap(), e.label()])
        .collect();
    serde_json::json!({ "vertices": vertices, "edges": edges })
}

/// Constraint sets referencing a graph by vertex name and edge label.
/// Every field is optional; each formula documents which ones it reads.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields, default)]
pub struct SetsFile {
    #[serde(rename = "V0", skip_serializing_if = "Option::is_none")]
    pub v0: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cliques: Option<Vec<Vec<String>>>,
    #[serde(rename = "U", skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<String>>,
    #[serde(rename = "S1", skip_serializing_if = "Option::is_none")]
    pub s1: Option<Vec<String>>,
    #[serde(rename = "S2", skip_serializing_if = "Option::is_none")]
    pub s2: Option<Vec<String>>,
    /// Single vertex, for the pendant clique formula.
    #[serde(rename = "w", skip_serializing_if = "Option::is_none")]
    pub w_vertex: Option<String>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<String>>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<String>>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<String>>,
    #[serde(rename = "W", skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<String>>,
    /// Edge-set partition, for the edge clique decomposition formula.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<Vec<String>>>,
}

pub fn parse_sets(text: &str) -> Result<SetsFile, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))
}

/// Resolve vertex names against a graph.
pub fn resolve_vertices(g: &MultiGraph, names: &[String]) -> Result<VertexSet, ParseError> {
    let mut out = VertexSet::new();
    for n in names {
        let v = g
            .vertex_by_name(n)
            .ok_or_else(|| ParseError::UnknownVertex(n.clone()))?;
        out.insert(v);
    }
    Ok(out)
}

/// Resolve edge labels against a graph.
pub fn resolve_edges(g: &MultiGraph, labels: &[String]) -> Result<EdgeSet, ParseError> {
    let mut out = EdgeSet::new();
    for l in labels {
        let e = g
            .edge_by_label(l)
            .ok_or_else(|| ParseError::UnknownEdgeLabel(l.clone()))?;
        out.insert(e);
    }
    Ok(out)
}

/// Edge labels for an id set, for reports.
pub fn edge_labels(g: &MultiGraph, edges: &EdgeSet) -> Vec<String> {
    edges
        .iter()
        .map(|&e| g.edge(e).unwrap().label().to_string())
        .collect()
}

/// Vertex names for an id set, for reports.
pub fn vertex_names(g: &MultiGraph, vs: &VertexSet) -> Vec<String> {
    vs.iter().map(|&v| g.name(v).unwrap().to_string()).collect()
}

/// Names of a set of names... deduplicated and sorted, used when echoing
/// constraint files back out.
pub fn sorted_unique(names: &[String]) -> Vec<String> {
    let set: BTreeSet<&String> = names.iter().collect();
    set.into_iter().cloned().collect()
}
