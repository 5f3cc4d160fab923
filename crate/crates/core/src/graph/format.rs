use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::{Edge, GraphError, Length, MetricGraph};
use crate::json::to_canonical_string;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<EdgeRecord>,
    #[serde(default)]
    dirichlet: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    id: String,
    from: String,
    to: String,
    length: Option<f64>,
    length_pi: Option<f64>,
}

/// Parses and validates a graph file.
///
/// ```text
/// {"vertices": ["a","b"],
///  "edges": [{"id":"e1","from":"a","to":"b","length_pi": 1.0}],
///  "dirichlet": ["a"]}
/// ```
pub fn parse_graph(text: &str) -> Result<MetricGraph, GraphError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let edges = file
        .edges
        .into_iter()
        .map(|r| {
            let length = match (r.length, r.length_pi) {
                (Some(x), None) => Length::Absolute(x),
                (None, Some(c)) => Length::PiMultiple(c),
                _ => return Err(GraphError::LengthField { edge: r.id }),
            };
            Ok(Edge::new(r.id, r.from, r.to, length))
        })
        .collect::<Result<Vec<_>, _>>()?;
    MetricGraph::new(file.vertices, edges, file.dirichlet)
}

pub fn graph_to_value(g: &MetricGraph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| {
            let mut m = Map::new();
            m.insert("id".into(), json!(e.id));
            m.insert("from".into(), json!(e.from));
            m.insert("to".into(), json!(e.to));
            match e.length {
                Length::Absolute(x) => m.insert("length".into(), json!(x)),
                Length::PiMultiple(c) => m.insert("length_pi".into(), json!(c)),
            };
            Value::Object(m)
        })
        .collect();
    json!({
        "vertices": g.vertices(),
        "edges": edges,
        "dirichlet": g.dirichlet().iter().collect::<Vec<_>>(),
    })
}

pub fn serialize_graph(g: &MetricGraph) -> String {
    to_canonical_string(&graph_to_value(g))
}
