//! Metric graphs: data model, file format and topological invariants.

mod format;
mod model;
mod topology;

use thiserror::Error;

pub use format::{graph_to_value, parse_graph, serialize_graph};
pub use model::{graph_profile, Edge, GraphProfile, Length, MetricGraph};
pub use topology::{
    bridges, contract_cycles, disjoint_union, is_interval, is_lasso_tree, is_loop_graph,
    suppress_degree_two, ContractedTree,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("edge `{edge}` must carry exactly one of `length` and `length_pi`")]
    LengthField { edge: String },
    #[error("unknown vertex reference `{vertex}` in edge `{edge}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("unknown dirichlet vertex `{0}`")]
    UnknownDirichlet(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("nonpositive length {length} on edge `{edge}`")]
    NonpositiveLength { edge: String, length: f64 },
    #[error("dirichlet vertex not pendant: `{vertex}` has degree {degree}")]
    DirichletNotPendant { vertex: String, degree: usize },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("graph has no vertices")]
    NoVertices,
    #[error("disconnected graph")]
    Disconnected,
    #[error("empty union")]
    EmptyUnion,
}
