use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::PI;

use super::GraphError;

/// Length of an edge.
///
/// Lengths read as multiples of π keep that form so that serialization can
/// write them back as `length_pi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Length {
    Absolute(f64),
    PiMultiple(f64),
}

impl Length {
    pub fn value(self) -> f64 {
        match self {
            Length::Absolute(x) => x,
            Length::PiMultiple(c) => c * PI,
        }
    }

    pub fn scaled(self, rho: f64) -> Length {
        match self {
            Length::Absolute(x) => Length::Absolute(x * rho),
            Length::PiMultiple(c) => Length::PiMultiple(c * rho),
        }
    }

    /// Length of two edges laid end to end.
    pub fn concat(self, other: Length) -> Length {
        match (self, other) {
            (Length::PiMultiple(a), Length::PiMultiple(b)) => Length::PiMultiple(a + b),
            (a, b) => Length::Absolute(a.value() + b.value()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: String,
    pub from: String,
    pub to: String,
    pub length: Length,
}

impl Edge {
    pub fn new(
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        length: Length,
    ) -> Self {
        Edge {
            id: id.into(),
            from: from.into(),
            to: to.into(),
            length,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }

    pub fn len(&self) -> f64 {
        self.length.value()
    }
}

/// A compact metric graph together with its set of Dirichlet pendant vertices.
///
/// Values are validated on construction and never mutated afterwards; every
/// transformation returns a new graph.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    dirichlet: BTreeSet<String>,
}

impl MetricGraph {
    /// Builds a validated, connected graph.
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<Edge>,
        dirichlet: impl IntoIterator<Item = String>,
    ) -> Result<Self, GraphError> {
        let g = Self::new_possibly_disconnected(vertices, edges, dirichlet)?;
        if g.component_count() != 1 {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Same checks as [`MetricGraph::new`] except connectivity. Used for the
    /// disjoint unions that surgery operations pass through.
    pub fn new_possibly_disconnected(
        vertices: Vec<String>,
        edges: Vec<Edge>,
        dirichlet: impl IntoIterator<Item = String>,
    ) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::NoVertices);
        }
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut edge_ids = BTreeSet::new();
        for e in &edges {
            if !edge_ids.insert(e.id.as_str()) {
                return Err(GraphError::DuplicateEdge(e.id.clone()));
            }
            for end in [&e.from, &e.to] {
                if !seen.contains(end.as_str()) {
                    return Err(GraphError::UnknownVertex {
                        edge: e.id.clone(),
                        vertex: end.clone(),
                    });
                }
            }
            let l = e.length.value();
            if !l.is_finite() || l <= 0.0 {
                return Err(GraphError::NonpositiveLength {
                    edge: e.id.clone(),
                    length: l,
                });
            }
        }
        let g = MetricGraph {
            vertices,
            edges,
            dirichlet: dirichlet.into_iter().collect(),
        };
        let degree = g.degrees();
        for d in &g.dirichlet {
            match degree.get(d.as_str()) {
                None => return Err(GraphError::UnknownDirichlet(d.clone())),
                Some(&deg) if deg != 1 => {
                    return Err(GraphError::DirichletNotPendant {
                        vertex: d.clone(),
                        degree: deg,
                    })
                }
                Some(_) => {}
            }
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn dirichlet(&self) -> &BTreeSet<String> {
        &self.dirichlet
    }

    pub fn is_dirichlet(&self, v: &str) -> bool {
        self.dirichlet.contains(v)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.iter().any(|x| x == v)
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(Edge::len).sum()
    }

    /// Vertex degrees; a loop contributes 2 to its vertex.
    pub fn degrees(&self) -> BTreeMap<&str, usize> {
        let mut deg: BTreeMap<&str, usize> =
            self.vertices.iter().map(|v| (v.as_str(), 0)).collect();
        for e in &self.edges {
            *deg.entry(e.from.as_str()).or_default() += 1;
            *deg.entry(e.to.as_str()).or_default() += 1;
        }
        deg
    }

    pub fn degree(&self, v: &str) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.from == v) + usize::from(e.to == v))
            .sum()
    }

    pub(crate) fn vertex_index(&self) -> HashMap<&str, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect()
    }

    /// Connected component label for every vertex, in vertex order.
    pub(crate) fn component_labels(&self) -> Vec<usize> {
        let index = self.vertex_index();
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            let (a, b) = (index[e.from.as_str()], index[e.to.as_str()]);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut label = vec![usize::MAX; self.vertices.len()];
        let mut next = 0;
        for start in 0..self.vertices.len() {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.component_labels()
            .into_iter()
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Number of connected components that carry no Dirichlet vertex; this is
    /// the multiplicity of the eigenvalue zero.
    pub fn neumann_component_count(&self) -> usize {
        let labels = self.component_labels();
        let n = labels.iter().max().map_or(0, |m| m + 1);
        let mut has_dirichlet = vec![false; n];
        for (v, &c) in self.vertices.iter().zip(&labels) {
            if self.dirichlet.contains(v) {
                has_dirichlet[c] = true;
            }
        }
        has_dirichlet.iter().filter(|d| !**d).count()
    }

    /// Copy of the graph with one edge length multiplied by `rho`.
    pub fn with_scaled_edge(&self, edge: &str, rho: f64) -> Result<MetricGraph, GraphError> {
        if self.edge(edge).is_none() {
            return Err(GraphError::UnknownEdge(edge.to_string()));
        }
        if !rho.is_finite() || rho <= 0.0 {
            return Err(GraphError::NonpositiveLength {
                edge: edge.to_string(),
                length: rho,
            });
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            if e.id == edge {
                e.length = e.length.scaled(rho);
            }
        }
        Ok(g)
    }

    /// Copy with every identifier prefixed; used to keep unions disjoint.
    pub(crate) fn prefixed(&self, prefix: &str) -> MetricGraph {
        let p = |s: &str| format!("{prefix}{s}");
        MetricGraph {
            vertices: self.vertices.iter().map(|v| p(v)).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge::new(p(&e.id), p(&e.from), p(&e.to), e.length))
                .collect(),
            dirichlet: self.dirichlet.iter().map(|v| p(v)).collect(),
        }
    }

    pub(crate) fn into_parts(self) -> (Vec<String>, Vec<Edge>, BTreeSet<String>) {
        (self.vertices, self.edges, self.dirichlet)
    }
}

/// Invariants derived from a graph that the eigenvalue estimates depend on.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphProfile {
    pub total_length: f64,
    pub n_dirichlet: usize,
    pub n_neumann: usize,
    pub betti: usize,
    pub degree: BTreeMap<String, usize>,
    pub dirichlet_pendants: BTreeSet<String>,
    pub neumann_pendants: BTreeSet<String>,
}

/// Derived invariants. For a disconnected intermediate the first Betti
/// number uses the component count, which coincides with |E| − |V| + 1 on
/// connected graphs.
pub fn graph_profile(g: &MetricGraph) -> GraphProfile {
    let degree: BTreeMap<String, usize> = g
        .degrees()
        .into_iter()
        .map(|(v, d)| (v.to_string(), d))
        .collect();
    let mut dirichlet_pendants = BTreeSet::new();
    let mut neumann_pendants = BTreeSet::new();
    for (v, &d) in &degree {
        if d == 1 {
            if g.is_dirichlet(v) {
                dirichlet_pendants.insert(v.clone());
            } else {
                neumann_pendants.insert(v.clone());
            }
        }
    }
    let betti = g.edges().len() + g.component_count() - g.vertices().len();
    GraphProfile {
        total_length: g.total_length(),
        n_dirichlet: dirichlet_pendants.len(),
        n_neumann: neumann_pendants.len(),
        betti,
        degree,
        dirichlet_pendants,
        neumann_pendants,
    }
}
