use std::collections::BTreeMap;

use super::counting::EigenCounter;
use super::secular::assemble_secular_system;
use super::{SolverError, SolverOptions};
use crate::graph::MetricGraph;

/// Orthonormal basis of one eigenspace, as per-edge coefficients `(a_e, b_e)`
/// of `a_e cos(kx) + b_e sin(kx)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenspaceBasis {
    pub lambda: f64,
    /// Edge ids, in the order coefficients are stored.
    pub edges: Vec<String>,
    pub vectors: Vec<Vec<(f64, f64)>>,
    /// Largest `√(a_e² + b_e²)` over the basis, per edge.
    pub per_edge_support: BTreeMap<String, f64>,
}

impl EigenspaceBasis {
    pub fn from_vectors(lambda: f64, edges: Vec<String>, vectors: Vec<Vec<(f64, f64)>>) -> Self {
        let per_edge_support = edges
            .iter()
            .enumerate()
            .map(|(i, id)| {
                let s = vectors
                    .iter()
                    .map(|v| v[i].0.hypot(v[i].1))
                    .fold(0.0, f64::max);
                (id.clone(), s)
            })
            .collect();
        EigenspaceBasis {
            lambda,
            edges,
            vectors,
            per_edge_support,
        }
    }

    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }
}

pub fn eigenspace_basis(
    g: &MetricGraph,
    lambda: f64,
    opts: &SolverOptions,
) -> Result<EigenspaceBasis, SolverError> {
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(SolverError::NotAnEigenvalue(lambda));
    }
    let edges: Vec<String> = g.edges().iter().map(|e| e.id.clone()).collect();
    let counter = EigenCounter::new(g)?;
    let k = lambda.sqrt();
    if k <= counter.base_k() {
        if lambda != 0.0 {
            return Err(SolverError::NotAnEigenvalue(lambda));
        }
        return zero_mode_basis(g, edges);
    }
    let vectors: Vec<Vec<(f64, f64)>> = assemble_secular_system(g, k)?
        .null_vectors(opts.rank_tol)
        .into_iter()
        .map(|v| v.chunks(2).map(|c| (c[0], c[1])).collect())
        .collect();
    if vectors.is_empty() {
        return Err(SolverError::NotAnEigenvalue(lambda));
    }
    Ok(EigenspaceBasis::from_vectors(lambda, edges, vectors))
}

/// Constants on each component free of Dirichlet vertices.
fn zero_mode_basis(g: &MetricGraph, edges: Vec<String>) -> Result<EigenspaceBasis, SolverError> {
    let labels = g.component_labels();
    let index = g.vertex_index();
    let components = labels.iter().max().map_or(0, |m| m + 1);
    let mut vectors = Vec::new();
    for c in 0..components {
        let dirichlet = g
            .vertices()
            .iter()
            .zip(&labels)
            .any(|(v, &l)| l == c && g.is_dirichlet(v));
        if dirichlet {
            continue;
        }
        let on: Vec<bool> = g
            .edges()
            .iter()
            .map(|e| labels[index[e.from.as_str()]] == c)
            .collect();
        let count = on.iter().filter(|x| **x).count();
        if count == 0 {
            continue;
        }
        let a = 1.0 / (count as f64).sqrt();
        vectors.push(
            on.iter()
                .map(|&x| if x { (a, 0.0) } else { (0.0, 0.0) })
                .collect(),
        );
    }
    if vectors.is_empty() {
        return Err(SolverError::NotAnEigenvalue(0.0));
    }
    Ok(EigenspaceBasis::from_vectors(0.0, edges, vectors))
}

/// Per edge: whether some basis function is not identically zero on it.
pub fn edge_support_report(basis: &EigenspaceBasis, tol: f64) -> BTreeMap<String, bool> {
    basis
        .per_edge_support
        .iter()
        .map(|(e, &s)| (e.clone(), s > tol))
        .collect()
}
