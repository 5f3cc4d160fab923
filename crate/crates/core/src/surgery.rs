//! Two graph operations that carry a known eigenvalue to a predictable index
//! and multiplicity, and the lasso-tree constructor built from them.
//!
//! * Joining `p ≥ 2` graphs at one Dirichlet vertex each, all sharing the
//!   eigenvalue `λ` at first index `n_i` with multiplicity `m_i`, gives a graph
//!   with `λ` at `n = 2 − p + Σ n_i` and multiplicity `Σ m_i − 1`.
//! * Attaching a loop of length `2hπ/√λ` at a Neumann pendant moves the first
//!   index from `n` to `n + 2h − 1` and raises the multiplicity by one.

use std::f64::consts::PI;

use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{
    disjoint_union, graph_profile, graph_to_value, Edge, GraphError, Length, MetricGraph,
};
use crate::solver::{spectrum_to_index, SolverError, SolverOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurgeryError {
    #[error("joining needs at least two graphs, got {0}")]
    TooFewItems(usize),
    #[error("vertex {0} is not a Dirichlet vertex")]
    NotDirichlet(String),
    #[error("vertex {0} is not a Neumann pendant")]
    NotNeumannPendant(String),
    #[error("eigenvalue must be positive, got {0}")]
    NonpositiveLambda(f64),
    #[error("joined graphs disagree on the eigenvalue: {0} vs {1}")]
    LambdaMismatch(f64, f64),
    #[error("{0} must be at least 1")]
    ZeroParameter(&'static str),
    #[error("N + D + B must be at least 2, got {0}")]
    TooFewPieces(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Pendant counts, Betti number and total length expected of a surgery output.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictedProfile {
    pub n_dirichlet: usize,
    pub n_neumann: usize,
    pub betti: usize,
    pub total_length: f64,
}

impl PredictedProfile {
    pub fn of(g: &MetricGraph) -> Self {
        let p = graph_profile(g);
        PredictedProfile {
            n_dirichlet: p.n_dirichlet,
            n_neumann: p.n_neumann,
            betti: p.betti,
            total_length: p.total_length,
        }
    }

    pub fn max_mult_upper(&self) -> usize {
        (self.n_dirichlet + self.n_neumann + 2 * self.betti).saturating_sub(1)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "n_dirichlet": self.n_dirichlet,
            "n_neumann": self.n_neumann,
            "betti": self.betti,
            "total_length": self.total_length,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurgeryPrediction {
    pub lambda: f64,
    pub predicted_first_index: usize,
    pub predicted_multiplicity: usize,
    pub predicted_profile: PredictedProfile,
}

impl SurgeryPrediction {
    pub fn to_value(&self) -> Value {
        json!({
            "lambda": self.lambda,
            "first_index": self.predicted_first_index,
            "multiplicity": self.predicted_multiplicity,
            "profile": self.predicted_profile.to_value(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurgeryResult {
    pub graph: MetricGraph,
    pub prediction: SurgeryPrediction,
    /// First index given by the formula as printed in the literature, when it
    /// can differ from the composed prediction.
    pub paper_formula_first_index: i64,
}

impl SurgeryResult {
    pub fn to_value(&self) -> Value {
        json!({
            "graph": graph_to_value(&self.graph),
            "prediction": self.prediction.to_value(),
            "paper_formula_first_index": self.paper_formula_first_index,
        })
    }
}

/// One input to [`join_at_dirichlet`]: `lambda` is `λ_{n}(g) = … = λ_{n+m−1}(g)`.
#[derive(Clone, Debug)]
pub struct JoinItem {
    pub graph: MetricGraph,
    pub vertex: String,
    pub lambda: f64,
    pub n: usize,
    pub m: usize,
}

/// Glues the chosen Dirichlet vertex of every item into a single vertex with
/// standard conditions. The merged vertex is named by joining the (prefixed)
/// source ids with `+`; other ids get the `g{i}.` prefix of
/// [`disjoint_union`].
pub fn join_at_dirichlet(items: &[JoinItem]) -> Result<SurgeryResult, SurgeryError> {
    let p = items.len();
    if p < 2 {
        return Err(SurgeryError::TooFewItems(p));
    }
    let lambda = items[0].lambda;
    for it in items {
        if !it.graph.is_dirichlet(&it.vertex) {
            return Err(SurgeryError::NotDirichlet(it.vertex.clone()));
        }
        if it.n == 0 {
            return Err(SurgeryError::ZeroParameter("eigenvalue index"));
        }
        if it.m == 0 {
            return Err(SurgeryError::ZeroParameter("multiplicity"));
        }
        if (it.lambda - lambda).abs() > 1e-9 * lambda.abs().max(1.0) {
            return Err(SurgeryError::LambdaMismatch(lambda, it.lambda));
        }
    }

    let graphs: Vec<MetricGraph> = items.iter().map(|it| it.graph.clone()).collect();
    let union = disjoint_union(&graphs)?;
    let chosen: Vec<String> = items
        .iter()
        .enumerate()
        .map(|(i, it)| format!("g{i}.{}", it.vertex))
        .collect();
    let merged = chosen.join("+");
    let rename = |v: &str| {
        if chosen.iter().any(|c| c == v) {
            merged.clone()
        } else {
            v.to_string()
        }
    };

    let mut vertices: Vec<String> = Vec::new();
    for v in union.vertices() {
        let r = rename(v);
        if !vertices.contains(&r) {
            vertices.push(r);
        }
    }
    let edges: Vec<Edge> = union
        .edges()
        .iter()
        .map(|e| Edge::new(e.id.clone(), rename(&e.from), rename(&e.to), e.length))
        .collect();
    let dirichlet: Vec<String> = union
        .dirichlet()
        .iter()
        .filter(|v| !chosen.contains(v))
        .cloned()
        .collect();
    let graph = MetricGraph::new(vertices, edges, dirichlet)?;

    let profiles: Vec<PredictedProfile> = items
        .iter()
        .map(|it| PredictedProfile::of(&it.graph))
        .collect();
    let predicted_profile = PredictedProfile {
        n_dirichlet: profiles.iter().map(|q| q.n_dirichlet).sum::<usize>() - p,
        n_neumann: profiles.iter().map(|q| q.n_neumann).sum(),
        betti: profiles.iter().map(|q| q.betti).sum(),
        total_length: profiles.iter().map(|q| q.total_length).sum(),
    };
    let first = 2 + items.iter().map(|it| it.n).sum::<usize>() - p;
    Ok(SurgeryResult {
        graph,
        prediction: SurgeryPrediction {
            lambda,
            predicted_first_index: first,
            predicted_multiplicity: items.iter().map(|it| it.m).sum::<usize>() - 1,
            predicted_profile,
        },
        paper_formula_first_index: first as i64,
    })
}

/// Attaches a loop of length `2hπ/√λ` at the Neumann pendant `v`, where
/// `λ = λ_n(g) = … = λ_{n+m−1}(g)` and `h` is the loop harmonic.
pub fn attach_loop(
    g: &MetricGraph,
    v: &str,
    lambda: f64,
    harmonic: usize,
    n: usize,
    m: usize,
) -> Result<SurgeryResult, SurgeryError> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(SurgeryError::NonpositiveLambda(lambda));
    }
    if harmonic == 0 {
        return Err(SurgeryError::ZeroParameter("harmonic"));
    }
    if n == 0 {
        return Err(SurgeryError::ZeroParameter("eigenvalue index"));
    }
    if m == 0 {
        return Err(SurgeryError::ZeroParameter("multiplicity"));
    }
    if !g.has_vertex(v) || g.is_dirichlet(v) || g.degree(v) != 1 {
        return Err(SurgeryError::NotNeumannPendant(v.to_string()));
    }
    let length = Length::PiMultiple(2.0 * harmonic as f64 / lambda.sqrt());
    let mut edges = g.edges().to_vec();
    edges.push(Edge::new(format!("{v}.loop"), v, v, length));
    let graph = MetricGraph::new(g.vertices().to_vec(), edges, g.dirichlet().iter().cloned())?;

    let before = PredictedProfile::of(g);
    let predicted_profile = PredictedProfile {
        n_dirichlet: before.n_dirichlet,
        n_neumann: before.n_neumann - 1,
        betti: before.betti + 1,
        total_length: before.total_length + length.value(),
    };
    let first = n + 2 * harmonic - 1;
    Ok(SurgeryResult {
        graph,
        prediction: SurgeryPrediction {
            lambda,
            predicted_first_index: first,
            predicted_multiplicity: m + 1,
            predicted_profile,
        },
        paper_formula_first_index: first as i64,
    })
}

/// One term `λ = (2j − 1)²` of the sharp sequence of a constructed lasso tree.
#[derive(Clone, Debug, PartialEq)]
pub struct SharpTerm {
    pub j: usize,
    pub lambda: f64,
    /// Index obtained by composing the join and attach formulas.
    pub first_index: usize,
    pub multiplicity: usize,
    /// `2 − (N + β) + (N + β + 2D) j`, the printed index before loops.
    pub paper_n_j: i64,
    /// `2 − (N + 4β) + (N + 4β + 2D) j`, the printed final index.
    pub paper_first_index: i64,
    /// `(2j + 1)²`, the printed eigenvalue.
    pub paper_lambda: f64,
}

impl SharpTerm {
    pub fn to_value(&self) -> Value {
        json!({
            "j": self.j,
            "lambda": self.lambda,
            "first_index": self.first_index,
            "multiplicity": self.multiplicity,
            "paper_n_j": self.paper_n_j,
            "paper_formula_first_index": self.paper_first_index,
            "paper_lambda": self.paper_lambda,
        })
    }
}

fn check_counts(n: usize, d: usize, b: usize) -> Result<(), SurgeryError> {
    if n + d + b < 2 {
        return Err(SurgeryError::TooFewPieces(n + d + b));
    }
    Ok(())
}

/// The `j`-th sharp eigenvalue of the lasso tree built by
/// [`construct_lasso_tree`] with `N` Neumann pendants, `D` Dirichlet
/// pendants and `B` loops.
pub fn predicted_sharp_sequence(
    n: usize,
    d: usize,
    b: usize,
    j: usize,
) -> Result<SharpTerm, SurgeryError> {
    check_counts(n, d, b)?;
    if j == 0 {
        return Err(SurgeryError::ZeroParameter("j"));
    }
    let (ni, di, bi, ji) = (n as i64, d as i64, b as i64, j as i64);
    // The ND pieces carry (2j−1)² at index j, the DD pieces at 2j − 1; each
    // loop of length 2π carries it on harmonic 2j − 1.
    let joined = 2 - (ni + bi) - 2 * di + (ni + bi + 2 * di) * ji;
    let first = joined + bi * (4 * ji - 3);
    let odd = (2 * j - 1) as f64;
    Ok(SharpTerm {
        j,
        lambda: odd * odd,
        first_index: first as usize,
        multiplicity: n + d + 2 * b - 1,
        paper_n_j: 2 - (ni + bi) + (ni + bi + 2 * di) * ji,
        paper_first_index: 2 - (ni + 4 * bi) + (ni + 4 * bi + 2 * di) * ji,
        paper_lambda: ((2 * j + 1) as f64).powi(2),
    })
}

/// A lasso tree with prescribed pendant and loop counts, all of whose
/// eigenvalues `(2j − 1)²` are sharp.
#[derive(Clone, Debug, PartialEq)]
pub struct LassoConstruction {
    pub graph: MetricGraph,
    pub n_neumann: usize,
    pub n_dirichlet: usize,
    pub betti: usize,
}

impl LassoConstruction {
    pub fn term(&self, j: usize) -> Result<SharpTerm, SurgeryError> {
        predicted_sharp_sequence(self.n_neumann, self.n_dirichlet, self.betti, j)
    }

    pub fn to_value(&self, terms: usize) -> Result<Value, SurgeryError> {
        let seq = (1..=terms)
            .map(|j| self.term(j).map(|t| t.to_value()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(json!({
            "graph": graph_to_value(&self.graph),
            "profile": {
                "n_neumann": self.n_neumann,
                "n_dirichlet": self.n_dirichlet,
                "betti": self.betti,
                "total_length": self.graph.total_length(),
            },
            "sequence": seq,
        }))
    }
}

fn nd_interval() -> MetricGraph {
    MetricGraph::new(
        vec!["d".into(), "n".into()],
        vec![Edge::new("e", "d", "n", Length::PiMultiple(0.5))],
        ["d".to_string()],
    )
    .expect("valid interval")
}

fn dd_interval() -> MetricGraph {
    MetricGraph::new(
        vec!["d".into(), "t".into()],
        vec![Edge::new("e", "d", "t", Length::PiMultiple(1.0))],
        ["d".to_string(), "t".to_string()],
    )
    .expect("valid interval")
}

/// Joins `N + B` ND intervals of length π/2 and `D` DD intervals of length π
/// at one Dirichlet end each, then attaches a loop of length 2π at `B` of the
/// Neumann ends. The joins and attachments use λ = 1.
pub fn construct_lasso_tree(
    n: usize,
    d: usize,
    b: usize,
) -> Result<LassoConstruction, SurgeryError> {
    check_counts(n, d, b)?;
    let mut items = Vec::with_capacity(n + d + b);
    for _ in 0..n + b {
        items.push(JoinItem {
            graph: nd_interval(),
            vertex: "d".into(),
            lambda: 1.0,
            n: 1,
            m: 1,
        });
    }
    for _ in 0..d {
        items.push(JoinItem {
            graph: dd_interval(),
            vertex: "d".into(),
            lambda: 1.0,
            n: 1,
            m: 1,
        });
    }
    let mut current = join_at_dirichlet(&items)?;
    for i in 0..b {
        let v = format!("g{i}.n");
        let p = &current.prediction;
        current = attach_loop(
            &current.graph,
            &v,
            1.0,
            1,
            p.predicted_first_index,
            p.predicted_multiplicity,
        )?;
    }
    Ok(LassoConstruction {
        graph: current.graph,
        n_neumann: n,
        n_dirichlet: d,
        betti: b,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionCheck {
    pub observed_lambda: f64,
    pub observed_first_index: usize,
    pub observed_multiplicity: usize,
    pub ok: bool,
}

/// Computes the spectrum of `g` far enough to see the predicted block and
/// compares index, multiplicity and eigenvalue (relative tolerance `tol`).
pub fn verify_prediction(
    g: &MetricGraph,
    pred: &SurgeryPrediction,
    tol: f64,
    opts: &SolverOptions,
) -> Result<PredictionCheck, SolverError> {
    let top = pred.predicted_first_index + pred.predicted_multiplicity;
    let s = spectrum_to_index(g, top, opts)?;
    let e = s
        .entries
        .iter()
        .min_by(|a, b| {
            (a.lambda - pred.lambda)
                .abs()
                .total_cmp(&(b.lambda - pred.lambda).abs())
        })
        .ok_or(SolverError::IndexOutOfRange {
            n: top,
            available: 0,
        })?;
    let ok = e.first_index == pred.predicted_first_index
        && e.multiplicity == pred.predicted_multiplicity
        && (e.lambda - pred.lambda).abs() <= tol * pred.lambda.abs().max(1.0);
    Ok(PredictionCheck {
        observed_lambda: e.lambda,
        observed_first_index: e.first_index,
        observed_multiplicity: e.multiplicity,
        ok,
    })
}

/// Loop length `2hπ/√λ` used by [`attach_loop`].
pub fn loop_length(lambda: f64, harmonic: usize) -> f64 {
    2.0 * harmonic as f64 * PI / lambda.sqrt()
}
