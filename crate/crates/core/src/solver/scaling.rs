use serde_json::{json, Value};

use super::spectrum::eigenvalue_at_index;
use super::{SolverError, SolverOptions};
use crate::graph::MetricGraph;

/// `λ_n` before and after stretching one edge by `rho`, with the verdicts of
/// the two-sided estimate `min{1, ρ⁻²} λ_n(ℓ) ≤ λ_n(ρℓ) ≤ max{1, ρ⁻²} λ_n(ℓ)`
/// and of monotonicity (shrinking an edge cannot lower `λ_n`, stretching it
/// cannot raise it).
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub edge: String,
    pub rho: f64,
    pub n: usize,
    pub lambda_before: f64,
    pub lambda_after: f64,
    pub lower: f64,
    pub upper: f64,
    pub sandwich_ok: bool,
    pub monotone_ok: bool,
}

impl ScalingReport {
    pub fn to_value(&self) -> Value {
        json!({
            "edge": self.edge,
            "rho": self.rho,
            "n": self.n,
            "lambda_before": self.lambda_before,
            "lambda_after": self.lambda_after,
            "lower": self.lower,
            "upper": self.upper,
            "sandwich_ok": self.sandwich_ok,
            "monotone_ok": self.monotone_ok,
        })
    }
}

fn le(a: f64, b: f64, slack: f64) -> bool {
    a <= b + slack * a.abs().max(b.abs())
}

/// Compares `λ_n` of `g` with `λ_n` of `g` after scaling `edge` by `rho`.
/// Inequalities are checked with relative slack `slack`.
pub fn eigenvalue_under_scaling(
    g: &MetricGraph,
    edge: &str,
    rho: f64,
    n: usize,
    slack: f64,
    opts: &SolverOptions,
) -> Result<ScalingReport, SolverError> {
    let scaled = g.with_scaled_edge(edge, rho)?;
    let lambda_before = eigenvalue_at_index(g, n, opts)?;
    let lambda_after = eigenvalue_at_index(&scaled, n, opts)?;
    let factor = rho.powi(-2);
    let lower = factor.min(1.0) * lambda_before;
    let upper = factor.max(1.0) * lambda_before;
    let sandwich_ok = le(lower, lambda_after, slack) && le(lambda_after, upper, slack);
    let monotone_ok = if rho <= 1.0 {
        le(lambda_before, lambda_after, slack)
    } else {
        le(lambda_after, lambda_before, slack)
    };
    Ok(ScalingReport {
        edge: edge.to_string(),
        rho,
        n,
        lambda_before,
        lambda_after,
        lower,
        upper,
        sandwich_ok,
        monotone_ok,
    })
}
