//! Numerical spectrum of the metric-graph Laplacian.

mod closed_form;
mod counting;
mod eigenspace;
mod scaling;
mod secular;
mod spectrum;

use thiserror::Error;

use crate::graph::GraphError;

pub use closed_form::{interval_spectrum, loop_offset_forms, loop_spectrum, IntervalConditions};
pub use counting::{CountSample, EigenCounter};
pub use eigenspace::{edge_support_report, eigenspace_basis, EigenspaceBasis};
pub use scaling::{eigenvalue_under_scaling, ScalingReport};
pub use secular::{assemble_secular_system, sigma_min, RowKind, SecularSystem};
pub use spectrum::{
    eigenvalue_at_index, entry_at, find_spectrum, k_max_for_index, multiplicity_at,
    spectrum_to_index, Spectrum, SpectrumEntry,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("spectral parameter must be positive, got {0}")]
    NonpositiveK(f64),
    #[error("graph has no edges")]
    NoEdges,
    #[error("unresolved eigenvalue cluster near k = {k}; rerun with a grid step smaller than {grid_step}")]
    UnresolvedCluster { k: f64, grid_step: f64 },
    #[error("{0} is not an eigenvalue")]
    NotAnEigenvalue(f64),
    #[error("index must be at least 1, got {0}")]
    InvalidIndex(usize),
    #[error("eigenvalue index {n} outside the computed range (1..={available})")]
    IndexOutOfRange { n: usize, available: usize },
    #[error("invalid solver option: {0}")]
    InvalidOption(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Scan and tolerance settings for [`find_spectrum`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Grid spacing in `k`; `None` means `π / (20 L)`.
    pub grid_step: Option<f64>,
    /// Relative threshold on singular values for numerical nullity.
    pub rank_tol: f64,
    /// Relative accuracy in `k` of the golden-section refinement.
    pub refine_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            grid_step: None,
            rank_tol: 1e-7,
            refine_tol: 1e-12,
        }
    }
}
