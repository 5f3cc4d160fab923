//! Exact eigenvalue counting through the bond scattering matrix.
//!
//! For standard and Dirichlet conditions the vertex scattering matrices do
//! not depend on `k`, so `U(k) = S · diag(exp(i k ℓ_b))` over the `2|E|`
//! directed bonds has eigenphases that increase strictly with `k`, and `k > 0`
//! is an eigenvalue of multiplicity `m` exactly when `m` eigenphases sit at
//! zero modulo 2π. The total phase is `arg det S + 2Lk`, so the number of
//! crossings in `(ε, k]` follows from the phases reduced to `[0, 2π)` at the
//! two ends without tracking individual branches.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use super::SolverError;
use crate::graph::MetricGraph;

/// Phases closer than this to zero make a count ambiguous.
const PHASE_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct EigenCounter {
    scattering: DMatrix<Complex64>,
    bond_lengths: Vec<f64>,
    total_bond_length: f64,
    base_k: f64,
    base_phase_sum: f64,
}

/// A count evaluated at some `k`, with the smallest eigenphase distance to
/// zero so callers can tell whether `k` sits on an eigenvalue.
#[derive(Clone, Copy, Debug)]
pub struct CountSample {
    pub k: f64,
    pub count: usize,
    pub margin: f64,
}

impl EigenCounter {
    pub fn new(g: &MetricGraph) -> Result<Self, SolverError> {
        if g.edges().is_empty() {
            return Err(SolverError::NoEdges);
        }
        let m = g.edges().len();
        // Bond 2i runs from -> to along edge i, bond 2i + 1 runs back.
        let mut scattering = DMatrix::from_element(2 * m, 2 * m, Complex64::new(0.0, 0.0));
        for v in g.vertices() {
            // (incoming bond, outgoing bond) for each edge end at v.
            let mut ends: Vec<(usize, usize)> = Vec::new();
            for (i, e) in g.edges().iter().enumerate() {
                if e.from == *v {
                    ends.push((2 * i + 1, 2 * i));
                }
                if e.to == *v {
                    ends.push((2 * i, 2 * i + 1));
                }
            }
            let d = ends.len() as f64;
            for (j, &(_, out)) in ends.iter().enumerate() {
                for (l, &(inc, _)) in ends.iter().enumerate() {
                    let sigma = if g.is_dirichlet(v) {
                        -1.0
                    } else {
                        2.0 / d - if j == l { 1.0 } else { 0.0 }
                    };
                    scattering[(out, inc)] = Complex64::new(sigma, 0.0);
                }
            }
        }
        let bond_lengths: Vec<f64> = g.edges().iter().flat_map(|e| [e.len(), e.len()]).collect();
        let total_bond_length: f64 = bond_lengths.iter().sum();
        // No positive eigenvalue lies below π / (2L) on any component.
        let base_k = 1e-3 * PI / total_bond_length;
        let mut counter = EigenCounter {
            scattering,
            bond_lengths,
            total_bond_length,
            base_k,
            base_phase_sum: 0.0,
        };
        counter.base_phase_sum = counter.phases(base_k)?.iter().sum();
        Ok(counter)
    }

    /// Eigenphases of `U(k)` reduced to `[0, 2π)`.
    pub fn phases(&self, k: f64) -> Result<Vec<f64>, SolverError> {
        let mut u = self.scattering.clone();
        for (c, &l) in self.bond_lengths.iter().enumerate() {
            let z = Complex64::from_polar(1.0, k * l);
            for r in 0..u.nrows() {
                u[(r, c)] *= z;
            }
        }
        // Highly degenerate spectra can stall the nonsymmetric QR sweeps.
        let phases = match Schur::try_new(u.clone(), f64::EPSILON, 10_000) {
            Some(schur) => schur
                .unpack()
                .1
                .diagonal()
                .iter()
                .map(|z| z.arg())
                .collect(),
            None => cayley_phases(&u).ok_or_else(|| {
                SolverError::Numerical(format!("eigenphase computation failed at k = {k}"))
            })?,
        };
        Ok(phases.into_iter().map(wrap).collect())
    }

    /// Smallest `k` at which counts are meaningful; every positive eigenvalue
    /// exceeds it.
    pub fn base_k(&self) -> f64 {
        self.base_k
    }

    /// Number of eigenvalues in `(0, k]` counted with multiplicity.
    pub fn sample(&self, k: f64) -> Result<CountSample, SolverError> {
        if k <= self.base_k {
            return Ok(CountSample {
                k,
                count: 0,
                margin: f64::INFINITY,
            });
        }
        let phases = self.phases(k)?;
        let sum: f64 = phases.iter().sum();
        let margin = phases
            .iter()
            .map(|&p| p.min(TAU - p))
            .fold(f64::INFINITY, f64::min);
        let raw = (self.total_bond_length * (k - self.base_k) + self.base_phase_sum - sum) / TAU;
        let count = raw.round();
        if count < 0.0 || (raw - count).abs() > 1e-3 {
            return Err(SolverError::Numerical(format!(
                "eigenphase count at k = {k} is not integral ({raw})"
            )));
        }
        Ok(CountSample {
            k,
            count: count as usize,
            margin,
        })
    }

    pub fn count(&self, k: f64) -> Result<usize, SolverError> {
        Ok(self.sample(k)?.count)
    }

    /// Sample at `k`, moved upward by multiples of `step` until no eigenphase
    /// is within the ambiguity margin of zero.
    pub fn sample_clear(&self, k: f64, step: f64) -> Result<CountSample, SolverError> {
        let mut k = k;
        for _ in 0..64 {
            let s = self.sample(k)?;
            if s.margin > PHASE_MARGIN {
                return Ok(s);
            }
            k += step;
        }
        Err(SolverError::Numerical(format!(
            "could not find an unambiguous counting point near k = {k}"
        )))
    }
}

fn wrap(a: f64) -> f64 {
    let a = a.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Eigenphases of a unitary matrix through the Cayley transform of a rotated
/// copy: for `V = e^{iα} U`, `H = i (I − V)(I + V)⁻¹` is Hermitian with
/// eigenvalues `tan(θ/2)`. Rotations that leave a phase close to π are
/// retried.
fn cayley_phases(u: &DMatrix<Complex64>) -> Option<Vec<f64>> {
    let n = u.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    for t in 0..16 {
        let alpha = 0.3 + 0.61 * t as f64;
        let v = u * Complex64::from_polar(1.0, alpha);
        let Some(inv) = (&id + &v).try_inverse() else {
            continue;
        };
        let h = (&id - &v) * inv * Complex64::i();
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::try_new(h, f64::EPSILON, 0)?;
        if eig.eigenvalues.iter().any(|x| x.abs() > 1e4) {
            continue;
        }
        return Some(
            eig.eigenvalues
                .iter()
                .map(|x| 2.0 * x.atan() - alpha)
                .collect(),
        );
    }
    None
}
