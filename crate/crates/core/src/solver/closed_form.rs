//! Closed-form spectra of intervals and loops.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::SolverError;

/// Conditions at the two ends of an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalConditions {
    /// Neumann at both ends.
    NN,
    /// Neumann at one end, Dirichlet at the other.
    ND,
    /// Dirichlet at both ends.
    DD,
}

impl fmt::Display for IntervalConditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalConditions::NN => "NN",
            IntervalConditions::ND => "ND",
            IntervalConditions::DD => "DD",
        })
    }
}

impl FromStr for IntervalConditions {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "NN" => Ok(IntervalConditions::NN),
            "ND" | "DN" => Ok(IntervalConditions::ND),
            "DD" => Ok(IntervalConditions::DD),
            other => Err(format!("unknown interval conditions `{other}`")),
        }
    }
}

/// `λ_n` of an interval: `(π/L)²(n−1)²`, `(π/L)²(n−½)²` or `(π/L)² n²`.
pub fn interval_spectrum(
    length: f64,
    bc: IntervalConditions,
    n: usize,
) -> Result<f64, SolverError> {
    if n < 1 {
        return Err(SolverError::InvalidIndex(n));
    }
    let n = n as f64;
    let q = match bc {
        IntervalConditions::NN => n - 1.0,
        IntervalConditions::ND => n - 0.5,
        IntervalConditions::DD => n,
    };
    Ok((PI / length).powi(2) * q * q)
}

/// `λ_n` of a loop of the given length: `λ_1 = 0` and
/// `λ_{2j} = λ_{2j+1} = (2jπ/L)²`.
pub fn loop_spectrum(length: f64, n: usize) -> Result<f64, SolverError> {
    if n < 1 {
        return Err(SolverError::InvalidIndex(n));
    }
    let j = (n / 2) as f64;
    Ok((2.0 * j * PI / length).powi(2))
}

/// The even and odd loop eigenvalues `λ_{2j}`, `λ_{2j+1}` written relative to
/// the upper and lower estimates: `(π/L)²(2j − 2 + 3/2 + 1/2)²` and
/// `(π/L)²(2j + 1 − 1/2 − 1/2)²`.
pub fn loop_offset_forms(length: f64, j: usize) -> Result<(f64, f64), SolverError> {
    if j < 1 {
        return Err(SolverError::InvalidIndex(j));
    }
    let j = j as f64;
    let c = (PI / length).powi(2);
    let even = c * (2.0 * j - 2.0 + 1.5 + 0.5).powi(2);
    let odd = c * (2.0 * j + 1.0 - 0.5 - 0.5).powi(2);
    Ok((even, odd))
}
