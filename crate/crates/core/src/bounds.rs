//! Eigenvalue estimates in terms of total length `L`, Dirichlet and Neumann
//! pendant counts `D`, `N` and first Betti number `β`:
//!
//! ```text
//! m_n = (π/L)² n²/4                 if n < N + β
//!       (π/L)² (n − (N + β)/2)²     otherwise          (n ≥ 2, or any n if D ≠ 0)
//! M_n = (π/L)² (n − 2 + D + (N + β)/2 + β)²
//! ```
//!
//! and the classification of sharp and maximally degenerate eigenvalues
//! that rests on them.

use std::f64::consts::PI;

use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{
    contract_cycles, graph_profile, is_interval, is_loop_graph, suppress_degree_two, MetricGraph,
};
use crate::solver::Spectrum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("exceptional: loop graph")]
    Exceptional,
    #[error("the lower estimate is not asserted for n = 1 without Dirichlet vertices")]
    LowerBoundNotAsserted,
    #[error("index must be at least 1, got {0}")]
    InvalidIndex(usize),
    #[error("profile (N={n_neumann}, D={n_dirichlet}, β={betti}) admits no multiplicity ceiling")]
    Inadmissible {
        n_neumann: usize,
        n_dirichlet: usize,
        betti: usize,
    },
    #[error("spectrum index range is broken at entry {0}")]
    IndexOutOfRange(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsProfile {
    pub total_length: f64,
    pub n_dirichlet: usize,
    pub n_neumann: usize,
    pub betti: usize,
    /// Degree-two suppression leaves a single loop.
    pub is_cycle_exceptional: bool,
    /// Degree-two suppression leaves a single interval.
    pub is_interval: bool,
}

impl BoundsProfile {
    pub fn from_graph(g: &MetricGraph) -> Self {
        let s = suppress_degree_two(g);
        let p = graph_profile(&s);
        BoundsProfile {
            total_length: p.total_length,
            n_dirichlet: p.n_dirichlet,
            n_neumann: p.n_neumann,
            betti: p.betti,
            is_cycle_exceptional: is_loop_graph(&s),
            is_interval: is_interval(&s),
        }
    }

    /// Profile from counts alone, for formula work.
    pub fn from_counts(
        total_length: f64,
        n_neumann: usize,
        n_dirichlet: usize,
        betti: usize,
    ) -> Self {
        BoundsProfile {
            total_length,
            n_dirichlet,
            n_neumann,
            betti,
            is_cycle_exceptional: n_neumann == 0 && n_dirichlet == 0 && betti == 1,
            is_interval: betti == 0 && n_neumann + n_dirichlet == 2,
        }
    }

    /// Whether some connected graph other than a loop has these counts: a
    /// tree has at least two pendants, a graph with one cycle and no pendant
    /// is a cycle.
    pub fn is_admissible(&self) -> bool {
        let pendants = self.n_neumann + self.n_dirichlet;
        match self.betti {
            0 => pendants >= 2,
            1 => pendants >= 1,
            _ => true,
        }
    }

    fn scale(&self) -> f64 {
        (PI / self.total_length).powi(2)
    }

    fn check(&self, n: usize) -> Result<(), BoundsError> {
        if self.is_cycle_exceptional {
            return Err(BoundsError::Exceptional);
        }
        if n == 0 {
            return Err(BoundsError::InvalidIndex(0));
        }
        Ok(())
    }
}

/// Twice the bracketed term of `m_n`, so that `m_n = (π/L)² t² / 4`.
pub fn lower_term_doubled(p: &BoundsProfile, n: usize) -> i64 {
    let nb = (p.n_neumann + p.betti) as i64;
    let n = n as i64;
    if n < nb {
        n
    } else {
        2 * n - nb
    }
}

/// Twice the bracketed term of `M_n`, so that `M_n = (π/L)² t² / 4`.
pub fn upper_term_doubled(p: &BoundsProfile, n: usize) -> i64 {
    2 * n as i64 - 4 + 2 * p.n_dirichlet as i64 + p.n_neumann as i64 + 3 * p.betti as i64
}

/// The lower estimate `m_n`.
pub fn lower_bound(p: &BoundsProfile, n: usize) -> Result<f64, BoundsError> {
    p.check(n)?;
    if n == 1 && p.n_dirichlet == 0 {
        return Err(BoundsError::LowerBoundNotAsserted);
    }
    let t = lower_term_doubled(p, n) as f64;
    Ok(p.scale() * t * t / 4.0)
}

/// The upper estimate `M_n`.
pub fn upper_bound(p: &BoundsProfile, n: usize) -> Result<f64, BoundsError> {
    p.check(n)?;
    let t = upper_term_doubled(p, n) as f64;
    Ok(p.scale() * t * t / 4.0)
}

/// Multiplicity ceiling `m_U = D + N + 2β − 1` implied by the two estimates.
pub fn max_mult_upper(p: &BoundsProfile) -> Result<usize, BoundsError> {
    let total = p.n_dirichlet + p.n_neumann + 2 * p.betti;
    if total < 2 {
        return Err(BoundsError::Inadmissible {
            n_neumann: p.n_neumann,
            n_dirichlet: p.n_dirichlet,
            betti: p.betti,
        });
    }
    Ok(total - 1)
}

/// Multiplicity ceiling `m_M = β + P^T − 1`, with `P^T` the pendant count of
/// the tree obtained by contracting every cycle.
pub fn max_mult_kp(g: &MetricGraph) -> usize {
    let betti = graph_profile(g).betti;
    betti + contract_cycles(g).pendant_count - 1
}

fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn rel_le(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * a.abs().max(b.abs())
}

/// Lower estimate used for classification. Without Dirichlet vertices `λ_1 = 0`
/// and the only estimate from below is zero itself; it counts as attained
/// when `M_1 = 0`.
fn lower_for_classification(p: &BoundsProfile, n: usize) -> Result<f64, BoundsError> {
    if n == 1 && p.n_dirichlet == 0 {
        return Ok(0.0);
    }
    lower_bound(p, n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SharpnessEntry {
    pub lambda: f64,
    pub n: usize,
    pub m: usize,
    /// `λ` attains `m_{n+m−1}`.
    pub lower_sharp: bool,
    /// `λ` attains `M_n`.
    pub upper_sharp: bool,
    pub sharp_degenerate: bool,
    pub simple_sharp: bool,
    pub maximally_degenerate: bool,
}

impl SharpnessEntry {
    pub fn is_sharp(&self) -> bool {
        self.sharp_degenerate || self.simple_sharp
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// Sharp without maximal multiplicity, or the converse.
    SharpnessMismatch,
    /// A simple sharp eigenvalue on a graph that is not an interval.
    SimpleSharpOffInterval,
    /// `m_{n+m−1} > M_n` for a degenerate eigenvalue.
    MultiplicityInequality,
    /// `m_n` or `M_n` fails to increase strictly.
    NotStrictlyIncreasing,
    /// An estimate attained at an index where it cannot be.
    SharpIndexNotStrict,
    /// `m_n ≤ λ_n ≤ M_n` fails.
    BoundViolated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub n: usize,
    pub lambda: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SharpnessReport {
    pub entries: Vec<SharpnessEntry>,
    pub max_mult_upper: usize,
    pub tol: f64,
    pub characterization_ok: bool,
    pub eq4_ok: bool,
    pub violations: Vec<Violation>,
}

impl SharpnessReport {
    pub fn to_value(&self) -> Value {
        json!({
            "entries": self.entries.iter().map(|e| json!({
                "lambda": e.lambda,
                "n": e.n,
                "m": e.m,
                "lower_sharp": e.lower_sharp,
                "upper_sharp": e.upper_sharp,
                "sharp_degenerate": e.sharp_degenerate,
                "simple_sharp": e.simple_sharp,
                "maximally_degenerate": e.maximally_degenerate,
            })).collect::<Vec<_>>(),
            "m_U": self.max_mult_upper,
            "characterization_ok": self.characterization_ok,
            "eq4_ok": self.eq4_ok,
            "violations": self.violations.iter().map(|v| json!({
                "kind": format!("{:?}", v.kind),
                "n": v.n,
                "lambda": v.lambda,
                "detail": v.detail,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn entry(&self, n: usize) -> Option<&SharpnessEntry> {
        self.entries.iter().find(|e| e.n <= n && n < e.n + e.m)
    }
}

/// Flags every eigenvalue of `s` against the estimates of `p`, equality taken
/// at relative tolerance `tol`, then runs [`verify_characterization`].
pub fn classify_spectrum(
    s: &Spectrum,
    p: &BoundsProfile,
    tol: f64,
) -> Result<SharpnessReport, BoundsError> {
    if p.is_cycle_exceptional {
        return Err(BoundsError::Exceptional);
    }
    let m_u = max_mult_upper(p)?;
    let mut expected_index = 1;
    let mut entries = Vec::with_capacity(s.entries.len());
    for (i, e) in s.entries.iter().enumerate() {
        if e.first_index != expected_index || e.multiplicity == 0 {
            return Err(BoundsError::IndexOutOfRange(i));
        }
        expected_index += e.multiplicity;
        let (n, m, lambda) = (e.first_index, e.multiplicity, e.lambda);
        let last = n + m - 1;
        let lower_sharp = if last == 1 && p.n_dirichlet == 0 {
            upper_bound(p, 1)? == 0.0 && lambda == 0.0
        } else {
            rel_eq(lambda, lower_bound(p, last)?, tol)
        };
        let upper_sharp = rel_eq(lambda, upper_bound(p, n)?, tol);
        entries.push(SharpnessEntry {
            lambda,
            n,
            m,
            lower_sharp,
            upper_sharp,
            sharp_degenerate: m >= 2 && lower_sharp && upper_sharp,
            simple_sharp: m == 1 && lower_sharp && upper_sharp,
            maximally_degenerate: m == m_u,
        });
    }
    let mut report = SharpnessReport {
        entries,
        max_mult_upper: m_u,
        tol,
        characterization_ok: true,
        eq4_ok: true,
        violations: Vec::new(),
    };
    let check = verify_characterization(&report, p);
    report.characterization_ok = check.characterization_ok;
    report.eq4_ok = check.eq4_ok;
    report.violations = check.violations;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterizationCheck {
    pub ok: bool,
    pub characterization_ok: bool,
    pub eq4_ok: bool,
    pub violations: Vec<Violation>,
}

/// Checks a report against the structural facts the estimates imply:
///
/// * an eigenvalue is sharp exactly when its multiplicity is `m_U`, and simple
///   sharp eigenvalues occur only on intervals;
/// * `m_{n+m−1} ≤ M_n` for every degenerate eigenvalue;
/// * `m_n` and `M_n` increase strictly over the report's index range;
/// * inside a degenerate block only the last index may attain `m_n` and only
///   the first may attain `M_n`;
/// * `m_n ≤ λ_n ≤ M_n` throughout.
pub fn verify_characterization(r: &SharpnessReport, p: &BoundsProfile) -> CharacterizationCheck {
    let tol = r.tol;
    let mut violations = Vec::new();
    let mut eq4_ok = true;
    let m_u = max_mult_upper(p).ok();

    for e in &r.entries {
        let last = e.n + e.m - 1;
        if Some(e.m) == m_u && !e.is_sharp() {
            push(
                &mut violations,
                ViolationKind::SharpnessMismatch,
                e.n,
                e.lambda,
                format!(
                    "multiplicity {} equals m_U but the eigenvalue is not sharp",
                    e.m
                ),
            );
        }
        if e.is_sharp() && Some(e.m) != m_u {
            push(
                &mut violations,
                ViolationKind::SharpnessMismatch,
                e.n,
                e.lambda,
                format!("sharp with multiplicity {} but m_U = {:?}", e.m, m_u),
            );
        }
        if e.simple_sharp && !p.is_interval {
            push(
                &mut violations,
                ViolationKind::SimpleSharpOffInterval,
                e.n,
                e.lambda,
                "simple sharp eigenvalue on a graph that is not an interval".into(),
            );
        }
        if e.m >= 2 && !(e.n == 1 && p.n_dirichlet == 0) {
            if let (Ok(lo), Ok(up)) = (lower_bound(p, last), upper_bound(p, e.n)) {
                if !rel_le(lo, up, tol) {
                    eq4_ok = false;
                    push(
                        &mut violations,
                        ViolationKind::MultiplicityInequality,
                        e.n,
                        e.lambda,
                        format!("m_{last} = {lo} exceeds M_{} = {up}", e.n),
                    );
                }
            }
        }
        for j in e.n..=last {
            let (Ok(lo), Ok(up)) = (lower_for_classification(p, j), upper_bound(p, j)) else {
                continue;
            };
            if !rel_le(lo, e.lambda, tol) || !rel_le(e.lambda, up, tol) {
                push(
                    &mut violations,
                    ViolationKind::BoundViolated,
                    j,
                    e.lambda,
                    format!("λ_{j} = {} outside [{lo}, {up}]", e.lambda),
                );
            }
            let lower_attained = if j == 1 && p.n_dirichlet == 0 {
                up == 0.0
            } else {
                rel_eq(e.lambda, lo, tol)
            };
            if j < last && lower_attained {
                push(
                    &mut violations,
                    ViolationKind::SharpIndexNotStrict,
                    j,
                    e.lambda,
                    format!("λ_{j} attains m_{j} although λ_{j} = λ_{}", j + 1),
                );
            }
            if j > e.n && rel_eq(e.lambda, up, tol) {
                push(
                    &mut violations,
                    ViolationKind::SharpIndexNotStrict,
                    j,
                    e.lambda,
                    format!("λ_{j} attains M_{j} although λ_{} = λ_{j}", j - 1),
                );
            }
        }
    }

    let top = r.entries.last().map_or(1, |e| e.n + e.m);
    let start = if p.n_dirichlet == 0 { 2 } else { 1 };
    for n in 1..top {
        if n >= start && lower_term_doubled(p, n).abs() >= lower_term_doubled(p, n + 1).abs() {
            push(
                &mut violations,
                ViolationKind::NotStrictlyIncreasing,
                n,
                f64::NAN,
                format!("m_{n} ≥ m_{}", n + 1),
            );
        }
        if upper_term_doubled(p, n).abs() >= upper_term_doubled(p, n + 1).abs() {
            push(
                &mut violations,
                ViolationKind::NotStrictlyIncreasing,
                n,
                f64::NAN,
                format!("M_{n} ≥ M_{}", n + 1),
            );
        }
    }
    let characterization_ok = violations
        .iter()
        .all(|v| v.kind == ViolationKind::MultiplicityInequality);
    CharacterizationCheck {
        ok: characterization_ok && eq4_ok,
        characterization_ok,
        eq4_ok,
        violations,
    }
}

fn push(out: &mut Vec<Violation>, kind: ViolationKind, n: usize, lambda: f64, detail: String) {
    out.push(Violation {
        kind,
        n,
        lambda,
        detail,
    });
}

/// Admissible profiles with `N, D, β ≤ max_count` for which `m_n = M_n` holds
/// exactly for some `n ≤ max_index`, the necessary condition for a simple
/// sharp eigenvalue. For `n = 1` without Dirichlet vertices the lower
/// estimate is `λ_1 = 0`. Returned as `(N, D, β)`.
pub fn simple_sharp_profiles(max_count: usize, max_index: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for n_neumann in 0..=max_count {
        for n_dirichlet in 0..=max_count {
            for betti in 0..=max_count {
                let p = BoundsProfile::from_counts(1.0, n_neumann, n_dirichlet, betti);
                if p.is_cycle_exceptional || !p.is_admissible() {
                    continue;
                }
                let hit = (1..=max_index).any(|n| {
                    let up = upper_term_doubled(&p, n).abs();
                    if n == 1 && n_dirichlet == 0 {
                        up == 0
                    } else {
                        lower_term_doubled(&p, n).abs() == up
                    }
                });
                if hit {
                    out.push((n_neumann, n_dirichlet, betti));
                }
            }
        }
    }
    out
}
