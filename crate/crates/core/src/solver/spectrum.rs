use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::counting::{CountSample, EigenCounter};
use super::secular::assemble_secular_system;
use super::{SolverError, SolverOptions};
use crate::graph::{graph_profile, MetricGraph};

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub multiplicity: usize,
    pub first_index: usize,
}

impl SpectrumEntry {
    pub fn last_index(&self) -> usize {
        self.first_index + self.multiplicity - 1
    }
}

/// Eigenvalues up to `k_max²`, ascending, with multiplicities and 1-based
/// index ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    pub k_max: f64,
    /// Weyl estimate `L · k_max / π`.
    pub weyl_expected: f64,
    /// Eigenvalues found, counted with multiplicity.
    pub weyl_found: usize,
    /// False when the found count strays more than `|V| + β + 2` from the
    /// estimate.
    pub weyl_ok: bool,
}

impl Spectrum {
    /// Eigenvalues repeated according to multiplicity; element `n - 1` is `λ_n`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.lambda, e.multiplicity))
            .collect()
    }

    /// `λ_n` for 1-based `n`, if it was computed.
    pub fn lambda(&self, n: usize) -> Option<f64> {
        self.entry_containing(n).map(|e| e.lambda)
    }

    pub fn entry_containing(&self, n: usize) -> Option<&SpectrumEntry> {
        self.entries
            .iter()
            .find(|e| e.first_index <= n && n <= e.last_index())
    }

    pub fn len(&self) -> usize {
        self.weyl_found
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "entries": self.entries.iter().map(|e| json!({
                "lambda": e.lambda,
                "multiplicity": e.multiplicity,
                "first_index": e.first_index,
            })).collect::<Vec<_>>(),
            "k_max": self.k_max,
            "weyl_expected": self.weyl_expected,
            "weyl_found": self.weyl_found,
        })
    }
}

struct Scan<'a> {
    g: &'a MetricGraph,
    counter: EigenCounter,
    opts: &'a SolverOptions,
    grid_step: f64,
}

/// A located eigenvalue `k` with the multiplicity confirmed by both the
/// numerical nullity and the eigenphase count.
#[derive(Clone, Copy, Debug)]
struct Root {
    k: f64,
    multiplicity: usize,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const MAX_DEPTH: usize = 200;

impl<'a> Scan<'a> {
    fn new(g: &'a MetricGraph, opts: &'a SolverOptions) -> Result<Self, SolverError> {
        let counter = EigenCounter::new(g)?;
        let grid_step = opts.grid_step.unwrap_or(PI / (20.0 * g.total_length()));
        if grid_step.is_nan() || grid_step <= 0.0 {
            return Err(SolverError::InvalidOption(format!(
                "grid_step must be positive, got {grid_step}"
            )));
        }
        Ok(Scan {
            g,
            counter,
            opts,
            grid_step,
        })
    }

    fn tol_k(&self, k: f64) -> f64 {
        self.opts.refine_tol * k.max(1.0)
    }

    fn sigma(&self, k: f64) -> f64 {
        assemble_secular_system(self.g, k)
            .map(|s| s.singular_values()[0])
            .unwrap_or(f64::INFINITY)
    }

    fn nullity(&self, k: f64) -> usize {
        assemble_secular_system(self.g, k)
            .map(|s| s.nullity(self.opts.rank_tol))
            .unwrap_or(0)
    }

    /// Golden-section minimization of σ_min on `[a, b]`.
    fn golden(&self, mut a: f64, mut b: f64) -> f64 {
        let tol = self.tol_k(b);
        let mut c = b - GOLDEN * (b - a);
        let mut d = a + GOLDEN * (b - a);
        let mut fc = self.sigma(c);
        let mut fd = self.sigma(d);
        while b - a > tol {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLDEN * (b - a);
                fc = self.sigma(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (b - a);
                fd = self.sigma(d);
            }
        }
        0.5 * (a + b)
    }

    /// Locates every eigenvalue in `(lo.k, hi.k]`, whose count is known.
    fn locate(
        &self,
        lo: CountSample,
        hi: CountSample,
        depth: usize,
        out: &mut Vec<Root>,
    ) -> Result<(), SolverError> {
        let expected = hi.count - lo.count;
        if expected == 0 {
            return Ok(());
        }
        let width = hi.k - lo.k;
        if depth > MAX_DEPTH || width < 10.0 * self.tol_k(hi.k) {
            return Err(SolverError::UnresolvedCluster {
                k: 0.5 * (lo.k + hi.k),
                grid_step: self.grid_step,
            });
        }
        let k = self.golden(lo.k, hi.k);
        let nullity = self.nullity(k);
        if nullity > 0 {
            let delta = 1e-9 * k.max(1.0);
            let left = if k - delta <= lo.k {
                lo
            } else {
                self.counter.sample(k - delta)?
            };
            let right = if k + delta >= hi.k {
                hi
            } else {
                self.counter.sample(k + delta)?
            };
            let local = right.count.saturating_sub(left.count);
            if local == nullity {
                out.push(Root {
                    k,
                    multiplicity: nullity,
                });
                self.locate(lo, left, depth + 1, out)?;
                return self.locate(right, hi, depth + 1, out);
            }
            if local > nullity {
                return Err(SolverError::UnresolvedCluster {
                    k,
                    grid_step: self.grid_step,
                });
            }
        }
        // The minimum found is not a confirmed root: bisect on the count.
        let mid = self
            .counter
            .sample_clear(0.5 * (lo.k + hi.k), 1e-3 * width)?;
        if mid.k >= hi.k {
            return Err(SolverError::UnresolvedCluster {
                k: mid.k,
                grid_step: self.grid_step,
            });
        }
        self.locate(lo, mid, depth + 1, out)?;
        self.locate(mid, hi, depth + 1, out)
    }

    fn run(&self, k_max: f64) -> Result<Vec<Root>, SolverError> {
        let h = self.grid_step;
        let end = k_max * (1.0 + 1e-9);
        let n_cells = ((end / h).ceil() as usize).max(1);
        // Offset by an irrational fraction of a step to stay clear of the
        // commensurate eigenvalues of π-multiple lengths.
        let mut points: Vec<f64> = (0..n_cells)
            .map(|i| (i as f64 + 0.381_966_011_250_105) * h)
            .filter(|&k| k > self.counter.base_k() && k < end)
            .collect();
        points.push(end);

        let nudge = 1e-3 * h;
        let mut samples: Vec<CountSample> = points
            .par_iter()
            .map(|&k| self.counter.sample_clear(k, nudge))
            .collect::<Result<_, _>>()?;
        samples.insert(0, self.counter.sample(self.counter.base_k())?);
        for w in samples.windows(2) {
            if w[1].count < w[0].count || w[1].k <= w[0].k {
                return Err(SolverError::Numerical(format!(
                    "eigenvalue count decreased between k = {} and k = {}",
                    w[0].k, w[1].k
                )));
            }
        }

        let found: Vec<Vec<Root>> = samples
            .par_windows(2)
            .map(|w| {
                let mut roots = Vec::new();
                self.locate(w[0], w[1], 0, &mut roots)?;
                Ok(roots)
            })
            .collect::<Result<_, SolverError>>()?;
        let mut roots: Vec<Root> = found.into_iter().flatten().collect();
        roots.sort_by(|a, b| a.k.total_cmp(&b.k));

        let mut merged: Vec<Root> = Vec::with_capacity(roots.len());
        for r in roots {
            match merged.last_mut() {
                Some(prev) if (r.k - prev.k).abs() < 10.0 * self.tol_k(r.k) => {
                    prev.k = 0.5 * (prev.k + r.k);
                    prev.multiplicity = self.nullity(prev.k);
                }
                _ => merged.push(r),
            }
        }
        let total: usize = merged.iter().map(|r| r.multiplicity).sum();
        let expected = samples.last().map_or(0, |s| s.count);
        if total != expected {
            return Err(SolverError::UnresolvedCluster {
                k: k_max,
                grid_step: self.grid_step,
            });
        }
        Ok(merged.into_iter().filter(|r| r.k <= end).collect())
    }
}

/// All eigenvalues `λ ≤ k_max²` of the Laplacian with standard conditions and
/// Dirichlet conditions at `g.dirichlet()`.
///
/// Every grid cell whose eigenphase count increases is searched by
/// golden-section minimization of σ_min; a minimum is accepted only when its
/// numerical nullity equals the count increase in a small window around it,
/// otherwise the cell is bisected. Zero is prepended with multiplicity equal
/// to the number of components without Dirichlet vertices.
pub fn find_spectrum(
    g: &MetricGraph,
    k_max: f64,
    opts: &SolverOptions,
) -> Result<Spectrum, SolverError> {
    if !k_max.is_finite() || k_max <= 0.0 {
        return Err(SolverError::NonpositiveK(k_max));
    }
    let scan = Scan::new(g, opts)?;
    let roots = scan.run(k_max)?;

    let mut entries = Vec::with_capacity(roots.len() + 1);
    let mut next_index = 1;
    let zero = g.neumann_component_count();
    if zero > 0 {
        entries.push(SpectrumEntry {
            lambda: 0.0,
            multiplicity: zero,
            first_index: 1,
        });
        next_index += zero;
    }
    for r in roots {
        entries.push(SpectrumEntry {
            lambda: r.k * r.k,
            multiplicity: r.multiplicity,
            first_index: next_index,
        });
        next_index += r.multiplicity;
    }
    let profile = graph_profile(g);
    let weyl_expected = g.total_length() * k_max / PI;
    let weyl_found = next_index - 1;
    let slack = (g.vertices().len() + profile.betti + 2) as f64;
    Ok(Spectrum {
        entries,
        k_max,
        weyl_expected,
        weyl_found,
        weyl_ok: (weyl_found as f64 - weyl_expected).abs() <= slack,
    })
}

/// Smallest `k` such that the eigenvalues `λ_1 … λ_n` all lie in `[0, k²]`.
pub fn k_max_for_index(g: &MetricGraph, n: usize) -> Result<f64, SolverError> {
    let counter = EigenCounter::new(g)?;
    let zero = g.neumann_component_count();
    let l = g.total_length();
    let mut k = PI * (n as f64 + 1.0) / l;
    let step = 1e-3 * PI / l;
    loop {
        let s = counter.sample_clear(k, step)?;
        if s.count + zero >= n {
            return Ok(s.k);
        }
        k *= 1.25;
    }
}

/// The first `n` eigenvalues (at least), computed with a scan ceiling chosen
/// from the eigenphase count.
pub fn spectrum_to_index(
    g: &MetricGraph,
    n: usize,
    opts: &SolverOptions,
) -> Result<Spectrum, SolverError> {
    let k = k_max_for_index(g, n.max(1))?;
    find_spectrum(g, k, opts)
}

/// `λ_n` for 1-based `n`.
pub fn eigenvalue_at_index(
    g: &MetricGraph,
    n: usize,
    opts: &SolverOptions,
) -> Result<f64, SolverError> {
    if n == 0 {
        return Err(SolverError::InvalidIndex(0));
    }
    let s = spectrum_to_index(g, n, opts)?;
    s.lambda(n).ok_or(SolverError::IndexOutOfRange {
        n,
        available: s.weyl_found,
    })
}

/// The spectrum entry whose eigenvalue agrees with `lambda` to relative
/// accuracy `tol`.
pub fn entry_at(
    g: &MetricGraph,
    lambda: f64,
    tol: f64,
    opts: &SolverOptions,
) -> Result<SpectrumEntry, SolverError> {
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(SolverError::NonpositiveK(lambda));
    }
    let k_max = (lambda * (1.0 + 2.0 * tol))
        .sqrt()
        .max(EigenCounter::new(g)?.base_k() * 2.0);
    let s = find_spectrum(g, k_max, opts)?;
    s.entries
        .into_iter()
        .find(|e| (e.lambda - lambda).abs() <= tol * lambda.max(1.0))
        .ok_or(SolverError::NotAnEigenvalue(lambda))
}

/// Numerical nullity of the secular system at `k = √λ`; zero when `λ` is not
/// an eigenvalue. For `λ = 0` the multiplicity is the number of components
/// without Dirichlet vertices.
pub fn multiplicity_at(
    g: &MetricGraph,
    lambda: f64,
    opts: &SolverOptions,
) -> Result<usize, SolverError> {
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(SolverError::NonpositiveK(lambda));
    }
    let counter = EigenCounter::new(g)?;
    let k = lambda.sqrt();
    if k <= counter.base_k() {
        return Ok(if lambda == 0.0 {
            g.neumann_component_count()
        } else {
            0
        });
    }
    Ok(assemble_secular_system(g, k)?.nullity(opts.rank_tol))
}
