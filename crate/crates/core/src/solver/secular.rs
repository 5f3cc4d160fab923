//! Secular matrix over per-edge trigonometric coefficients.
//!
//! On edge `e`, parameterized by `[0, ℓ_e]` from its `from` endpoint, an
//! eigenfunction for `λ = k²` is `a_e cos(kx) + b_e sin(kx)`. Columns `2i`
//! and `2i + 1` hold `a` and `b` of the i-th edge. Each vertex contributes
//! `deg − 1` continuity rows and one Kirchhoff row, or a single Dirichlet row,
//! so the system is square of size `2|E|`.

use nalgebra::DMatrix;

use super::SolverError;
use crate::graph::MetricGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Continuity,
    Kirchhoff,
    Dirichlet,
}

#[derive(Clone, Debug)]
pub struct SecularSystem {
    pub k: f64,
    pub matrix: DMatrix<f64>,
    pub row_kinds: Vec<RowKind>,
    /// Vertex each row belongs to.
    pub row_vertices: Vec<String>,
    /// Factor each raw row was divided by.
    pub row_scale: Vec<f64>,
}

#[derive(Clone, Copy)]
struct EdgeEnd {
    edge: usize,
    at_start: bool,
}

impl EdgeEnd {
    /// Coefficients of the endpoint value in (a, b).
    fn value(self, c: f64, s: f64) -> [f64; 2] {
        if self.at_start {
            [1.0, 0.0]
        } else {
            [c, s]
        }
    }

    /// Coefficients of the inward derivative divided by k.
    fn derivative(self, c: f64, s: f64) -> [f64; 2] {
        if self.at_start {
            [0.0, 1.0]
        } else {
            [s, -c]
        }
    }
}

/// Builds the row-normalized secular system at spectral parameter `k`.
///
/// Rows are divided by `max(1, max_j |row_j|)`. Every row that can reach
/// max-norm one is normalized to exactly one; only the continuity or
/// Kirchhoff row of a vertex carrying nothing but a loop can fall below, and
/// it is left unscaled so the matrix stays continuous in `k`.
pub fn assemble_secular_system(g: &MetricGraph, k: f64) -> Result<SecularSystem, SolverError> {
    if !k.is_finite() || k <= 0.0 {
        return Err(SolverError::NonpositiveK(k));
    }
    if g.edges().is_empty() {
        return Err(SolverError::NoEdges);
    }
    let n = 2 * g.edges().len();
    let trig: Vec<(f64, f64)> = g
        .edges()
        .iter()
        .map(|e| {
            let x = k * e.len();
            (x.cos(), x.sin())
        })
        .collect();

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut row_kinds = Vec::with_capacity(n);
    let mut row_vertices = Vec::with_capacity(n);
    let add = |row: &mut Vec<f64>, end: EdgeEnd, coef: [f64; 2], sign: f64| {
        row[2 * end.edge] += sign * coef[0];
        row[2 * end.edge + 1] += sign * coef[1];
    };

    for v in g.vertices() {
        let mut ends = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            if e.from == *v {
                ends.push(EdgeEnd {
                    edge: i,
                    at_start: true,
                });
            }
            if e.to == *v {
                ends.push(EdgeEnd {
                    edge: i,
                    at_start: false,
                });
            }
        }
        if ends.is_empty() {
            continue;
        }
        let tr = |end: EdgeEnd| trig[end.edge];
        if g.is_dirichlet(v) {
            let mut row = vec![0.0; n];
            let (c, s) = tr(ends[0]);
            add(&mut row, ends[0], ends[0].value(c, s), 1.0);
            rows.push(row);
            row_kinds.push(RowKind::Dirichlet);
            row_vertices.push(v.clone());
            continue;
        }
        for pair in ends.windows(2) {
            let mut row = vec![0.0; n];
            let (c0, s0) = tr(pair[0]);
            let (c1, s1) = tr(pair[1]);
            add(&mut row, pair[0], pair[0].value(c0, s0), 1.0);
            add(&mut row, pair[1], pair[1].value(c1, s1), -1.0);
            rows.push(row);
            row_kinds.push(RowKind::Continuity);
            row_vertices.push(v.clone());
        }
        let mut row = vec![0.0; n];
        for &end in &ends {
            let (c, s) = tr(end);
            add(&mut row, end, end.derivative(c, s), 1.0);
        }
        rows.push(row);
        row_kinds.push(RowKind::Kirchhoff);
        row_vertices.push(v.clone());
    }
    debug_assert_eq!(rows.len(), n);

    let mut row_scale = Vec::with_capacity(n);
    let mut matrix = DMatrix::zeros(n, n);
    for (r, row) in rows.iter().enumerate() {
        let scale = row.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        row_scale.push(scale);
        for (c, x) in row.iter().enumerate() {
            matrix[(r, c)] = x / scale;
        }
    }
    Ok(SecularSystem {
        k,
        matrix,
        row_kinds,
        row_vertices,
        row_scale,
    })
}

impl SecularSystem {
    /// Singular values in ascending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .matrix
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        sv.sort_by(f64::total_cmp);
        sv
    }

    /// Number of singular values below `rank_tol` times the largest one. The
    /// reference scale is at least one, the row scale: on a bare loop every
    /// row vanishes at an eigenvalue.
    pub fn nullity(&self, rank_tol: f64) -> usize {
        let sv = self.singular_values();
        let top = sv.last().copied().unwrap_or(0.0).max(1.0);
        sv.iter().filter(|&&s| s < rank_tol * top).count()
    }

    /// Orthonormal basis of the numerical null space, as coefficient vectors
    /// in column order.
    pub fn null_vectors(&self, rank_tol: f64) -> Vec<Vec<f64>> {
        let svd = self.matrix.clone().svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        let top = svd.singular_values.iter().copied().fold(1.0, f64::max);
        let mut idx: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] < rank_tol * top)
            .collect();
        idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
        idx.into_iter()
            .map(|i| v_t.row(i).iter().copied().collect())
            .collect()
    }
}

/// Smallest singular value of the normalized secular system.
pub fn sigma_min(g: &MetricGraph, k: f64) -> Result<f64, SolverError> {
    Ok(assemble_secular_system(g, k)?.singular_values()[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Length};
    use std::f64::consts::PI;

    fn interval(len: f64, dirichlet: &[&str]) -> MetricGraph {
        MetricGraph::new(
            vec!["a".into(), "b".into()],
            vec![Edge::new("e", "a", "b", Length::Absolute(len))],
            dirichlet.iter().map(|s| s.to_string()),
        )
        .unwrap()
    }

    fn loop_graph(len: f64) -> MetricGraph {
        MetricGraph::new(
            vec!["v".into()],
            vec![Edge::new("l", "v", "v", Length::Absolute(len))],
            [],
        )
        .unwrap()
    }

    fn assert_parallel(v: &[f64], expected: [f64; 2]) {
        let cross = v[0] * expected[1] - v[1] * expected[0];
        assert!(cross.abs() < 1e-12, "{v:?} not parallel to {expected:?}");
    }

    #[test]
    fn dd_interval_null_vector_is_sine() {
        let sys = assemble_secular_system(&interval(PI, &["a", "b"]), 1.0).unwrap();
        assert_eq!(sys.matrix.shape(), (2, 2));
        assert_eq!(sys.row_kinds, vec![RowKind::Dirichlet, RowKind::Dirichlet]);
        let null = sys.null_vectors(1e-7);
        assert_eq!(null.len(), 1);
        assert_parallel(&null[0], [0.0, 1.0]);
    }

    #[test]
    fn nn_interval_null_vector_is_cosine() {
        let null = assemble_secular_system(&interval(PI, &[]), 1.0)
            .unwrap()
            .null_vectors(1e-7);
        assert_eq!(null.len(), 1);
        assert_parallel(&null[0], [1.0, 0.0]);
    }

    #[test]
    fn loop_has_two_dimensional_kernel() {
        let sys = assemble_secular_system(&loop_graph(2.0 * PI), 1.0).unwrap();
        assert_eq!(sys.nullity(1e-7), 2);
        let sv = sys.singular_values();
        assert!(sv[0] < 1e-12 && sv[1] < 1e-12);
    }

    #[test]
    fn sigma_min_values() {
        let g = interval(PI, &[]);
        assert!(sigma_min(&g, 1.0).unwrap() < 1e-12);
        // Rows [0, 1] and [sin(kπ), -cos(kπ)] = [1, 0] at k = 1/2: identity.
        let s = sigma_min(&g, 0.5).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(s > 0.1);
        assert!(sigma_min(&g, 0.0).is_err());
        assert!(sigma_min(&g, -1.0).is_err());
    }

    #[test]
    fn entries_bounded_and_square() {
        let g = MetricGraph::new(
            vec!["c".into(), "x".into(), "y".into(), "z".into()],
            vec![
                Edge::new("1", "c", "x", Length::Absolute(1.0)),
                Edge::new("2", "c", "y", Length::Absolute(1.3)),
                Edge::new("3", "c", "z", Length::Absolute(0.7)),
                Edge::new("4", "x", "x", Length::Absolute(2.0)),
            ],
            ["y".to_string()],
        )
        .unwrap();
        for k in [0.1, 0.9, 3.7, 12.0] {
            let sys = assemble_secular_system(&g, k).unwrap();
            assert_eq!(sys.matrix.nrows(), 8);
            assert_eq!(sys.matrix.ncols(), 8);
            assert!(sys.matrix.iter().all(|x| x.abs() <= 1.0 + 1e-15));
        }
    }
}
