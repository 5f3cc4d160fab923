#![allow(dead_code)]

use lassospec::graph::{Edge, Length, MetricGraph};

pub fn graph(vs: &[&str], es: &[(&str, &str, &str, Length)], d: &[&str]) -> MetricGraph {
    MetricGraph::new(
        vs.iter().map(|s| s.to_string()).collect(),
        es.iter()
            .map(|(id, a, b, l)| Edge::new(*id, *a, *b, *l))
            .collect(),
        d.iter().map(|s| s.to_string()),
    )
    .unwrap()
}

pub fn interval(length: Length, dirichlet: &[&str]) -> MetricGraph {
    graph(&["a", "b"], &[("e", "a", "b", length)], dirichlet)
}

pub fn loop_graph(length: Length) -> MetricGraph {
    graph(&["v"], &[("l", "v", "v", length)], &[])
}

pub fn dumbbell() -> MetricGraph {
    graph(
        &["a", "b"],
        &[
            ("bridge", "a", "b", Length::Absolute(1.0)),
            ("la", "a", "a", Length::Absolute(1.3)),
            ("lb", "b", "b", Length::Absolute(0.8)),
        ],
        &[],
    )
}

pub fn theta() -> MetricGraph {
    graph(
        &["a", "b"],
        &[
            ("1", "a", "b", Length::Absolute(1.0)),
            ("2", "a", "b", Length::Absolute(1.4)),
            ("3", "a", "b", Length::Absolute(0.7)),
        ],
        &[],
    )
}

pub fn figure_eight() -> MetricGraph {
    graph(
        &["v"],
        &[
            ("1", "v", "v", Length::Absolute(1.0)),
            ("2", "v", "v", Length::Absolute(1.7)),
        ],
        &[],
    )
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Random tree on 2..=7 vertices plus `extra` loops or chords, lengths in
/// [0.5, 2]. With `dirichlet` set, each pendant becomes Dirichlet with
/// probability 1/3.
pub fn random_graph<R: rand::Rng>(rng: &mut R, extra: usize, dirichlet: bool) -> MetricGraph {
    let n = rng.gen_range(2..=7);
    let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 1..n {
        let p = rng.gen_range(0..i);
        edges.push((p, i));
    }
    for _ in 0..extra {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    let edges: Vec<Edge> = edges
        .into_iter()
        .enumerate()
        .map(|(k, (a, b))| {
            Edge::new(
                format!("e{k}"),
                vs[a].clone(),
                vs[b].clone(),
                Length::Absolute(rng.gen_range(0.5..2.0)),
            )
        })
        .collect();
    let probe = MetricGraph::new(vs.clone(), edges.clone(), []).unwrap();
    let d: Vec<String> = if dirichlet {
        probe
            .degrees()
            .into_iter()
            .filter(|&(_, deg)| deg == 1)
            .map(|(v, _)| v.to_string())
            .filter(|_| rng.gen_range(0..3) == 0)
            .collect()
    } else {
        vec![]
    };
    MetricGraph::new(vs, edges, d).unwrap()
}
