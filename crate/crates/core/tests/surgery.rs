mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::*;
use lassospec::bounds::*;
use lassospec::graph::{disjoint_union, is_lasso_tree, Length};
use lassospec::solver::*;
use lassospec::surgery::*;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn join_item(g: lassospec::graph::MetricGraph, v: &str) -> JoinItem {
    JoinItem {
        graph: g,
        vertex: v.into(),
        lambda: 1.0,
        n: 1,
        m: 1,
    }
}

#[test]
fn two_dd_intervals_join_to_longer_interval() {
    let dd = || interval(Length::PiMultiple(1.0), &["a", "b"]);
    let r = join_at_dirichlet(&[join_item(dd(), "b"), join_item(dd(), "a")]).unwrap();
    let check = verify_prediction(&r.graph, &r.prediction, 1e-8, &opts()).unwrap();
    assert!(check.ok, "{check:?}");
    assert_eq!(check.observed_first_index, 2);
}

#[test]
fn eight_intervals_join_to_star() {
    let mut items = Vec::new();
    for _ in 0..4 {
        items.push(join_item(interval(Length::PiMultiple(0.5), &["a"]), "a"));
    }
    for _ in 0..4 {
        items.push(join_item(
            interval(Length::PiMultiple(1.0), &["a", "b"]),
            "a",
        ));
    }
    let r = join_at_dirichlet(&items).unwrap();
    let p = &r.prediction;
    assert_eq!((p.predicted_first_index, p.predicted_multiplicity), (2, 7));
    assert_eq!(
        (
            p.predicted_profile.n_dirichlet,
            p.predicted_profile.n_neumann
        ),
        (4, 4)
    );
    let check = verify_prediction(&r.graph, p, 1e-8, &opts()).unwrap();
    assert!(check.ok, "{check:?}");
}

#[test]
fn three_dd_intervals_meet_both_bounds() {
    let dd = || interval(Length::PiMultiple(1.0), &["a", "b"]);
    let r = join_at_dirichlet(&[
        join_item(dd(), "a"),
        join_item(dd(), "a"),
        join_item(dd(), "a"),
    ])
    .unwrap();
    assert!(
        verify_prediction(&r.graph, &r.prediction, 1e-8, &opts())
            .unwrap()
            .ok
    );
    let p = BoundsProfile::from_graph(&r.graph);
    assert_eq!(p.n_dirichlet, 3);
    assert!(rel_close(upper_bound(&p, 2).unwrap(), 1.0, 1e-12));
    assert!(rel_close(lower_bound(&p, 3).unwrap(), 1.0, 1e-12));
}

#[test]
fn neumann_lasso_from_interval() {
    let nn = interval(Length::PiMultiple(1.0), &[]);
    let r = attach_loop(&nn, "b", 1.0, 1, 2, 1).unwrap();
    assert!(
        verify_prediction(&r.graph, &r.prediction, 1e-8, &opts())
            .unwrap()
            .ok
    );
    let p = BoundsProfile::from_graph(&r.graph);
    assert!(rel_close(p.total_length, 3.0 * PI, 1e-12));
    assert!(rel_close(upper_bound(&p, 3).unwrap(), 1.0, 1e-12));
    assert!(rel_close(lower_bound(&p, 4).unwrap(), 1.0, 1e-12));

    let r2 = attach_loop(&nn, "b", 1.0, 2, 2, 1).unwrap();
    let check = verify_prediction(&r2.graph, &r2.prediction, 1e-8, &opts()).unwrap();
    assert!(check.ok, "{check:?}");
    assert_eq!(check.observed_first_index, 5);
}

#[test]
fn theorem_main_instance() {
    let start = Instant::now();
    let c = construct_lasso_tree(2, 4, 2).unwrap();
    assert!(is_lasso_tree(&c.graph));
    let s = spectrum_to_index(&c.graph, 33, &opts()).unwrap();
    for (j, range) in [(1, 4..=12), (2, 24..=32)] {
        let t = c.term(j).unwrap();
        assert_eq!(t.first_index, *range.start());
        let e = s.entry_containing(t.first_index).unwrap();
        assert_eq!(
            (e.first_index, e.last_index()),
            (*range.start(), *range.end())
        );
        assert!(rel_close(e.lambda, t.lambda, 1e-8));
        assert_ne!(t.paper_first_index, t.first_index as i64);
    }
    let p = BoundsProfile::from_graph(&c.graph);
    let r = classify_spectrum(&s, &p, 1e-6).unwrap();
    assert!(r.characterization_ok && r.eq4_ok, "{:?}", r.violations);
    for n in [4, 24] {
        let e = r.entry(n).unwrap();
        assert!(e.sharp_degenerate && e.maximally_degenerate && e.lower_sharp && e.upper_sharp);
    }
    assert!(start.elapsed().as_secs_f64() < 30.0);
}

#[test]
fn windmills() {
    for b in 2..=4 {
        let c = construct_lasso_tree(0, 0, b).unwrap();
        let t = c.term(1).unwrap();
        assert_eq!((t.first_index, t.multiplicity), (b + 2, 2 * b - 1));
        let s = spectrum_to_index(&c.graph, t.first_index + t.multiplicity, &opts()).unwrap();
        let e = s.entry_containing(b + 2).unwrap();
        assert_eq!((e.first_index, e.multiplicity), (b + 2, 2 * b - 1));
        assert!(rel_close(e.lambda, 1.0, 1e-8));
    }
}

#[test]
fn join_interlaces_with_the_union() {
    let a = interval(Length::Absolute(1.3), &["a", "b"]);
    let b = interval(Length::Absolute(0.7), &["b"]);
    // Dumbbell with a Dirichlet tail.
    let c = graph(
        &["a", "b", "t"],
        &[
            ("bridge", "a", "b", Length::Absolute(1.0)),
            ("la", "a", "a", Length::Absolute(1.3)),
            ("lb", "b", "b", Length::Absolute(0.8)),
            ("tail", "a", "t", Length::Absolute(0.9)),
        ],
        &["t"],
    );
    let items = [
        JoinItem {
            graph: a.clone(),
            vertex: "b".into(),
            lambda: 1.0,
            n: 1,
            m: 1,
        },
        JoinItem {
            graph: b.clone(),
            vertex: "b".into(),
            lambda: 1.0,
            n: 1,
            m: 1,
        },
        JoinItem {
            graph: c.clone(),
            vertex: "t".into(),
            lambda: 1.0,
            n: 1,
            m: 1,
        },
    ];
    let joined = join_at_dirichlet(&items).unwrap().graph;
    let union = disjoint_union(&[a, b, c]).unwrap();
    let k = 14.0;
    let u = find_spectrum(&union, k, &opts()).unwrap().eigenvalues();
    let g = find_spectrum(&joined, k, &opts()).unwrap().eigenvalues();
    for j in 2..g.len().min(u.len()) {
        // λ_j(joined) ∈ [λ_{j−1}(union), λ_j(union)], 1-based.
        assert!(
            g[j - 1] >= u[j - 2] * (1.0 - 1e-9) && g[j - 1] <= u[j - 1] * (1.0 + 1e-9),
            "j={j}"
        );
    }
}

#[test]
fn attach_interlaces_with_the_union() {
    // Theta with a pendant edge.
    let g = graph(
        &["a", "b", "p"],
        &[
            ("1", "a", "b", Length::Absolute(1.0)),
            ("2", "a", "b", Length::Absolute(1.4)),
            ("3", "a", "b", Length::Absolute(0.7)),
            ("4", "a", "p", Length::Absolute(0.6)),
        ],
        &[],
    );
    let lambda = 2.3;
    let r = attach_loop(&g, "p", lambda, 1, 1, 1).unwrap();
    let lp = loop_graph(Length::Absolute(loop_length(lambda, 1)));
    let union = disjoint_union(&[g, lp]).unwrap();
    let k = 12.0;
    let u = find_spectrum(&union, k, &opts()).unwrap().eigenvalues();
    let out = find_spectrum(&r.graph, k, &opts()).unwrap().eigenvalues();
    for j in 1..out.len().min(u.len() - 1) {
        // λ_j(output) ∈ [λ_j(union), λ_{j+1}(union)], 1-based.
        assert!(
            out[j - 1] >= u[j - 1] * (1.0 - 1e-9) && out[j - 1] <= u[j] * (1.0 + 1e-9),
            "j={j}"
        );
    }
}

#[test]
fn constructed_trees_attain_both_ceilings() {
    for (n, d, b) in [(2, 0, 0), (0, 3, 0), (1, 1, 1), (0, 0, 3), (3, 2, 1)] {
        let c = construct_lasso_tree(n, d, b).unwrap();
        let p = BoundsProfile::from_graph(&c.graph);
        assert_eq!(
            max_mult_kp(&c.graph),
            max_mult_upper(&p).unwrap(),
            "{n} {d} {b}"
        );
    }
}
