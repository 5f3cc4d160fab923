mod common;

use std::f64::consts::PI;

use common::*;
use lassospec::bounds::*;
use lassospec::graph::{is_lasso_tree, is_loop_graph, Length};
use lassospec::solver::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn computed_spectra_respect_bounds(seed in any::<u64>(), extra in 0usize..4) {
        let g = random_graph(&mut StdRng::seed_from_u64(seed), extra, true);
        prop_assume!(!is_loop_graph(&g));
        let p = BoundsProfile::from_graph(&g);
        let s = spectrum_to_index(&g, 12, &opts()).unwrap();
        let r = classify_spectrum(&s, &p, 1e-6).unwrap();
        prop_assert!(r.characterization_ok && r.eq4_ok, "{:?}", r.violations);
        let ceiling = max_mult_upper(&p).unwrap().min(max_mult_kp(&g));
        prop_assert!(s.entries.iter().all(|e| e.multiplicity <= ceiling));
        prop_assert_eq!(is_lasso_tree(&g), max_mult_kp(&g) == max_mult_upper(&p).unwrap());
    }
}

proptest! {
    #[test]
    fn estimates_increase_strictly(n in 0usize..8, d in 0usize..8, b in 0usize..8) {
        let p = BoundsProfile::from_counts(1.0, n, d, b);
        prop_assume!(p.is_admissible());
        for k in 1..=100 {
            if k >= 2 || d > 0 {
                prop_assert!(lower_term_doubled(&p, k).abs() < lower_term_doubled(&p, k + 1).abs());
            }
            prop_assert!(upper_term_doubled(&p, k).abs() < upper_term_doubled(&p, k + 1).abs());
        }
    }
}

#[test]
fn dd_interval_is_all_simple_sharp() {
    let g = interval(Length::PiMultiple(1.0), &["a", "b"]);
    let s = spectrum_to_index(&g, 10, &opts()).unwrap();
    let r = classify_spectrum(&s, &BoundsProfile::from_graph(&g), 1e-6).unwrap();
    assert!(r.entries.iter().all(|e| e.simple_sharp));
    assert!(r.characterization_ok && r.eq4_ok);
    assert_eq!(r.max_mult_upper, 1);
}

#[test]
fn nn_interval_ground_state_counts_as_sharp() {
    let g = interval(Length::Absolute(2.0), &[]);
    let s = spectrum_to_index(&g, 6, &opts()).unwrap();
    let r = classify_spectrum(&s, &BoundsProfile::from_graph(&g), 1e-6).unwrap();
    assert!(r.entries[0].upper_sharp && r.entries[0].simple_sharp);
    assert!(r.entries.iter().all(|e| e.simple_sharp));
    assert!(r.characterization_ok);
}

#[test]
fn loop_graph_is_exceptional() {
    let g = loop_graph(Length::PiMultiple(2.0));
    let s = find_spectrum(&g, 3.0, &opts()).unwrap();
    let p = BoundsProfile::from_graph(&g);
    assert!(p.is_cycle_exceptional);
    assert_eq!(
        classify_spectrum(&s, &p, 1e-6).unwrap_err(),
        BoundsError::Exceptional
    );
    assert_eq!(
        BoundsError::Exceptional.to_string(),
        "exceptional: loop graph"
    );
}

#[test]
fn subdivided_loop_is_still_exceptional() {
    let g = graph(
        &["a", "b"],
        &[
            ("1", "a", "b", Length::Absolute(1.0)),
            ("2", "b", "a", Length::Absolute(2.0)),
        ],
        &[],
    );
    assert!(BoundsProfile::from_graph(&g).is_cycle_exceptional);
}

#[test]
fn ceilings_on_named_graphs() {
    assert_eq!(max_mult_kp(&dumbbell()), 3);
    assert_eq!(max_mult_kp(&theta()), 2);
    assert_eq!(
        max_mult_upper(&BoundsProfile::from_graph(&dumbbell())).unwrap(),
        3
    );
    let star = graph(
        &["c", "x", "y", "z", "w"],
        &[
            ("1", "c", "x", Length::Absolute(1.0)),
            ("2", "c", "y", Length::Absolute(1.0)),
            ("3", "c", "z", Length::Absolute(1.0)),
            ("4", "c", "w", Length::Absolute(1.0)),
        ],
        &[],
    );
    assert_eq!(max_mult_kp(&star), 3);
}

#[test]
fn equal_star_reaches_ceiling_and_is_flagged_sharp() {
    // Star of three π edges with Neumann ends: λ = 1/4 (cos vanishing at the
    // centre) has multiplicity 2 = m_U, and M_2 = (1/9)(3/2)² = m_3 = 1/4.
    let g = graph(
        &["c", "x", "y", "z"],
        &[
            ("1", "c", "x", Length::PiMultiple(1.0)),
            ("2", "c", "y", Length::PiMultiple(1.0)),
            ("3", "c", "z", Length::PiMultiple(1.0)),
        ],
        &[],
    );
    let p = BoundsProfile::from_graph(&g);
    assert!(rel_close(p.total_length, 3.0 * PI, 1e-12));
    let s = spectrum_to_index(&g, 8, &opts()).unwrap();
    let r = classify_spectrum(&s, &p, 1e-6).unwrap();
    let e = r
        .entries
        .iter()
        .find(|e| rel_close(e.lambda, 0.25, 1e-9))
        .unwrap();
    assert_eq!((e.n, e.m), (2, 2));
    assert!(e.sharp_degenerate && e.maximally_degenerate, "{e:?}");
    assert!(r.characterization_ok && r.eq4_ok, "{:?}", r.violations);
}
