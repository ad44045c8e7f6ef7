mod common;

use passive_battery::geometry::{
    detect_active, evaluate_witness, facet_witnesses, gibbs_parameter, is_passive, on_boundary, polytope_vertices,
    vertex_decomposition,
};
use passive_battery::{DiagonalState, EnergySpectrum, InverseTemperature, Rational};
use proptest::prelude::*;

fn simplex(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, d)
        .prop_filter("non-zero", |w| w.iter().sum::<f64>() > 1e-3)
        .prop_map(|w| {
            let total: f64 = w.iter().sum();
            w.into_iter().map(|x| x / total).collect()
        })
}

fn any_state() -> impl Strategy<Value = Vec<f64>> {
    (2usize..7).prop_flat_map(simplex)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn witness_detection_matches_passivity(q in any_state()) {
        let s = DiagonalState::on_ladder(q).unwrap();
        prop_assert_eq!(detect_active(&s).is_none(), is_passive(&s));
        if let Some(w) = detect_active(&s) {
            prop_assert!(evaluate_witness(&w, &s).unwrap() < 0.0);
        }
    }

    #[test]
    fn decomposition_reconstructs_sorted_states(mut q in any_state()) {
        q.sort_by(|a, b| b.total_cmp(a));
        let d = q.len();
        let s = DiagonalState::on_ladder(q.clone()).unwrap();
        let weights = vertex_decomposition(&s).unwrap();
        prop_assert!(weights.iter().all(|&w| w >= -1e-15));
        prop_assert!((weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let back = polytope_vertices::<f64>(d).unwrap().combine(&weights).unwrap();
        for (a, b) in back.iter().zip(&q) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn passive_states_satisfy_every_facet_witness(mut q in any_state()) {
        q.sort_by(|a, b| b.total_cmp(a));
        let d = q.len();
        let s = DiagonalState::on_ladder(q).unwrap();
        for w in facet_witnesses::<f64>(d).unwrap() {
            prop_assert!(evaluate_witness(&w, &s).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn thermal_states_are_interior(d in 2usize..7, beta in 0.01f64..20.0) {
        let g = DiagonalState::gibbs(EnergySpectrum::ladder(d), beta);
        let weights = vertex_decomposition(&g).unwrap();
        prop_assert!(weights.iter().all(|&w| w > 0.0));
        if beta < 3.0 {
            prop_assert!(!on_boundary(&g).unwrap());
        }
        let recovered = gibbs_parameter(&g).unwrap().finite().unwrap();
        prop_assert!((recovered - beta).abs() <= 1e-9 * beta.max(1.0));
    }

    #[test]
    fn thermal_points_on_facets_are_the_extreme_temperatures(d in 3usize..7, drop in 0usize..6, raw in simplex(6)) {
        // A point of the facet opposite vertex `drop` (barycentric weight zero there).
        let drop = drop % d;
        let mut weights: Vec<f64> = raw[..d].to_vec();
        weights[drop] = 0.0;
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 1e-6);
        let weights: Vec<f64> = weights.into_iter().map(|w| w / total).collect();
        let q = polytope_vertices::<f64>(d).unwrap().combine(&weights).unwrap();
        let s = DiagonalState::on_ladder(q).unwrap();
        if let Some(beta) = gibbs_parameter(&s) {
            prop_assert!(beta == InverseTemperature::Infinite || beta == InverseTemperature::Finite(0.0));
        }
    }
}

#[test]
fn each_facet_witness_is_tight_on_all_but_one_vertex() {
    for d in 2..8 {
        let witnesses = facet_witnesses::<Rational>(d).unwrap();
        assert_eq!(witnesses.len(), d);
        let vertices = polytope_vertices::<Rational>(d).unwrap().as_states();
        for w in &witnesses {
            let tight = vertices
                .iter()
                .filter(|v| evaluate_witness(w, v).unwrap() == Rational::from_integer(0))
                .count();
            assert_eq!(tight, d - 1, "{w}");
        }
    }
}

#[test]
fn random_active_states_are_detected() {
    let mut sampler = passive_battery::sampling::Sampler::new(5);
    for d in 2..=6 {
        for _ in 0..2000 {
            let s = sampler.active_diagonal(d).unwrap();
            assert!(detect_active(&s).is_some());
        }
    }
}
