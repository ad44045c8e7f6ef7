use itertools::Itertools;
use passive_battery::charging::{
    brute_force_charge, charging_possible, classical_stochastic_map, delta_full_cascade,
    excited_population_with_rotation, optimal_charge, quantum_stochastic_map, reachable_excited_range,
    supercharge_feasible, thermal_delta,
};
use passive_battery::{majorizes, DiagonalState, EnergySpectrum, QubitBattery};
use proptest::prelude::*;

fn passive(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, d)
        .prop_filter("non-zero", |w| w.iter().sum::<f64>() > 1e-3)
        .prop_map(|w| {
            let total: f64 = w.iter().sum();
            let mut q: Vec<f64> = w.into_iter().map(|x| x / total).collect();
            q.sort_by(|a, b| b.total_cmp(a));
            q
        })
}

fn charger() -> impl Strategy<Value = DiagonalState<f64>> {
    (2usize..6)
        .prop_flat_map(passive)
        .prop_map(|q| DiagonalState::on_ladder(q).unwrap())
}

fn battery() -> impl Strategy<Value = QubitBattery<f64>> {
    (0.0f64..=0.5).prop_map(|p1| QubitBattery::new(1.0 - p1, p1).unwrap())
}

fn on_levels() -> impl Strategy<Value = DiagonalState<f64>> {
    (2usize..6)
        .prop_flat_map(|d| (passive(d), prop::collection::vec(0u8..4, d)))
        .prop_map(|(q, levels)| {
            let mut levels: Vec<f64> = levels.into_iter().map(f64::from).collect();
            levels.sort_by(|a, b| a.total_cmp(b));
            DiagonalState::new(q, EnergySpectrum::new(levels).unwrap()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sort_assignment_matches_exhaustive_search(b in battery(), c in prop_oneof![charger(), on_levels()]) {
        let fast = optimal_charge(&b, &c);
        let slow = brute_force_charge(&b, &c).unwrap();
        prop_assert_eq!(fast.delta, slow.delta);
        prop_assert_eq!(fast.final_battery, slow.final_battery);
    }

    #[test]
    fn positive_charge_iff_predicate(b in battery(), c in charger()) {
        let delta = optimal_charge(&b, &c).delta;
        prop_assert!(delta >= 0.0);
        prop_assert_eq!(delta > 0.0, charging_possible(&b, &c).unwrap());
    }

    #[test]
    fn more_mixed_chargers_charge_more_under_full_cascade(
        q in (2usize..6).prop_flat_map(passive).prop_filter("full support", |q| q.iter().all(|&x| x > 1e-3)),
        lambda in 0.0f64..=1.0,
        slack in 0.0f64..2.0,
    ) {
        let c = DiagonalState::on_ladder(q.clone()).unwrap();
        let mixed = c.mix(&DiagonalState::uniform(q.len()), lambda).unwrap();
        prop_assert!(majorizes(&c, &mixed).unwrap());
        let ratio = q.windows(2).map(|w| w[0] / w[1]).fold(0.0, f64::max) * (1.0 + slack);
        let b = QubitBattery::new(ratio / (1.0 + ratio), 1.0 / (1.0 + ratio)).unwrap();
        let sharp = delta_full_cascade(&b, &c).unwrap();
        let flat = delta_full_cascade(&b, &mixed).unwrap();
        prop_assert!(flat >= sharp - 1e-12);
        prop_assert!((sharp - optimal_charge(&b, &c).delta).abs() <= 1e-12);
    }

    #[test]
    fn hotter_thermal_chargers_charge_more(p1 in 0.0f64..0.11, d in 2usize..7) {
        let b = QubitBattery::new(1.0 - p1, p1).unwrap();
        let mut previous = f64::NEG_INFINITY;
        for j in (1..=20).rev() {
            let delta = thermal_delta(&b, j as f64 / 10.0, d).unwrap().delta;
            prop_assert!(delta > previous);
            previous = delta;
        }
    }

    #[test]
    fn coherent_rotations_never_beat_the_endpoints(b in battery(), c in charger(), alpha in 0.0f64..std::f64::consts::FRAC_PI_2) {
        for k in 1..c.dim() {
            let at = excited_population_with_rotation(&b, &c, k, alpha).unwrap();
            let swap = excited_population_with_rotation(&b, &c, k, 0.0).unwrap();
            let idle = excited_population_with_rotation(&b, &c, k, std::f64::consts::FRAC_PI_2).unwrap();
            prop_assert!(at <= swap.max(idle) + 1e-15);
            prop_assert!(at >= swap.min(idle) - 1e-15);
        }
    }

    #[test]
    fn classical_maps_respect_the_passive_constraint(c in charger()) {
        for swaps in (1..c.dim()).powerset() {
            let map = classical_stochastic_map(&c, &swaps).unwrap();
            prop_assert!(map.respects_passive_constraint());
            prop_assert!(map.b >= 1.0 - map.a - 1e-15);
        }
    }

    #[test]
    fn free_chargers_form_a_convex_set(
        p1 in 0.01f64..=0.5,
        d in 2usize..6,
        u in prop::collection::vec(0.0f64..=1.0, 5),
        v in prop::collection::vec(0.0f64..=1.0, 5),
    ) {
        let b = QubitBattery::new(1.0 - p1, p1).unwrap();
        let ratio = b.p0() / b.p1();
        let c = free_charger(ratio, &u[..d - 1]);
        let other = free_charger(ratio, &v[..d - 1]);
        prop_assert!(!charging_possible(&b, &c).unwrap() && !charging_possible(&b, &other).unwrap());
        for j in 0..=20 {
            let mix = c.mix(&other, j as f64 / 20.0).unwrap();
            prop_assert!(!charging_possible(&b, &mix).unwrap());
        }
    }

    #[test]
    fn passive_ancillas_never_supercharge(b in battery(), c in charger()) {
        prop_assert!(!supercharge_feasible(&b, &c).unwrap());
        let (low, high) = reachable_excited_range(&b, &c).unwrap();
        prop_assert!(low <= b.p1() && b.p1() <= high);
        prop_assert!((high - optimal_charge(&b, &c).final_battery.p1()).abs() <= 1e-12);
    }
}

/// Charger with every ratio `q_k / q_{k+1}` at least `ratio`.
fn free_charger(ratio: f64, shrink: &[f64]) -> DiagonalState<f64> {
    let mut q = vec![1.0];
    for &s in shrink {
        q.push(q[q.len() - 1] * s / ratio);
    }
    let total: f64 = q.iter().sum();
    DiagonalState::on_ladder(q.into_iter().map(|x| x / total).collect()).unwrap()
}

#[test]
fn intermediate_angles_reach_states_no_exchange_reaches() {
    let b = QubitBattery::new(0.8, 0.2).unwrap();
    let c = DiagonalState::on_ladder(vec![0.5, 0.3, 0.2]).unwrap();
    let classical: Vec<f64> = (1..3)
        .powerset()
        .map(|s| classical_stochastic_map(&c, &s).unwrap().apply(&b).p1())
        .collect();
    for j in 1..9 {
        let alpha = j as f64 * std::f64::consts::PI / 18.0;
        let p1 = quantum_stochastic_map(&c, &[(1, alpha)]).unwrap().apply(&b).p1();
        assert!(classical.iter().all(|&x| (x - p1).abs() > 1e-6), "alpha {alpha}");
    }
}
