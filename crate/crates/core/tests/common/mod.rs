#![allow(dead_code)]

use passive_battery::{DiagonalState, EnergySpectrum, QubitBattery, Rational};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Non-increasing integer weights in `0..=max`, at least one positive.
fn passive_weights(rng: &mut ChaCha20Rng, d: usize, max: i128) -> Vec<i128> {
    loop {
        let mut w: Vec<i128> = (0..d).map(|_| rng.random_range(0..=max)).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        if w[0] > 0 {
            return w;
        }
    }
}

pub fn exact_passive(rng: &mut ChaCha20Rng, d: usize) -> DiagonalState<Rational> {
    let w = passive_weights(rng, d, 60);
    let total: i128 = w.iter().sum();
    DiagonalState::on_ladder(w.into_iter().map(|x| Rational::new(x, total)).collect()).unwrap()
}

pub fn exact_battery(rng: &mut ChaCha20Rng) -> QubitBattery<Rational> {
    let w = passive_weights(rng, 2, 60);
    let total = w[0] + w[1];
    QubitBattery::new(Rational::new(w[0], total), Rational::new(w[1], total)).unwrap()
}

pub fn simplex(rng: &mut ChaCha20Rng, d: usize) -> Vec<f64> {
    let x: Vec<f64> = (0..d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = x.iter().sum();
    x.into_iter().map(|v| v / total).collect()
}

pub fn passive_probs(rng: &mut ChaCha20Rng, d: usize) -> Vec<f64> {
    let mut q = simplex(rng, d);
    q.sort_by(|a, b| b.total_cmp(a));
    q
}

pub fn passive(rng: &mut ChaCha20Rng, d: usize) -> DiagonalState<f64> {
    DiagonalState::on_ladder(passive_probs(rng, d)).unwrap()
}

pub fn battery(rng: &mut ChaCha20Rng) -> QubitBattery<f64> {
    let p1 = rng.random_range(0.0..0.5);
    QubitBattery::new(1.0 - p1, p1).unwrap()
}

/// Passive state on random small-integer levels, so that degenerate shells occur.
pub fn passive_on_random_levels(rng: &mut ChaCha20Rng, d: usize) -> DiagonalState<f64> {
    let mut levels: Vec<f64> = (0..d).map(|_| rng.random_range(0..4) as f64).collect();
    levels.sort_by(|a, b| a.total_cmp(b));
    let spectrum = EnergySpectrum::new(levels).unwrap();
    DiagonalState::new(passive_probs(rng, d), spectrum).unwrap()
}
