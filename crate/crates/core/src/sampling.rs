//! Random passive and active diagonal states.
//!
//! Every generator is a ChaCha20 stream keyed by a 64-bit seed. Batches are cut
//! into fixed blocks, each drawn from its own stream of the same key, so batch
//! output does not depend on how many threads run it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::is_passive;
use crate::state::DiagonalState;

/// Samples per independently seeded block in batch generation.
pub const BLOCK_SIZE: usize = 4096;
/// Rejection attempts allowed for a single fixed-energy draw.
pub const MAX_REJECTIONS: usize = 10_000_000;

const ENERGY_SLACK: f64 = 1e-12;

/// A reproducible stream of random states.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha20Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent stream `stream` under the same seed.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Uniform point of the probability simplex (normalised exponentials).
    pub fn simplex(&mut self, d: usize) -> Vec<f64> {
        let draws: Vec<f64> = (0..d).map(|_| self.rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        draws.into_iter().map(|x| x / total).collect()
    }

    /// Uniform on the passive polytope of `ladder(d)`: a uniform simplex point
    /// sorted into non-increasing order.
    pub fn passive(&mut self, d: usize) -> Result<DiagonalState<f64>> {
        require_dim(d)?;
        let mut q = self.simplex(d);
        q.sort_by(|a, b| b.total_cmp(a));
        DiagonalState::on_ladder(q)
    }

    /// Uniform on the slice of the passive polytope of `ladder(d)` with mean
    /// energy `energy`.
    ///
    /// `q_2, ..., q_{d-1}` are drawn from the box `q_i <= min(1/(i+1), 2E/(i(i+1)))`
    /// that contains the slice; `q_1` and `q_0` are solved from the energy and
    /// normalisation constraints and non-passive points are rejected.
    pub fn passive_fixed_energy(&mut self, d: usize, energy: f64) -> Result<DiagonalState<f64>> {
        require_dim(d)?;
        let max_energy = (d - 1) as f64 / 2.0;
        if !(energy >= 0.0 && energy <= max_energy + ENERGY_SLACK) {
            return Err(Error::Precondition(format!(
                "energy {energy} outside the passive range [0, {max_energy}]"
            )));
        }
        if energy >= max_energy - ENERGY_SLACK {
            return Ok(DiagonalState::uniform(d));
        }
        let bounds: Vec<f64> = (2..d)
            .map(|i| {
                let i = i as f64;
                (1.0 / (i + 1.0)).min(2.0 * energy / (i * (i + 1.0)))
            })
            .collect();
        for _ in 0..MAX_REJECTIONS {
            let upper: Vec<f64> = bounds.iter().map(|&b| b * self.rng.random::<f64>()).collect();
            let q1 = energy - upper.iter().enumerate().map(|(j, &x)| (j + 2) as f64 * x).sum::<f64>();
            let q0 = 1.0 - q1 - upper.iter().sum::<f64>();
            let mut q = Vec::with_capacity(d);
            q.push(q0);
            q.push(q1);
            q.extend(upper);
            if q.iter().all(|&x| x >= 0.0) && q.windows(2).all(|w| w[0] >= w[1]) {
                return DiagonalState::on_ladder(q);
            }
        }
        Err(Error::Precondition(format!(
            "no passive state with energy {energy} found after {MAX_REJECTIONS} draws"
        )))
    }

    /// Uniform simplex point conditioned on not being passive.
    pub fn active_diagonal(&mut self, d: usize) -> Result<DiagonalState<f64>> {
        require_dim(d)?;
        loop {
            let state = DiagonalState::on_ladder(self.simplex(d))?;
            if !is_passive(&state) {
                return Ok(state);
            }
        }
    }
}

fn require_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::DimensionTooSmall(d, 2))
    } else {
        Ok(())
    }
}

pub fn sample_passive(d: usize, seed: u64) -> Result<DiagonalState<f64>> {
    Sampler::new(seed).passive(d)
}

pub fn sample_passive_fixed_energy(d: usize, energy: f64, seed: u64) -> Result<DiagonalState<f64>> {
    Sampler::new(seed).passive_fixed_energy(d, energy)
}

pub fn sample_active_diagonal(d: usize, seed: u64) -> Result<DiagonalState<f64>> {
    Sampler::new(seed).active_diagonal(d)
}

/// Draws `count` samples in parallel; sample `i` comes from stream
/// `i / BLOCK_SIZE`, so the result is identical for any thread count.
pub fn batch<T, F>(count: usize, seed: u64, draw: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut Sampler) -> Result<T> + Sync,
{
    let blocks = count.div_ceil(BLOCK_SIZE);
    let chunks: Result<Vec<Vec<T>>> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut sampler = Sampler::with_stream(seed, block as u64);
            let len = BLOCK_SIZE.min(count - block * BLOCK_SIZE);
            (0..len).map(|_| draw(&mut sampler)).collect()
        })
        .collect();
    Ok(chunks?.into_iter().flatten().collect())
}

pub fn sample_passive_batch(d: usize, count: usize, seed: u64) -> Result<Vec<DiagonalState<f64>>> {
    require_dim(d)?;
    batch(count, seed, |s| s.passive(d))
}

pub fn sample_fixed_energy_batch(d: usize, energy: f64, count: usize, seed: u64) -> Result<Vec<DiagonalState<f64>>> {
    require_dim(d)?;
    batch(count, seed, |s| s.passive_fixed_energy(d, energy))
}

pub fn sample_active_batch(d: usize, count: usize, seed: u64) -> Result<Vec<DiagonalState<f64>>> {
    require_dim(d)?;
    batch(count, seed, |s| s.active_diagonal(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::detect_active;
    use crate::state::mean_energy;

    #[test]
    fn passive_samples_are_passive_and_reproducible() {
        for seed in 0..50 {
            let s = sample_passive(4, seed).unwrap();
            assert!(is_passive(&s));
            assert_eq!(s, sample_passive(4, seed).unwrap());
        }
        assert_ne!(sample_passive(4, 1).unwrap(), sample_passive(4, 2).unwrap());
        assert!(sample_passive(1, 0).is_err());
    }

    #[test]
    fn fixed_energy_slice_for_three_levels() {
        for seed in 0..200 {
            let s = sample_passive_fixed_energy(3, 0.5, seed).unwrap();
            let q = s.probs();
            assert!(is_passive(&s));
            assert!((mean_energy(&s) - 0.5).abs() <= 1e-12);
            assert!(q[2] >= 0.0 && q[2] <= 1.0 / 6.0 + 1e-15);
            assert!((q[1] - (0.5 - 2.0 * q[2])).abs() < 1e-15);
            assert!((q[0] - (0.5 + q[2])).abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_energy_edges() {
        assert_eq!(
            sample_passive_fixed_energy(4, 0.0, 3).unwrap().probs(),
            &[1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            sample_passive_fixed_energy(3, 1.0, 3).unwrap(),
            DiagonalState::uniform(3)
        );
        assert!(matches!(
            sample_passive_fixed_energy(3, 1.1, 3),
            Err(Error::Precondition(_))
        ));
        assert!(sample_passive_fixed_energy(3, -0.1, 3).is_err());
        let s = sample_passive_fixed_energy(2, 0.3, 3).unwrap();
        assert!((s.probs()[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn active_samples_trigger_a_witness() {
        for seed in 0..50 {
            let s = sample_active_diagonal(3, seed).unwrap();
            assert!(detect_active(&s).is_some());
            let q = sample_active_diagonal(2, seed).unwrap();
            assert!(q.probs()[1] > q.probs()[0]);
        }
    }

    #[test]
    fn batches_do_not_depend_on_thread_count() {
        let count = 2 * BLOCK_SIZE + 17;
        let reference = sample_passive_batch(3, count, 9).unwrap();
        for threads in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let again = pool.install(|| sample_passive_batch(3, count, 9).unwrap());
            assert_eq!(again, reference);
        }
        assert_eq!(reference[0], sample_passive(3, 9).unwrap());
    }
}
