//! Data behind the plots: entropy pollution over the three-level passive
//! triangle, charging amount against charger entropy at fixed energy, and
//! thermo-majorization curves of a battery against the maximally mixed qubit.

use crate::activation::thermo_majorization_curve;
use crate::charging::{entropy_pollution, optimal_charge};
use crate::error::{Error, Result};
use crate::geometry::polytope_vertices;
use crate::sampling::sample_fixed_energy_batch;
use crate::state::{mean_energy, shannon_entropy, DiagonalState, QubitBattery};

#[derive(Debug, Clone, PartialEq)]
pub struct PollutionPoint {
    /// Barycentric weights on the vertices `e1, e2, e3`.
    pub weights: [f64; 3],
    pub charger: [f64; 3],
    pub delta_entropy: f64,
    pub delta_energy: f64,
    /// `NaN` where the charger cannot charge the battery.
    pub pollution: f64,
}

/// Entropy pollution on the triangular grid `c = (i, j, N - i - j) / N` over
/// the passive polytope of `ladder(3)`.
pub fn pollution_grid(battery: &QubitBattery<f64>, resolution: usize) -> Result<Vec<PollutionPoint>> {
    if resolution == 0 {
        return Err(Error::InvalidArgument("grid resolution must be positive".into()));
    }
    let vertices = polytope_vertices::<f64>(3)?;
    let n = resolution as f64;
    let mut points = Vec::new();
    for i in 0..=resolution {
        for j in 0..=resolution - i {
            let weights = [i as f64 / n, j as f64 / n, (resolution - i - j) as f64 / n];
            let q = vertices.combine(&weights)?;
            let charger = DiagonalState::on_ladder(q.clone())?;
            let point = match entropy_pollution(battery, &charger) {
                Ok(p) => (p.delta_entropy, p.delta_energy, p.ratio),
                Err(Error::Precondition(_)) => (0.0, 0.0, f64::NAN),
                Err(e) => return Err(e),
            };
            points.push(PollutionPoint {
                weights,
                charger: [q[0], q[1], q[2]],
                delta_entropy: point.0,
                delta_energy: point.1,
                pollution: point.2,
            });
        }
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacitySample {
    pub charger: Vec<f64>,
    pub entropy: f64,
    pub energy: f64,
    pub delta: f64,
}

/// Random fixed-energy passive chargers on `ladder(d)` with their entropy and
/// optimal charging amount for `battery`.
pub fn capacity_samples(
    battery: &QubitBattery<f64>,
    energy: f64,
    count: usize,
    d: usize,
    seed: u64,
) -> Result<Vec<CapacitySample>> {
    let chargers = sample_fixed_energy_batch(d, energy, count, seed)?;
    Ok(chargers
        .into_iter()
        .map(|c| CapacitySample {
            entropy: shannon_entropy(&c),
            energy: mean_energy(&c),
            delta: optimal_charge(battery, &c).delta,
            charger: c.probs().to_vec(),
        })
        .collect())
}

/// Pairs of samples whose entropies agree within `entropy_tolerance` but whose
/// charging amounts differ by more than `min_delta_gap`. At most one pair per
/// sample is reported, matched against its neighbours in entropy order.
pub fn entropy_collisions(
    samples: &[CapacitySample],
    entropy_tolerance: f64,
    min_delta_gap: f64,
) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&a, &b| samples[a].entropy.total_cmp(&samples[b].entropy));
    let mut pairs = Vec::new();
    for (pos, &a) in order.iter().enumerate() {
        let partner = order[pos + 1..]
            .iter()
            .take_while(|&&b| samples[b].entropy - samples[a].entropy <= entropy_tolerance)
            .find(|&&b| (samples[b].delta - samples[a].delta).abs() > min_delta_gap);
        if let Some(&b) = partner {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    pairs
}

/// Which polyline a Lorenz point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LorenzCurve {
    Battery,
    MaximallyMixed,
}

impl LorenzCurve {
    pub fn label(self) -> &'static str {
        match self {
            LorenzCurve::Battery => "battery",
            LorenzCurve::MaximallyMixed => "mixed",
        }
    }
}

/// Thermo-majorization polylines of the battery and of `(1/2, 1/2)` at `beta`.
pub fn lorenz_data(battery: &QubitBattery<f64>, beta: f64) -> Result<Vec<(LorenzCurve, f64, f64)>> {
    let state = battery.as_state();
    let mixed = QubitBattery::with_gap(0.5, 0.5, battery.gap())?.as_state();
    let mut rows = Vec::new();
    for (label, s) in [(LorenzCurve::Battery, state), (LorenzCurve::MaximallyMixed, mixed)] {
        let curve = thermo_majorization_curve(&s, beta)?;
        rows.extend(curve.points().iter().map(|&(x, y)| (label, x, y)));
    }
    Ok(rows)
}
