//! Single-copy charging of a qubit battery by a passive ancilla under
//! energy-conserving unitaries.
//!
//! An energy-conserving unitary can only mix joint basis states of equal total
//! energy. Within such a shell, the battery's excited population is maximised
//! by putting the largest populations into the battery-excited slots, so the
//! optimum is a permutation and coherent rotations never beat it.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::scalar::{at_least, canonical_sum, exceeds, sum, Real, Scalar};
use crate::state::{entropy_of, DiagonalState, EnergySpectrum, JointDiagonalState, QubitBattery};

/// Joint dimension accepted by [`brute_force_charge`].
pub const BRUTE_FORCE_JOINT_CAP: usize = 10_000;
/// Largest degenerate shell [`brute_force_charge`] will permute.
pub const BRUTE_FORCE_SHELL_CAP: usize = 8;

/// Outcome of a charging protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeResult<T> {
    pub initial: QubitBattery<T>,
    pub final_battery: QubitBattery<T>,
    /// Increase of the excited population.
    pub delta: T,
    /// Charger indices `k` whose `|0,k>` population was moved into a
    /// battery-excited slot (on a ladder: the `|0,k> <-> |1,k-1>` exchanges).
    pub swapped_pairs: Vec<usize>,
}

impl<T: Scalar> ChargeResult<T> {
    /// Builds the result from the summed per-shell gains, so that a protocol
    /// without profitable exchanges reports exactly zero.
    pub(crate) fn from_gain(initial: QubitBattery<T>, delta: T, mut swapped_pairs: Vec<usize>) -> Self {
        let final_battery = QubitBattery::from_parts(initial.p0() - delta, initial.p1() + delta, initial.gap());
        swapped_pairs.sort_unstable();
        Self {
            initial,
            final_battery,
            delta,
            swapped_pairs,
        }
    }

    /// Energy gained by the battery, `delta * gap`.
    pub fn energy_gain(&self) -> T {
        self.delta * self.initial.gap()
    }
}

struct ShellOutcome<T> {
    gain: T,
    swapped: Vec<usize>,
}

fn excited_populations<T: Scalar>(joint: &JointDiagonalState<T>, shell: &[usize]) -> Vec<T> {
    let entries = joint.entries();
    shell
        .iter()
        .filter(|&&i| entries[i].battery_index == 1)
        .map(|&i| entries[i].probability)
        .collect()
}

fn sort_shell_assignment<T: Scalar>(joint: &JointDiagonalState<T>, shell: &[usize]) -> ShellOutcome<T> {
    let entries = joint.entries();
    let current = excited_populations(joint, shell);
    let slots = current.len();
    // Largest populations first; on ties prefer slots that are already excited.
    let mut ranked = shell.to_vec();
    ranked.sort_by(|&a, &b| {
        entries[b]
            .probability
            .partial_cmp(&entries[a].probability)
            .expect("comparable probabilities")
            .then(entries[b].battery_index.cmp(&entries[a].battery_index))
    });
    let top = &ranked[..slots];
    let best = canonical_sum(top.iter().map(|&i| entries[i].probability).collect());
    let current_mass = canonical_sum(current);
    if exceeds(best, current_mass) {
        ShellOutcome {
            gain: best - current_mass,
            swapped: top
                .iter()
                .filter(|&&i| entries[i].battery_index == 0)
                .map(|&i| entries[i].charger_index)
                .collect(),
        }
    } else {
        ShellOutcome {
            gain: T::zero(),
            swapped: Vec::new(),
        }
    }
}

/// Maximal excited population reachable by any energy-conserving unitary.
///
/// Works for arbitrary charger spectra: the joint spectrum is split into
/// degenerate total-energy shells and each shell is sort-assigned.
pub fn optimal_charge<T: Scalar>(battery: &QubitBattery<T>, charger: &DiagonalState<T>) -> ChargeResult<T> {
    let joint = JointDiagonalState::product(battery, charger);
    let mut delta = T::zero();
    let mut swapped = Vec::new();
    for shell in joint.energy_shells() {
        let outcome = sort_shell_assignment(&joint, &shell);
        delta = delta + outcome.gain;
        swapped.extend(outcome.swapped);
    }
    ChargeResult::from_gain(*battery, delta, swapped)
}

/// Exhaustive oracle for [`optimal_charge`]: tries every permutation inside
/// every degenerate shell.
pub fn brute_force_charge<T: Scalar>(battery: &QubitBattery<T>, charger: &DiagonalState<T>) -> Result<ChargeResult<T>> {
    let joint = JointDiagonalState::product(battery, charger);
    let size = joint.entries().len();
    if size > BRUTE_FORCE_JOINT_CAP {
        return Err(Error::TooLarge {
            size: size as u128,
            cap: BRUTE_FORCE_JOINT_CAP as u128,
        });
    }
    let shells = joint.energy_shells();
    if let Some(big) = shells.iter().find(|s| s.len() > BRUTE_FORCE_SHELL_CAP) {
        return Err(Error::TooLarge {
            size: big.len() as u128,
            cap: BRUTE_FORCE_SHELL_CAP as u128,
        });
    }
    let entries = joint.entries();
    let mut delta = T::zero();
    let mut swapped = Vec::new();
    for shell in shells {
        let current = canonical_sum(excited_populations(&joint, &shell));
        let mut best = current;
        let mut best_swapped = Vec::new();
        // perm[slot] is the entry whose population ends up in `slot`.
        for perm in shell.iter().copied().permutations(shell.len()) {
            let landing: Vec<usize> = shell
                .iter()
                .zip(&perm)
                .filter(|(&slot, _)| entries[slot].battery_index == 1)
                .map(|(_, &source)| source)
                .collect();
            let mass = canonical_sum(landing.iter().map(|&i| entries[i].probability).collect());
            if mass > best {
                best = mass;
                best_swapped = landing
                    .iter()
                    .filter(|&&i| entries[i].battery_index == 0)
                    .map(|&i| entries[i].charger_index)
                    .collect();
            }
        }
        if exceeds(best, current) {
            delta = delta + (best - current);
            swapped.extend(best_swapped);
        }
    }
    Ok(ChargeResult::from_gain(*battery, delta, swapped))
}

fn require_resonant_ladder<T: Scalar>(battery: &QubitBattery<T>, charger: &DiagonalState<T>) -> Result<()> {
    if !charger.spectrum().is_ladder() {
        return Err(Error::NotLadder);
    }
    if battery.gap() != T::one() {
        return Err(Error::GapMismatch(battery.gap().to_f64_lossy()));
    }
    Ok(())
}

/// Per-shell gains `p0 q_k - p1 q_{k-1}` for `k = 1..d-1`.
fn exchange_gains<T: Scalar>(battery: &QubitBattery<T>, q: &[T]) -> Vec<(usize, T, T)> {
    (1..q.len())
        .map(|k| (k, battery.p0() * q[k], battery.p1() * q[k - 1]))
        .collect()
}

/// Whether the charger can raise the battery's energy at all: true iff
/// `p0 q_{i+1} > p1 q_i` for some `i`, i.e. `p0/p1 > min_i q_i/q_{i+1}`.
///
/// Requires a unit-ladder charger; [`optimal_charge`] handles general spectra.
pub fn charging_possible<T: Scalar>(battery: &QubitBattery<T>, charger: &DiagonalState<T>) -> Result<bool> {
    require_resonant_ladder(battery, charger)?;
    Ok(exchange_gains(battery, charger.probs())
        .into_iter()
        .any(|(_, up, down)| exceeds(up, down)))
}

/// Closed-form gain when every resonant pair is exchanged:
/// `delta = p0 sum_{i>=1} q_i - p1 sum_{i<=d-2} q_i`.
///
/// Valid when the battery is colder than every virtual temperature of the
/// charger (`p0/p1 >= max_i q_i/q_{i+1}`); otherwise an error is returned.
pub fn delta_full_cascade<T: Scalar>(battery: &QubitBattery<T>, charger: &DiagonalState<T>) -> Result<T> {
    require_resonant_ladder(battery, charger)?;
    let q = charger.probs();
    if let Some((k, _, _)) = exchange_gains(battery, q)
        .into_iter()
        .find(|&(_, up, down)| !at_least(up, down))
    {
        return Err(Error::Precondition(format!(
            "battery is not colder than the charger's virtual temperature at gap {k}"
        )));
    }
    let d = q.len();
    Ok(battery.p0() * sum(q[1..].iter().copied()) - battery.p1() * sum(q[..d - 1].iter().copied()))
}

/// Charging by a Gibbs charger on the unit ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalCharge<T> {
    pub delta: T,
    /// False when the battery is not strictly colder than the charger.
    pub can_charge: bool,
}

/// `delta = (p0 - p1) + (p1 q_{d-1} - p0 q_0)` for the `beta`-Gibbs charger on
/// `ladder(d)`; zero with `can_charge == false` when the battery is not colder.
pub fn thermal_delta<T: Real>(battery: &QubitBattery<T>, beta: T, d: usize) -> Result<ThermalCharge<T>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, 2));
    }
    if beta.is_nan() || beta < T::zero() {
        return Err(Error::InvalidArgument("beta must be non-negative".into()));
    }
    if battery.gap() != T::one() {
        return Err(Error::GapMismatch(battery.gap().to_f64_lossy()));
    }
    let x = (-beta).exp();
    let z = sum((0..d).map(|j| x.powi(j as i32)));
    let q0 = T::one() / z;
    let q_top = x.powi(d as i32 - 1) / z;
    let (p0, p1) = (battery.p0(), battery.p1());
    if !exceeds(p0 * q0 * x, p1 * q0) {
        return Ok(ThermalCharge {
            delta: T::zero(),
            can_charge: false,
        });
    }
    Ok(ThermalCharge {
        delta: (p0 - p1) + (p1 * q_top - p0 * q0),
        can_charge: true,
    })
}

/// Entropy produced per unit of energy deposited in the battery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pollution<T> {
    pub delta_entropy: T,
    pub delta_energy: T,
    pub ratio: T,
}

/// `(S(final) - S(initial)) / (E(final) - E(initial))` under [`optimal_charge`].
pub fn entropy_pollution<T: Real>(battery: &QubitBattery<T>, charger: &DiagonalState<T>) -> Result<Pollution<T>> {
    let result = optimal_charge(battery, charger);
    let delta_energy = result.energy_gain();
    if delta_energy <= T::zero() {
        return Err(Error::Precondition(
            "charger cannot charge the battery, so the energy change is zero".into(),
        ));
    }
    let after = result.final_battery;
    let delta_entropy = entropy_of(&[after.p0(), after.p1()]) - entropy_of(&[battery.p0(), battery.p1()]);
    Ok(Pollution {
        delta_entropy,
        delta_energy,
        ratio: delta_entropy / delta_energy,
    })
}

/// Which joint operation generated a battery map.
#[derive(Debug, Clone, PartialEq)]
pub enum MapProvenance<T> {
    /// Full exchanges `|0,k> <-> |1,k-1>` for each listed `k`.
    Classical { swaps: Vec<usize> },
    /// Coherent rotations with angle `alpha_k` on each listed shell `k`.
    Quantum { angles: Vec<(usize, T)> },
}

/// Column-stochastic map `((a, b), (1-a, 1-b))` acting on `(p0, p1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMap<T> {
    pub a: T,
    pub b: T,
    pub provenance: MapProvenance<T>,
}

impl<T: Scalar> StochasticMap<T> {
    pub fn identity() -> Self {
        Self {
            a: T::one(),
            b: T::zero(),
            provenance: MapProvenance::Classical { swaps: Vec::new() },
        }
    }

    /// Row-major `[[a, b], [1-a, 1-b]]`.
    pub fn matrix(&self) -> [[T; 2]; 2] {
        [[self.a, self.b], [T::one() - self.a, T::one() - self.b]]
    }

    pub fn apply(&self, battery: &QubitBattery<T>) -> QubitBattery<T> {
        let (p0, p1) = (battery.p0(), battery.p1());
        let new_p0 = self.a * p0 + self.b * p1;
        let new_p1 = (T::one() - self.a) * p0 + (T::one() - self.b) * p1;
        QubitBattery::from_parts(new_p0, new_p1, battery.gap())
    }

    /// `S_{01} >= S_{10}`, i.e. `b >= 1 - a`: the map cannot invert a passive battery.
    pub fn respects_passive_constraint(&self) -> bool {
        at_least(self.b + self.a, T::one())
    }
}

fn check_shell_indices(levels: impl Iterator<Item = usize>, d: usize) -> Result<()> {
    let mut seen = BTreeSet::new();
    for k in levels {
        if k == 0 || k >= d {
            return Err(Error::InvalidArgument(format!(
                "exchange level {k} outside 1..={}",
                d - 1
            )));
        }
        if !seen.insert(k) {
            return Err(Error::InvalidArgument(format!(
                "exchange level {k} listed twice (overlapping resource)"
            )));
        }
    }
    Ok(())
}

/// Battery map induced by exchanging `|0,k> <-> |1,k-1>` for every `k` in `swaps`:
/// `a = 1 - sum_K q_k`, `b = sum_K q_{k-1}`.
pub fn classical_stochastic_map<T: Scalar>(charger: &DiagonalState<T>, swaps: &[usize]) -> Result<StochasticMap<T>> {
    if !charger.spectrum().is_ladder() {
        return Err(Error::NotLadder);
    }
    let q = charger.probs();
    check_shell_indices(swaps.iter().copied(), q.len())?;
    let moved_up = sum(swaps.iter().map(|&k| q[k]));
    let moved_down = sum(swaps.iter().map(|&k| q[k - 1]));
    let mut sorted = swaps.to_vec();
    sorted.sort_unstable();
    Ok(StochasticMap {
        a: T::one() - moved_up,
        b: moved_down,
        provenance: MapProvenance::Classical { swaps: sorted },
    })
}

/// Battery map induced by the rotation
/// `|0,k> -> sin(a)|0,k> + i cos(a)|1,k-1>` on each listed shell:
/// `a = 1 - sum q_k cos^2(alpha_k)`, `b = sum q_{k-1} cos^2(alpha_k)`.
pub fn quantum_stochastic_map<T: Real>(charger: &DiagonalState<T>, angles: &[(usize, T)]) -> Result<StochasticMap<T>> {
    if !charger.spectrum().is_ladder() {
        return Err(Error::NotLadder);
    }
    let q = charger.probs();
    check_shell_indices(angles.iter().map(|&(k, _)| k), q.len())?;
    let half_pi = T::from_f64(FRAC_PI_2).unwrap();
    let slack = T::from_f64(1e-12).unwrap();
    if let Some(&(k, alpha)) = angles
        .iter()
        .find(|&&(_, alpha)| !(alpha >= -slack && alpha <= half_pi + slack))
    {
        return Err(Error::InvalidArgument(format!(
            "angle {alpha} for level {k} outside [0, pi/2]"
        )));
    }
    let weight = |alpha: T| {
        let c = alpha.cos();
        c * c
    };
    let moved_up = sum(angles.iter().map(|&(k, alpha)| q[k] * weight(alpha)));
    let moved_down = sum(angles.iter().map(|&(k, alpha)| q[k - 1] * weight(alpha)));
    let mut sorted = angles.to_vec();
    sorted.sort_by_key(|&(k, _)| k);
    Ok(StochasticMap {
        a: T::one() - moved_up,
        b: moved_down,
        provenance: MapProvenance::Quantum { angles: sorted },
    })
}

/// Range `[min, max]` of final excited populations reachable by exchanges and
/// coherent rotations on the resonant shells of a unit-ladder ancilla.
pub fn reachable_excited_range<T: Scalar>(battery: &QubitBattery<T>, ancilla: &DiagonalState<T>) -> Result<(T, T)> {
    require_resonant_ladder(battery, ancilla)?;
    let mut low = battery.p1();
    let mut high = battery.p1();
    for (_, up, down) in exchange_gains(battery, ancilla.probs()) {
        if exceeds(up, down) {
            high = high + (up - down);
        } else if exceeds(down, up) {
            low = low + (up - down);
        }
    }
    Ok((low, high))
}

fn require_passive_battery<T: Scalar>(battery: &QubitBattery<T>) -> Result<()> {
    if battery.is_passive() {
        Ok(())
    } else {
        Err(Error::NotPassive("battery"))
    }
}

/// A map that exactly inverts the battery populations, if one exists.
///
/// Classical exchange sets are tried first; otherwise a coherent map is built
/// by rotating the positive-gain shells in order until the inversion is hit.
pub fn full_swap_map<T: Real>(
    battery: &QubitBattery<T>,
    ancilla: &DiagonalState<T>,
) -> Result<Option<StochasticMap<T>>> {
    require_passive_battery(battery)?;
    let (low, high) = reachable_excited_range(battery, ancilla)?;
    let target = battery.p0();
    let matches = |x: T| !exceeds(x, target) && !exceeds(target, x);
    if matches(battery.p1()) {
        return Ok(Some(StochasticMap::identity()));
    }
    if exceeds(low, target) || exceeds(target, high) {
        return Ok(None);
    }
    let d = ancilla.dim();
    if d <= 16 {
        for swaps in (1..d).powerset() {
            let map = classical_stochastic_map(ancilla, &swaps)?;
            if matches(map.apply(battery).p1()) {
                return Ok(Some(map));
            }
        }
    }
    let mut remaining = target - battery.p1();
    let mut angles = Vec::new();
    for (k, up, down) in exchange_gains(battery, ancilla.probs()) {
        if remaining <= T::zero() {
            break;
        }
        let gain = up - down;
        if gain <= T::zero() {
            continue;
        }
        let fraction = (remaining / gain).min(T::one());
        remaining = remaining - fraction * gain;
        angles.push((k, fraction.sqrt().acos()));
    }
    quantum_stochastic_map(ancilla, &angles).map(Some)
}

/// Whether some energy-conserving map inverts the battery populations exactly.
/// Always false for passive ancillas and a non-maximally-mixed passive battery.
pub fn full_swap_feasible<T: Real>(battery: &QubitBattery<T>, ancilla: &DiagonalState<T>) -> Result<bool> {
    Ok(full_swap_map(battery, ancilla)?.is_some())
}

/// Whether some reachable final battery has more energy and strictly less
/// entropy than the initial one. For a qubit that means the excited
/// population ends strictly above `p0`.
pub fn supercharge_feasible<T: Scalar>(battery: &QubitBattery<T>, ancilla: &DiagonalState<T>) -> Result<bool> {
    require_passive_battery(battery)?;
    let (_, high) = reachable_excited_range(battery, ancilla)?;
    Ok(exceeds(high, battery.p0()))
}

/// Excited population after rotating only shell `k` by `alpha`.
pub fn excited_population_with_rotation<T: Real>(
    battery: &QubitBattery<T>,
    charger: &DiagonalState<T>,
    k: usize,
    alpha: T,
) -> Result<T> {
    Ok(quantum_stochastic_map(charger, &[(k, alpha)])?.apply(battery).p1())
}

/// Convenience for a unit-gap battery.
pub fn ladder_charger<T: Scalar>(probs: Vec<T>) -> Result<DiagonalState<T>> {
    DiagonalState::new(probs.clone(), EnergySpectrum::ladder(probs.len()))
}
