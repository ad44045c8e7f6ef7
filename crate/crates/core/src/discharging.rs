//! Discharging a qubit battery with an ancilla under arbitrary joint unitaries.
//!
//! Without energy conservation the best protocol is the permutation that puts
//! the `d+1` largest joint populations into the battery ground row. Since both
//! rows of `p ⊗ q` are sorted, that amounts to exchanging the `k+1` largest
//! excited entries `p1 q_i` with the `k+1` smallest ground entries
//! `p0 q_{d-i}`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::is_passive;
use crate::scalar::{canonical_sum, exceeds, Scalar};
use crate::state::{majorizes_vec, sorted_descending, DiagonalState, QubitBattery};

#[derive(Debug, Clone, PartialEq)]
pub struct DischargeResult<T> {
    pub initial: QubitBattery<T>,
    pub final_battery: QubitBattery<T>,
    /// Last exchanged index `k`; `None` when no exchange helps.
    pub shift_index: Option<usize>,
    /// Energy extracted from the battery.
    pub energy_drop: T,
}

impl<T: Scalar> DischargeResult<T> {
    fn new(initial: QubitBattery<T>, ground: T, shift_index: Option<usize>) -> Self {
        let total = initial.p0() + initial.p1();
        Self {
            initial,
            final_battery: QubitBattery::from_parts(ground, total - ground, initial.gap()),
            shift_index,
            energy_drop: (ground - initial.p0()) * initial.gap(),
        }
    }
}

fn require_passive_battery<T: Scalar>(battery: &QubitBattery<T>) -> Result<()> {
    if battery.is_passive() {
        Ok(())
    } else {
        Err(Error::NotPassive("battery"))
    }
}

/// Strict test `p0 / p1 < q_max / q_min`, cross-multiplied so that a
/// vanishing smallest population is handled.
pub fn discharging_possible<T: Scalar>(battery: &QubitBattery<T>, discharger: &DiagonalState<T>) -> Result<bool> {
    require_passive_battery(battery)?;
    if !is_passive(discharger) {
        return Err(Error::NotPassive("discharger"));
    }
    Ok(gate(battery, &sorted_descending(discharger.probs())))
}

fn gate<T: Scalar>(battery: &QubitBattery<T>, q: &[T]) -> bool {
    exceeds(battery.p1() * q[0], battery.p0() * q[q.len() - 1])
}

/// Block-shift construction of the optimal discharge.
pub fn optimal_discharge<T: Scalar>(
    battery: &QubitBattery<T>,
    discharger: &DiagonalState<T>,
) -> Result<DischargeResult<T>> {
    require_passive_battery(battery)?;
    let q = sorted_descending(discharger.probs());
    if !gate(battery, &q) {
        return Ok(DischargeResult::new(*battery, battery.p0(), None));
    }
    let (p0, p1) = (battery.p0(), battery.p1());
    let d = q.len() - 1;
    // p1 q_i - p0 q_{d-i} is non-increasing in i; keep every non-negative term.
    let k = (0..=d)
        .take_while(|&i| p1 * q[i] >= p0 * q[d - i])
        .last()
        .expect("the first exchange is profitable");
    let kept = q[..d - k].iter().map(|&x| p0 * x);
    let received = q[..=k].iter().map(|&x| p1 * x);
    let ground = canonical_sum(kept.chain(received).collect());
    Ok(DischargeResult::new(*battery, ground, Some(k)))
}

/// Reference value: sum of the `d+1` largest joint populations.
pub fn sort_oracle_discharge<T: Scalar>(battery: &QubitBattery<T>, discharger: &DiagonalState<T>) -> QubitBattery<T> {
    let q = discharger.probs();
    let mut joint: Vec<T> = q
        .iter()
        .map(|&x| battery.p0() * x)
        .chain(q.iter().map(|&x| battery.p1() * x))
        .collect();
    joint.sort_by(|a, b| b.partial_cmp(a).expect("comparable"));
    joint.truncate(q.len());
    let ground = canonical_sum(joint);
    let total = battery.p0() + battery.p1();
    QubitBattery::from_parts(ground, total - ground, battery.gap())
}

/// Majorization comparison of two dischargers together with their optimal
/// final ground populations.
#[derive(Debug, Clone, PartialEq)]
pub struct DischargeComparison<T> {
    /// `Greater`: the first majorizes the second (and so discharges at least as
    /// well); `Equal`: each majorizes the other; `None`: incomparable.
    pub ordering: Option<Ordering>,
    pub first: T,
    pub second: T,
}

pub fn discharge_ordering<T: Scalar>(
    battery: &QubitBattery<T>,
    first: &DiagonalState<T>,
    second: &DiagonalState<T>,
) -> Result<DischargeComparison<T>> {
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch(first.dim(), second.dim()));
    }
    let forward = majorizes_vec(first.probs(), second.probs())?;
    let backward = majorizes_vec(second.probs(), first.probs())?;
    let ordering = match (forward, backward) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Greater),
        (false, true) => Some(Ordering::Less),
        (false, false) => None,
    };
    Ok(DischargeComparison {
        ordering,
        first: optimal_discharge(battery, first)?.final_battery.p0(),
        second: optimal_discharge(battery, second)?.final_battery.p0(),
    })
}
