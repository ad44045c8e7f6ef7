//! Activation: pushing a qubit battery past population inversion.

use crate::charging::optimal_charge;
use crate::error::{Error, Result};
use crate::geometry::is_passive;
use crate::scalar::{exceeds, Real, Scalar};
use crate::state::{DiagonalState, QubitBattery};

fn half<T: Scalar>() -> T {
    T::one() / (T::one() + T::one())
}

/// Largest excited population reachable with an energy-conserving unitary.
pub fn max_excited_population<T: Scalar>(battery: &QubitBattery<T>, charger: &DiagonalState<T>) -> T {
    optimal_charge(battery, charger).final_battery.p1()
}

/// True iff the charger can leave the battery with `p1 > 1/2`.
pub fn activates<T: Scalar>(battery: &QubitBattery<T>, charger: &DiagonalState<T>) -> bool {
    exceeds(max_excited_population(battery, charger), half())
}

/// Branch-by-branch activation test for a three-level charger on the unit ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivationVerdict<T> {
    /// Exchanging only `|0,1> <-> |1,0>` activates (requires `p0 q1 > p1 q0`).
    pub branch_i: bool,
    /// Exchanging only `|0,2> <-> |1,1>` activates (requires `p0 q2 > p1 q1`).
    pub branch_ii: bool,
    /// Exchanging both pairs activates (requires both premises).
    pub branch_both: bool,
    /// `max{(1-2q0)/(1-2q1), (1-2q1)/(1-2q2), (1-2q0-2q1)/(1-2q1-2q2)}` over
    /// the terms with non-zero denominator, compared against `p0/p1` in the
    /// closed-form statement. Reported for reference only.
    pub formula_max: Option<T>,
}

impl<T> ActivationVerdict<T> {
    pub fn any(&self) -> bool {
        self.branch_i || self.branch_ii || self.branch_both
    }
}

pub fn activation_condition_3d<T: Scalar>(
    battery: &QubitBattery<T>,
    charger: &DiagonalState<T>,
) -> Result<ActivationVerdict<T>> {
    if charger.dim() != 3 {
        return Err(Error::DimensionMismatch(charger.dim(), 3));
    }
    if !charger.spectrum().is_ladder() {
        return Err(Error::NotLadder);
    }
    if battery.gap() != T::one() {
        return Err(Error::GapMismatch(battery.gap().to_f64_lossy()));
    }
    if !battery.is_passive() {
        return Err(Error::NotPassive("battery"));
    }
    if !is_passive(charger) {
        return Err(Error::NotPassive("charger"));
    }
    let q = charger.probs();
    let (p0, p1) = (battery.p0(), battery.p1());
    let gain_i = p0 * q[1] - p1 * q[0];
    let gain_ii = p0 * q[2] - p1 * q[1];
    let premise_i = exceeds(p0 * q[1], p1 * q[0]);
    let premise_ii = exceeds(p0 * q[2], p1 * q[1]);
    let activated = |p: T| exceeds(p, half());

    let two = T::one() + T::one();
    let one = T::one();
    let terms = [
        (one - two * q[0], one - two * q[1]),
        (one - two * q[1], one - two * q[2]),
        (one - two * q[0] - two * q[1], one - two * q[1] - two * q[2]),
    ];
    let formula_max = terms
        .iter()
        .filter(|(_, den)| *den != T::zero())
        .map(|&(num, den)| num / den)
        .reduce(|a, b| a.max_of(b));

    Ok(ActivationVerdict {
        branch_i: premise_i && activated(p1 + gain_i),
        branch_ii: premise_ii && activated(p1 + gain_ii),
        branch_both: premise_i && premise_ii && activated(p1 + gain_i + gain_ii),
        formula_max,
    })
}

/// Largest bath inverse temperature `ln(2 p0) / E` for which a qubit bath can
/// be activated by the battery.
pub fn bath_activation_bound<T: Real>(battery: &QubitBattery<T>) -> Result<T> {
    if !exceeds(battery.p0(), half()) {
        return Err(Error::Precondition("battery needs p0 > 1/2".into()));
    }
    let two = T::one() + T::one();
    let bound = (two * battery.p0()).ln() / battery.gap();
    debug_assert!(battery.inverse_temperature().finite().is_none_or(|b| bound < b));
    Ok(bound)
}

/// Thermo-majorization curve: cumulative Gibbs weight against cumulative
/// population, levels ordered by decreasing `p_i / t_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoCurve<T> {
    points: Vec<(T, T)>,
    order: Vec<usize>,
}

impl<T: Real> ThermoCurve<T> {
    /// Kinks from `(0, 0)` to `(1, 1)`.
    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    /// Level indices in the order their segments appear.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn slopes(&self) -> Vec<T> {
        self.points
            .windows(2)
            .filter(|w| w[1].0 > w[0].0)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }

    /// Height of the curve at `x`, linearly interpolated.
    pub fn value_at(&self, x: T) -> T {
        let last = *self.points.last().expect("curve has points");
        if x >= last.0 {
            return last.1;
        }
        for w in self.points.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x <= x1 {
                if x1 <= x0 {
                    return y1;
                }
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        last.1
    }

    pub fn is_concave(&self) -> bool {
        let tol = T::from_f64(CURVE_TOLERANCE).unwrap();
        self.slopes()
            .windows(2)
            .all(|w| w[1] <= w[0] + tol * w[0].abs().max(T::one()))
    }
}

/// Absolute slack for curve comparisons.
pub const CURVE_TOLERANCE: f64 = 1e-12;

pub fn thermo_majorization_curve<T: Real>(state: &DiagonalState<T>, beta: T) -> Result<ThermoCurve<T>> {
    if !beta.is_finite() || beta < T::zero() {
        return Err(Error::InvalidArgument("beta must be finite and non-negative".into()));
    }
    let gibbs = DiagonalState::gibbs(state.spectrum().clone(), beta);
    let t = gibbs.probs();
    let p = state.probs();
    let mut order: Vec<usize> = (0..p.len()).collect();
    // Compare p_i/t_i against p_j/t_j without dividing.
    order.sort_by(|&i, &j| {
        (p[j] * t[i])
            .partial_cmp(&(p[i] * t[j]))
            .expect("comparable")
            .then(i.cmp(&j))
    });
    let mut points = Vec::with_capacity(p.len() + 1);
    let (mut x, mut y) = (T::zero(), T::zero());
    points.push((x, y));
    for &i in &order {
        x = x + t[i];
        y = y + p[i];
        points.push((x, y));
    }
    Ok(ThermoCurve { points, order })
}

fn curves<T: Real>(p: &DiagonalState<T>, q: &DiagonalState<T>, beta: T) -> Result<(ThermoCurve<T>, ThermoCurve<T>)> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    if p.spectrum() != q.spectrum() {
        return Err(Error::InvalidArgument("states live on different spectra".into()));
    }
    Ok((thermo_majorization_curve(p, beta)?, thermo_majorization_curve(q, beta)?))
}

/// True iff `p`'s curve is on or above `q`'s everywhere. Both curves are
/// concave, so checking `q`'s kinks suffices.
pub fn thermo_majorizes<T: Real>(p: &DiagonalState<T>, q: &DiagonalState<T>, beta: T) -> Result<bool> {
    let (cp, cq) = curves(p, q, beta)?;
    let tol = T::from_f64(CURVE_TOLERANCE).unwrap();
    Ok(cq.points().iter().all(|&(x, y)| cp.value_at(x) >= y - tol))
}

/// Dominance with a strict gap at every interior kink of `q`'s curve.
pub fn strictly_thermo_majorizes<T: Real>(p: &DiagonalState<T>, q: &DiagonalState<T>, beta: T) -> Result<bool> {
    let (cp, cq) = curves(p, q, beta)?;
    let tol = T::from_f64(CURVE_TOLERANCE).unwrap();
    let kinks = cq.points();
    let interior = &kinks[1..kinks.len() - 1];
    Ok(
        kinks.iter().all(|&(x, y)| cp.value_at(x) >= y - tol)
            && interior.iter().all(|&(x, y)| cp.value_at(x) > y + tol),
    )
}
