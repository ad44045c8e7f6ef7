//! Charging with several independent copies of a ladder charger.
//!
//! The `n`-fold product of a charger on `ladder(d)` is described by exponent
//! multisets `a` (how many copies sit on each level). Every basis state with
//! the same multiset has probability `prod q_i^{a_i}` and energy
//! `sum i * a_i`, so the charging test never needs the full `d^n` tensor.

use crate::charging::ChargeResult;
use crate::error::{Error, Result};
use crate::geometry::gibbs_parameter;
use crate::scalar::{exceeds, Real, Scalar};
use crate::state::{DiagonalState, InverseTemperature, QubitBattery, TENSOR_CAP};

/// One exponent multiset of the composite charger.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeEntry<T> {
    /// `exponents[i]` copies occupy level `i`.
    pub exponents: Vec<usize>,
    pub total_energy: usize,
    /// Probability of each individual basis state carrying these exponents.
    pub probability: T,
    /// Number of basis states carrying these exponents (a multinomial coefficient).
    pub multiplicity: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeLevelTable<T> {
    base: DiagonalState<T>,
    copies: usize,
    entries: Vec<CompositeEntry<T>>,
}

impl<T: Scalar> CompositeLevelTable<T> {
    pub fn base(&self) -> &DiagonalState<T> {
        &self.base
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn entries(&self) -> &[CompositeEntry<T>] {
        &self.entries
    }

    pub fn max_energy(&self) -> usize {
        self.copies * (self.base.dim() - 1)
    }

    /// `sum multiplicity * probability`; one up to rounding.
    pub fn total_probability(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, e| {
            acc + e.probability * T::from_u128(e.multiplicity).expect("multiplicity is representable")
        })
    }

    /// Entry indices grouped by total energy `0..=max_energy`.
    pub fn by_energy(&self) -> Vec<Vec<usize>> {
        let mut shells = vec![Vec::new(); self.max_energy() + 1];
        for (i, e) in self.entries.iter().enumerate() {
            shells[e.total_energy].push(i);
        }
        shells
    }

    /// Smallest and largest per-state probability at each energy.
    pub fn probability_range_by_energy(&self) -> Vec<(T, T)> {
        self.by_energy()
            .into_iter()
            .map(|shell| {
                let mut values = shell.iter().map(|&i| self.entries[i].probability);
                let first = values.next().expect("every energy up to the maximum is reachable");
                values.fold((first, first), |(lo, hi), v| (lo.min_of(v), hi.max_of(v)))
            })
            .collect()
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Number of exponent multisets for `n` copies of a `d`-level charger.
pub fn multiset_count(d: usize, n: usize) -> Option<u128> {
    binomial((n + d - 1) as u128, (d - 1) as u128)
}

fn require_ladder<T: Scalar>(charger: &DiagonalState<T>) -> Result<()> {
    if charger.spectrum().is_ladder() {
        Ok(())
    } else {
        Err(Error::NotLadder)
    }
}

fn check_size(d: usize, n: usize) -> Result<()> {
    match multiset_count(d, n) {
        Some(size) if size <= TENSOR_CAP as u128 => Ok(()),
        size => Err(Error::TooLarge {
            size: size.unwrap_or(u128::MAX),
            cap: TENSOR_CAP as u128,
        }),
    }
}

fn multinomial(exponents: &[usize]) -> Option<u128> {
    let mut placed = 0u128;
    let mut acc = 1u128;
    for &a in exponents {
        placed += a as u128;
        acc = acc.checked_mul(binomial(placed, a as u128)?)?;
    }
    Some(acc)
}

fn power<T: Scalar>(base: T, exp: usize) -> T {
    (0..exp).fold(T::one(), |acc, _| acc * base)
}

/// Enumerates the exponent multisets of `n` copies of `charger`.
pub fn composite_levels<T: Scalar>(charger: &DiagonalState<T>, n: usize) -> Result<CompositeLevelTable<T>> {
    require_ladder(charger)?;
    if n == 0 {
        return Err(Error::InvalidArgument("number of copies must be at least 1".into()));
    }
    let d = charger.dim();
    check_size(d, n)?;
    let q = charger.probs();
    let mut entries = Vec::new();
    let mut exponents = vec![0usize; d];
    fill(q, n, 0, &mut exponents, &mut entries)?;
    Ok(CompositeLevelTable {
        base: charger.clone(),
        copies: n,
        entries,
    })
}

fn fill<T: Scalar>(
    q: &[T],
    remaining: usize,
    level: usize,
    exponents: &mut Vec<usize>,
    out: &mut Vec<CompositeEntry<T>>,
) -> Result<()> {
    if level + 1 == q.len() {
        exponents[level] = remaining;
        let multiplicity = multinomial(exponents)
            .ok_or_else(|| Error::Precondition("multinomial multiplicity exceeds the 128-bit range".into()))?;
        out.push(CompositeEntry {
            exponents: exponents.clone(),
            total_energy: exponents.iter().enumerate().map(|(i, &a)| i * a).sum(),
            probability: exponents
                .iter()
                .zip(q)
                .fold(T::one(), |acc, (&a, &qi)| acc * power(qi, a)),
            multiplicity,
        });
        return Ok(());
    }
    for a in (0..=remaining).rev() {
        exponents[level] = a;
        fill(q, remaining - a, level + 1, exponents, out)?;
    }
    exponents[level] = 0;
    Ok(())
}

fn require_unit_gap<T: Scalar>(battery: &QubitBattery<T>) -> Result<()> {
    if battery.gap() == T::one() {
        Ok(())
    } else {
        Err(Error::GapMismatch(battery.gap().to_f64_lossy()))
    }
}

fn table_charges<T: Scalar>(battery: &QubitBattery<T>, table: &CompositeLevelTable<T>) -> bool {
    table
        .probability_range_by_energy()
        .windows(2)
        .any(|w| exceeds(battery.p0() * w[1].1, battery.p1() * w[0].0))
}

/// Whether `n` copies of the charger can raise the battery's energy: some pair
/// of composite states `u`, `v` one unit apart has `p0 q_v > p1 q_u`.
pub fn charging_possible_n<T: Scalar>(battery: &QubitBattery<T>, charger: &DiagonalState<T>, n: usize) -> Result<bool> {
    require_unit_gap(battery)?;
    Ok(table_charges(battery, &composite_levels(charger, n)?))
}

/// Outcome of a minimal-copy search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopySearch {
    Found(usize),
    /// The charger is thermal and no colder than the battery, so no number of
    /// copies will ever charge it.
    Never,
    NotFoundWithinBudget {
        n_max: usize,
    },
}

impl CopySearch {
    pub fn copies(self) -> Option<usize> {
        match self {
            CopySearch::Found(n) => Some(n),
            _ => None,
        }
    }
}

/// Smallest `n <= n_max` for which `n` copies charge the battery.
pub fn min_copies_to_charge<T: Real>(
    battery: &QubitBattery<T>,
    charger: &DiagonalState<T>,
    n_max: usize,
) -> Result<CopySearch> {
    require_unit_gap(battery)?;
    require_ladder(charger)?;
    if !exceeds(battery.p0(), battery.p1()) {
        return Err(Error::Precondition("battery must satisfy p0 > p1".into()));
    }
    if !crate::geometry::is_passive(charger) {
        return Err(Error::NotPassive("charger"));
    }
    check_size(charger.dim(), n_max)?;
    if let Some(beta) = gibbs_parameter(charger) {
        if no_colder(beta, battery.inverse_temperature()) {
            return Ok(CopySearch::Never);
        }
    }
    for n in 1..=n_max {
        if table_charges(battery, &composite_levels(charger, n)?) {
            return Ok(CopySearch::Found(n));
        }
    }
    Ok(CopySearch::NotFoundWithinBudget { n_max })
}

/// `beta >= beta_b`, allowing the Gibbs-detection slack.
fn no_colder<T: Real>(beta: InverseTemperature<T>, battery: InverseTemperature<T>) -> bool {
    match (beta, battery) {
        (InverseTemperature::Infinite, _) => true,
        (InverseTemperature::Finite(_), InverseTemperature::Infinite) => false,
        (InverseTemperature::Finite(b), InverseTemperature::Finite(bb)) => {
            let slack = T::from_f64(crate::geometry::GIBBS_RATIO_TOLERANCE).unwrap();
            b >= bb - slack * bb.abs().max(T::one())
        }
    }
}

/// The two ratio families `(q0/q1) (q_{k-1} q_{k+1} / q_k^2)^{r/2}` and
/// `(q1/q2) (q_k^2 / (q_{k-1} q_{k+1}))^{r/2}` for an interior level `k`.
pub fn copy_ratio_sequences<T: Real>(charger: &DiagonalState<T>, k: usize, r: usize) -> Result<(T, T)> {
    let q = charger.probs();
    let d = q.len();
    if d < 3 {
        return Err(Error::DimensionTooSmall(d, 3));
    }
    if k == 0 || k + 2 > d {
        return Err(Error::InvalidArgument(format!(
            "level {k} is not interior (need 1..={})",
            d - 2
        )));
    }
    let needed = [0, 1, 2, k - 1, k, k + 1];
    if let Some(&i) = needed.iter().find(|&&i| q[i] <= T::zero()) {
        return Err(Error::Precondition(format!("population q_{i} is zero")));
    }
    let curvature = q[k - 1] * q[k + 1] / (q[k] * q[k]);
    let half_r = T::from_usize_exact(r) / T::from_f64(2.0).unwrap();
    let first = q[0] / q[1] * curvature.powf(half_r);
    let second = q[1] / q[2] * curvature.recip().powf(half_r);
    Ok((first, second))
}

/// Copy count whose composite table contains the adjacent pair realising the
/// ratios of [`copy_ratio_sequences`] at `r`; only even `r` has one.
///
/// For `r = 2m` the first family compares `q0 (q_{k-1} q_{k+1})^m` with
/// `q1 q_k^{2m}` and the second `q1 q_k^{2m}` with `q2 (q_{k-1} q_{k+1})^m`.
pub fn copy_ratio_count(r: usize) -> Option<usize> {
    r.is_multiple_of(2).then_some(r + 1)
}

/// Membership in `F_n`: no number of copies up to `n` can charge the battery.
/// Charging ability is monotone in the copy count (an extra copy left in its
/// ground state preserves every ratio), so only `n` itself is tested.
pub fn free_set_membership<T: Scalar>(battery: &QubitBattery<T>, charger: &DiagonalState<T>, n: usize) -> Result<bool> {
    Ok(!charging_possible_n(battery, charger, n)?)
}

/// Optimal energy-conserving charging with `n` copies of the charger.
pub fn optimal_charge_n<T: Scalar>(
    battery: &QubitBattery<T>,
    charger: &DiagonalState<T>,
    n: usize,
) -> Result<ChargeResult<T>> {
    require_unit_gap(battery)?;
    let table = composite_levels(charger, n)?;
    let shells = table.by_energy();
    let entries = table.entries();
    let count = |m: u128| T::from_u128(m).expect("multiplicity is representable");
    let mut delta = T::zero();
    for e in 0..=shells.len() {
        // Slots |1,u> with E_u = e - 1 compete with |0,v> with E_v = e.
        let lower: &[usize] = if e > 0 { &shells[e - 1] } else { &[] };
        let upper: &[usize] = shells.get(e).map_or(&[], |s| s.as_slice());
        let mut pool: Vec<(T, u128, bool)> = lower
            .iter()
            .map(|&i| (battery.p1() * entries[i].probability, entries[i].multiplicity, true))
            .chain(
                upper
                    .iter()
                    .map(|&i| (battery.p0() * entries[i].probability, entries[i].multiplicity, false)),
            )
            .collect();
        let mut slots: u128 = lower.iter().map(|&i| entries[i].multiplicity).sum();
        if slots == 0 {
            continue;
        }
        let current = lower.iter().fold(T::zero(), |acc, &i| {
            acc + battery.p1() * entries[i].probability * count(entries[i].multiplicity)
        });
        pool.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("comparable").then(b.2.cmp(&a.2)));
        let mut best = T::zero();
        for (value, mult, _) in pool {
            let take = mult.min(slots);
            best = best + value * count(take);
            slots -= take;
            if slots == 0 {
                break;
            }
        }
        if exceeds(best, current) {
            delta = delta + (best - current);
        }
    }
    Ok(ChargeResult::from_gain(*battery, delta, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charging::optimal_charge;
    use crate::scalar::Rational;

    fn battery(p0: f64, p1: f64) -> QubitBattery<f64> {
        QubitBattery::new(p0, p1).unwrap()
    }

    fn charger(q: &[f64]) -> DiagonalState<f64> {
        DiagonalState::on_ladder(q.to_vec()).unwrap()
    }

    #[test]
    fn single_copy_table_is_the_charger() {
        let c = charger(&[0.5, 0.3, 0.2]);
        let table = composite_levels(&c, 1).unwrap();
        let probs: Vec<f64> = table.entries().iter().map(|e| e.probability).collect();
        assert_eq!(probs, vec![0.5, 0.3, 0.2]);
        assert!(table.entries().iter().all(|e| e.multiplicity == 1));
    }

    #[test]
    fn two_copy_table_example() {
        let r = |n, d| Rational::new(n, d);
        let c = DiagonalState::on_ladder(vec![r(1, 2), r(3, 10), r(1, 5)]).unwrap();
        let table = composite_levels(&c, 2).unwrap();
        let mut by_energy: Vec<Vec<Rational>> = table
            .by_energy()
            .iter()
            .map(|shell| shell.iter().map(|&i| table.entries()[i].probability).collect())
            .collect();
        for shell in &mut by_energy {
            shell.sort();
        }
        assert_eq!(
            by_energy,
            vec![
                vec![r(1, 4)],
                vec![r(3, 20)],
                vec![r(9, 100), r(1, 10)],
                vec![r(3, 50)],
                vec![r(1, 25)],
            ]
        );
        assert_eq!(table.total_probability(), r(1, 1));
    }

    #[test]
    fn multiplicities_cover_the_full_tensor() {
        let table = composite_levels(&charger(&[0.4, 0.3, 0.2, 0.1]), 6).unwrap();
        let total: u128 = table.entries().iter().map(|e| e.multiplicity).sum();
        assert_eq!(total, 4u128.pow(6));
        assert_eq!(table.entries().len() as u128, multiset_count(4, 6).unwrap());
        assert!((table.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn size_cap_is_enforced() {
        let c = DiagonalState::<f64>::uniform(10);
        assert!(matches!(composite_levels(&c, 40), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn gibbs_tables_depend_only_on_energy() {
        let g = DiagonalState::gibbs(crate::state::EnergySpectrum::ladder(4), 0.6_f64);
        let table = composite_levels(&g, 5).unwrap();
        for (lo, hi) in table.probability_range_by_energy() {
            assert!((hi - lo).abs() <= 1e-12 * hi);
        }
    }

    #[test]
    fn charging_with_copies_examples() {
        let b = battery(0.55, 0.45);
        let c = charger(&[0.5, 0.3, 0.2]);
        for n in 1..=4 {
            assert!(!charging_possible_n(&b, &c, n).unwrap(), "n = {n}");
        }
        assert!(charging_possible_n(&b, &c, 5).unwrap());
        assert_eq!(min_copies_to_charge(&b, &c, 8).unwrap(), CopySearch::Found(5));
        assert!(free_set_membership(&b, &c, 4).unwrap());
        assert!(!free_set_membership(&b, &c, 5).unwrap());
        assert_eq!(
            min_copies_to_charge(&b, &c, 4).unwrap(),
            CopySearch::NotFoundWithinBudget { n_max: 4 }
        );
    }

    #[test]
    fn single_charging_charger_needs_one_copy() {
        let result = min_copies_to_charge(&battery(0.8, 0.2), &charger(&[0.5, 0.4, 0.1]), 3).unwrap();
        assert_eq!(result, CopySearch::Found(1));
    }

    #[test]
    fn hot_gibbs_chargers_never_charge() {
        let b = battery(0.8, 0.2);
        for beta in [4f64.ln(), 1.5, 3.0] {
            let g = DiagonalState::gibbs(crate::state::EnergySpectrum::ladder(3), beta);
            assert_eq!(min_copies_to_charge(&b, &g, 50).unwrap(), CopySearch::Never);
            for n in 1..8 {
                assert!(free_set_membership(&b, &g, n).unwrap());
            }
        }
        assert_eq!(
            min_copies_to_charge(&b, &charger(&[1.0, 0.0, 0.0]), 5).unwrap(),
            CopySearch::Never
        );
    }

    #[test]
    fn search_preconditions() {
        let c = charger(&[0.5, 0.3, 0.2]);
        assert!(matches!(
            min_copies_to_charge(&battery(0.5, 0.5), &c, 3),
            Err(Error::Precondition(_))
        ));
        assert_eq!(
            min_copies_to_charge(&battery(0.8, 0.2), &charger(&[0.2, 0.5, 0.3]), 3),
            Err(Error::NotPassive("charger"))
        );
        assert!(matches!(
            min_copies_to_charge(&battery(0.8, 0.2), &DiagonalState::uniform(10), 40),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn ratio_family_examples() {
        let c = charger(&[0.5, 0.3, 0.2]);
        let (first, second) = copy_ratio_sequences(&c, 1, 2).unwrap();
        assert!((first - 5.0 / 3.0 * (0.10 / 0.09)).abs() < 1e-12);
        assert!((second - 1.35).abs() < 1e-12);
        let (first, second) = copy_ratio_sequences(&c, 1, 0).unwrap();
        assert!((first - 5.0 / 3.0).abs() < 1e-15 && (second - 1.5).abs() < 1e-15);

        let g = DiagonalState::gibbs(crate::state::EnergySpectrum::ladder(4), 0.7_f64);
        let base = copy_ratio_sequences(&g, 2, 0).unwrap();
        for r in 1..10 {
            let (a, b) = copy_ratio_sequences(&g, 2, r).unwrap();
            assert!((a - base.0).abs() < 1e-12 && (b - base.1).abs() < 1e-12);
        }

        assert!(copy_ratio_sequences(&c, 0, 1).is_err());
        assert!(copy_ratio_sequences(&c, 2, 1).is_err());
        assert!(copy_ratio_sequences(&charger(&[0.6, 0.4, 0.0]), 1, 1).is_err());
    }

    #[test]
    fn optimal_charge_n_extends_single_copy_charging() {
        let b = battery(0.8, 0.2);
        let c = charger(&[0.5, 0.3, 0.2]);
        let single = optimal_charge(&b, &c).final_battery.p1();
        let mut previous = optimal_charge_n(&b, &c, 1).unwrap().final_battery.p1();
        assert!((previous - single).abs() < 1e-15);
        for n in 2..6 {
            let next = optimal_charge_n(&b, &c, n).unwrap().final_battery.p1();
            assert!(next >= previous - 1e-12);
            previous = next;
        }
    }

    #[test]
    fn optimal_charge_n_is_exact_for_rationals() {
        let r = |n, d| Rational::new(n, d);
        let b = QubitBattery::new(r(3, 5), r(2, 5)).unwrap();
        let c = DiagonalState::on_ladder(vec![r(1, 2), r(2, 5), r(1, 10)]).unwrap();
        assert_eq!(optimal_charge_n(&b, &c, 1).unwrap().delta, r(1, 25));
    }
}
