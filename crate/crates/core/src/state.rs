//! Diagonal states, energy spectra and the bookkeeping shared by every
//! analysis: mean energy, Shannon entropy, tensor products and majorization.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{at_least, sum, Real, Scalar};

/// Largest product dimension [`tensor`] will build.
pub const TENSOR_CAP: usize = 2_000_000;

/// An inverse temperature that may be infinite (the zero-temperature limit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InverseTemperature<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> InverseTemperature<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            InverseTemperature::Finite(beta) => Some(beta),
            InverseTemperature::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, InverseTemperature::Infinite)
    }

    /// Lossy view as `f64`, mapping the infinite case to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            InverseTemperature::Finite(beta) => beta.to_f64_lossy(),
            InverseTemperature::Infinite => f64::INFINITY,
        }
    }
}

impl<T: Scalar> PartialOrd for InverseTemperature<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use InverseTemperature::*;
        match (self, other) {
            (Infinite, Infinite) => Some(Ordering::Equal),
            (Infinite, Finite(_)) => Some(Ordering::Greater),
            (Finite(_), Infinite) => Some(Ordering::Less),
            (Finite(a), Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl<T: fmt::Display> fmt::Display for InverseTemperature<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InverseTemperature::Finite(beta) => write!(f, "{beta}"),
            InverseTemperature::Infinite => f.write_str("inf"),
        }
    }
}

/// Energy levels of a Hamiltonian that is diagonal in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum<T> {
    levels: Vec<T>,
}

impl<T: Scalar> EnergySpectrum<T> {
    /// Validates that the levels are non-negative and non-decreasing.
    pub fn new(levels: Vec<T>) -> Result<Self> {
        for (i, &level) in levels.iter().enumerate() {
            if level < T::zero() || (i > 0 && level < levels[i - 1]) {
                return Err(Error::InvalidSpectrum(i));
            }
        }
        Ok(Self { levels })
    }

    /// `(0, 1, ..., d-1)`.
    pub fn ladder(d: usize) -> Self {
        Self::scaled_ladder(d, T::one())
    }

    /// `(0, gap, 2 gap, ...)`.
    pub fn scaled_ladder(d: usize, gap: T) -> Self {
        let levels = (0..d).map(|i| T::from_usize_exact(i) * gap).collect();
        Self { levels }
    }

    /// Product spectra keep one level per basis state, in basis order, so they
    /// are generally not sorted.
    pub(crate) fn from_unsorted(levels: Vec<T>) -> Self {
        Self { levels }
    }

    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.levels.windows(2).all(|w| w[0] <= w[1])
    }

    /// Exactly the integer ladder `(0, 1, ..., d-1)`.
    pub fn is_ladder(&self) -> bool {
        self.levels
            .iter()
            .enumerate()
            .all(|(i, &e)| e == T::from_usize_exact(i))
    }

    /// Sorted with every consecutive gap larger than the degeneracy tolerance.
    pub fn is_non_degenerate(&self) -> bool {
        self.levels.windows(2).all(|w| w[1] - w[0] > T::degeneracy_tolerance())
    }

    /// Basis indices grouped into degenerate blocks, blocks ordered by energy.
    pub fn energy_blocks(&self) -> Vec<Vec<usize>> {
        group_by_energy(&self.levels)
    }
}

/// Groups indices of `energies` into blocks of (tolerance-)equal energy.
pub(crate) fn group_by_energy<T: Scalar>(energies: &[T]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| {
        energies[a]
            .partial_cmp(&energies[b])
            .expect("comparable energies")
            .then(a.cmp(&b))
    });
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut anchor = T::zero();
    for idx in order {
        match blocks.last_mut() {
            Some(block) if energies[idx] - anchor <= T::degeneracy_tolerance() => block.push(idx),
            _ => {
                anchor = energies[idx];
                blocks.push(vec![idx]);
            }
        }
    }
    blocks
}

/// A probability vector over the eigenbasis of a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalState<T> {
    probs: Vec<T>,
    spectrum: EnergySpectrum<T>,
}

impl<T: Scalar> DiagonalState<T> {
    pub fn new(probs: Vec<T>, spectrum: EnergySpectrum<T>) -> Result<Self> {
        if probs.len() != spectrum.len() {
            return Err(Error::DimensionMismatch(probs.len(), spectrum.len()));
        }
        if probs.is_empty() {
            return Err(Error::DimensionTooSmall(0, 1));
        }
        for (index, &p) in probs.iter().enumerate() {
            if p < T::zero() {
                return Err(Error::NegativeProbability {
                    index,
                    value: p.to_f64_lossy(),
                });
            }
        }
        let total = sum(probs.iter().copied());
        if (total - T::one()).abs_val() > T::normalization_tolerance() {
            return Err(Error::NotNormalized(total.to_f64_lossy()));
        }
        Ok(Self { probs, spectrum })
    }

    /// A state over the unit ladder of matching length.
    pub fn on_ladder(probs: Vec<T>) -> Result<Self> {
        let spectrum = EnergySpectrum::ladder(probs.len());
        Self::new(probs, spectrum)
    }

    /// Skips validation for states derived from already valid ones.
    pub(crate) fn from_parts(probs: Vec<T>, spectrum: EnergySpectrum<T>) -> Self {
        debug_assert_eq!(probs.len(), spectrum.len());
        Self { probs, spectrum }
    }

    pub fn uniform(d: usize) -> Self {
        let p = T::one() / T::from_usize_exact(d);
        Self::from_parts(vec![p; d], EnergySpectrum::ladder(d))
    }

    /// All population in the lowest level.
    pub fn ground(d: usize) -> Self {
        let mut probs = vec![T::zero(); d];
        probs[0] = T::one();
        Self::from_parts(probs, EnergySpectrum::ladder(d))
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn spectrum(&self) -> &EnergySpectrum<T> {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    /// `lambda * self + (1 - lambda) * other` over the same spectrum.
    pub fn mix(&self, other: &Self, lambda: T) -> Result<Self> {
        if self.spectrum != other.spectrum {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(&a, &b)| lambda * a + (T::one() - lambda) * b)
            .collect();
        Ok(Self::from_parts(probs, self.spectrum.clone()))
    }
}

impl<T: Real> DiagonalState<T> {
    /// Gibbs state `exp(-beta * e_i) / Z` over `spectrum`.
    pub fn gibbs(spectrum: EnergySpectrum<T>, beta: T) -> Self {
        let ground = spectrum.levels().iter().copied().fold(T::infinity(), T::min);
        let weights: Vec<T> = spectrum
            .levels()
            .iter()
            .map(|&e| (-beta * (e - ground)).exp())
            .collect();
        let z = sum(weights.iter().copied());
        let probs = weights.into_iter().map(|w| w / z).collect();
        Self::from_parts(probs, spectrum)
    }
}

/// Qubit battery populations `(p0, p1)` with level splitting `gap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitBattery<T> {
    p0: T,
    p1: T,
    gap: T,
}

impl<T: Scalar> QubitBattery<T> {
    /// Battery with unit gap.
    pub fn new(p0: T, p1: T) -> Result<Self> {
        Self::with_gap(p0, p1, T::one())
    }

    pub fn with_gap(p0: T, p1: T, gap: T) -> Result<Self> {
        if gap <= T::zero() {
            return Err(Error::InvalidArgument("battery gap must be positive".into()));
        }
        // Reuse the state validation for normalization and sign checks.
        DiagonalState::new(vec![p0, p1], EnergySpectrum::scaled_ladder(2, gap))?;
        Ok(Self { p0, p1, gap })
    }

    pub(crate) fn from_parts(p0: T, p1: T, gap: T) -> Self {
        Self { p0, p1, gap }
    }

    pub fn p0(&self) -> T {
        self.p0
    }

    pub fn p1(&self) -> T {
        self.p1
    }

    pub fn gap(&self) -> T {
        self.gap
    }

    pub fn is_passive(&self) -> bool {
        at_least(self.p0, self.p1)
    }

    pub fn as_state(&self) -> DiagonalState<T> {
        DiagonalState::from_parts(vec![self.p0, self.p1], EnergySpectrum::scaled_ladder(2, self.gap))
    }

    /// Mean energy `p1 * gap`.
    pub fn energy(&self) -> T {
        self.p1 * self.gap
    }
}

impl<T: Real> QubitBattery<T> {
    /// `ln(p0 / p1) / gap`; infinite for the pure ground state.
    pub fn inverse_temperature(&self) -> InverseTemperature<T> {
        if self.p1 == T::zero() {
            InverseTemperature::Infinite
        } else {
            InverseTemperature::Finite((self.p0 / self.p1).ln() / self.gap)
        }
    }
}

/// One basis state `|battery, charger>` of the joint system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEntry<T> {
    pub battery_index: usize,
    pub charger_index: usize,
    pub total_energy: T,
    pub probability: T,
}

/// Occupation table of a battery-charger system, laid out battery-major:
/// all `|0, k>` entries first, then all `|1, k>`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDiagonalState<T> {
    entries: Vec<JointEntry<T>>,
    charger_dim: usize,
}

impl<T: Scalar> JointDiagonalState<T> {
    pub fn product(battery: &QubitBattery<T>, charger: &DiagonalState<T>) -> Self {
        let battery_levels = [(battery.p0(), T::zero()), (battery.p1(), battery.gap())];
        let mut entries = Vec::with_capacity(2 * charger.dim());
        for (battery_index, &(pb, eb)) in battery_levels.iter().enumerate() {
            for (charger_index, (&q, &ec)) in charger.probs().iter().zip(charger.spectrum().levels()).enumerate() {
                entries.push(JointEntry {
                    battery_index,
                    charger_index,
                    total_energy: eb + ec,
                    probability: pb * q,
                });
            }
        }
        Self {
            entries,
            charger_dim: charger.dim(),
        }
    }

    pub fn entries(&self) -> &[JointEntry<T>] {
        &self.entries
    }

    pub fn charger_dim(&self) -> usize {
        self.charger_dim
    }

    /// Entry indices grouped by total energy, lowest energy first.
    pub fn energy_shells(&self) -> Vec<Vec<usize>> {
        let energies: Vec<T> = self.entries.iter().map(|e| e.total_energy).collect();
        group_by_energy(&energies)
    }

    /// Returns `(p0, p1)` of the reduced battery state.
    pub fn battery_marginal(&self) -> (T, T) {
        let mut marginal = (T::zero(), T::zero());
        for e in &self.entries {
            if e.battery_index == 0 {
                marginal.0 = marginal.0 + e.probability;
            } else {
                marginal.1 = marginal.1 + e.probability;
            }
        }
        marginal
    }

    pub fn charger_marginal(&self) -> Vec<T> {
        let mut marginal = vec![T::zero(); self.charger_dim];
        for e in &self.entries {
            marginal[e.charger_index] = marginal[e.charger_index] + e.probability;
        }
        marginal
    }

    pub fn total_probability(&self) -> T {
        sum(self.entries.iter().map(|e| e.probability))
    }
}

/// `sum_i q_i e_i`.
pub fn mean_energy<T: Scalar>(state: &DiagonalState<T>) -> T {
    sum(state
        .probs()
        .iter()
        .zip(state.spectrum().levels())
        .map(|(&q, &e)| q * e))
}

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn shannon_entropy<T: Real>(state: &DiagonalState<T>) -> T {
    entropy_of(state.probs())
}

pub(crate) fn entropy_of<T: Real>(probs: &[T]) -> T {
    -sum(probs.iter().filter(|&&q| q > T::zero()).map(|&q| q * q.ln()))
}

/// Product state; level `i * |b| + j` carries `a_i * b_j` at energy `e_i + f_j`.
pub fn tensor<T: Scalar>(a: &DiagonalState<T>, b: &DiagonalState<T>) -> Result<DiagonalState<T>> {
    let size = a.dim().saturating_mul(b.dim());
    if size > TENSOR_CAP {
        return Err(Error::TooLarge {
            size: size as u128,
            cap: TENSOR_CAP as u128,
        });
    }
    let mut probs = Vec::with_capacity(size);
    let mut levels = Vec::with_capacity(size);
    for (&pa, &ea) in a.probs().iter().zip(a.spectrum().levels()) {
        for (&pb, &eb) in b.probs().iter().zip(b.spectrum().levels()) {
            probs.push(pa * pb);
            levels.push(ea + eb);
        }
    }
    Ok(DiagonalState::from_parts(probs, EnergySpectrum::from_unsorted(levels)))
}

pub(crate) fn sorted_descending<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("comparable probabilities"));
    sorted
}

/// `p ≻ q`: every descending partial sum of `p` dominates that of `q`.
pub fn majorizes<T: Scalar>(p: &DiagonalState<T>, q: &DiagonalState<T>) -> Result<bool> {
    majorizes_vec(p.probs(), q.probs())
}

pub(crate) fn majorizes_vec<T: Scalar>(p: &[T], q: &[T]) -> Result<bool> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    let (p, q) = (sorted_descending(p), sorted_descending(q));
    let mut partial_p = T::zero();
    let mut partial_q = T::zero();
    for (&a, &b) in p.iter().zip(&q) {
        partial_p = partial_p + a;
        partial_q = partial_q + b;
        if partial_q - partial_p > T::comparison_tolerance() {
            return Ok(false);
        }
    }
    Ok(true)
}
