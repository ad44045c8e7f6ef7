//! Passive-state polytope: passivity and Gibbs predicates, virtual
//! temperatures, vertices, barycentric weights and facet witnesses.
//!
//! For a non-degenerate spectrum the passive states form a simplex with
//! vertices `e_j = (1/j, ..., 1/j, 0, ..., 0)`. Its facets are the
//! hyperplanes `q_{i} = q_{i+1}` and `q_{d-1} = 0`; each facet normal is a
//! diagonal witness operator that is non-negative on every passive state.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{at_least, sum, Real, Scalar};
use crate::state::{DiagonalState, InverseTemperature};

/// Relative tolerance used when comparing ratios for Gibbs detection.
pub const GIBBS_RATIO_TOLERANCE: f64 = 1e-9;

/// True iff populations do not increase with energy: `e_i > e_j => q_i <= q_j`.
pub fn is_passive<T: Scalar>(state: &DiagonalState<T>) -> bool {
    worst_violation(state).is_none()
}

/// For consecutive energy blocks, the smallest population below and the
/// largest above. Returns the most violated pair `(lower_idx, upper_idx)`.
fn worst_violation<T: Scalar>(state: &DiagonalState<T>) -> Option<(usize, usize)> {
    let q = state.probs();
    let blocks = state.spectrum().energy_blocks();
    let mut worst: Option<(usize, usize, T)> = None;
    for pair in blocks.windows(2) {
        let low = arg_extreme(&pair[0], q, |a, b| a < b);
        let high = arg_extreme(&pair[1], q, |a, b| a > b);
        if !at_least(q[low], q[high]) {
            let margin = q[low] - q[high];
            if worst.is_none_or(|(_, _, m)| margin < m) {
                worst = Some((low, high, margin));
            }
        }
    }
    worst.map(|(low, high, _)| (low, high))
}

fn arg_extreme<T: Scalar>(block: &[usize], q: &[T], better: impl Fn(T, T) -> bool) -> usize {
    block
        .iter()
        .copied()
        .reduce(|best, i| if better(q[i], q[best]) { i } else { best })
        .expect("blocks are non-empty")
}

fn same_ratio<T: Real>(a: T, b: T) -> bool {
    let tol = T::from_f64(GIBBS_RATIO_TOLERANCE).unwrap();
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(T::one())
}

/// The inverse temperature `beta >= 0` with `q_i ∝ exp(-beta e_i)`, if any.
///
/// The pure ground state reports [`InverseTemperature::Infinite`] and the
/// uniform state `0`. Non-Gibbs and non-passive states give `None`.
pub fn gibbs_parameter<T: Real>(state: &DiagonalState<T>) -> Option<InverseTemperature<T>> {
    if !is_passive(state) {
        return None;
    }
    let q = state.probs();
    let levels = state.spectrum().levels();
    let blocks = state.spectrum().energy_blocks();

    // Structural stability: degenerate levels must be equally populated.
    let mut reps = Vec::with_capacity(blocks.len());
    for block in &blocks {
        let first = q[block[0]];
        if block.iter().any(|&i| !same_ratio(q[i], first)) {
            return None;
        }
        reps.push((levels[block[0]], first));
    }
    if reps.len() == 1 {
        return Some(InverseTemperature::Finite(T::zero()));
    }
    if reps[1..].iter().all(|&(_, r)| r == T::zero()) {
        return Some(InverseTemperature::Infinite);
    }
    if reps.iter().any(|&(_, r)| r == T::zero()) {
        return None;
    }
    let betas: Vec<T> = reps
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[1].0 - w[0].0))
        .collect();
    if betas.iter().any(|&b| !same_ratio(b, betas[0])) {
        return None;
    }
    let mean = sum(betas.iter().copied()) / T::from_usize_exact(betas.len());
    Some(InverseTemperature::Finite(mean.max(T::zero())))
}

/// Per-gap inverse temperatures `ln(q_k / q_{k+1}) / (e_{k+1} - e_k)`.
///
/// A vanishing upper population yields an infinite entry. Degenerate
/// neighbours with equal populations impose no constraint and report `0`.
pub fn virtual_temperatures<T: Real>(state: &DiagonalState<T>) -> Result<Vec<InverseTemperature<T>>> {
    let spectrum = state.spectrum();
    if !spectrum.is_sorted() {
        return Err(Error::InvalidArgument(
            "virtual temperatures need levels in ascending order".into(),
        ));
    }
    let q = state.probs();
    let e = spectrum.levels();
    (0..q.len().saturating_sub(1))
        .map(|k| {
            let gap = e[k + 1] - e[k];
            if gap <= T::degeneracy_tolerance() {
                return if same_ratio(q[k], q[k + 1]) {
                    Ok(InverseTemperature::Finite(T::zero()))
                } else {
                    Err(Error::UnstableDegeneracy(k, k + 1))
                };
            }
            if q[k + 1] == T::zero() {
                Ok(InverseTemperature::Infinite)
            } else {
                Ok(InverseTemperature::Finite((q[k] / q[k + 1]).ln() / gap))
            }
        })
        .collect()
}

/// Extreme points of the passive polytope in dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSet<T> {
    dimension: usize,
    vertices: Vec<Vec<T>>,
}

impl<T: Scalar> VertexSet<T> {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `vertices()[j - 1]` is `e_j`.
    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn as_states(&self) -> Vec<DiagonalState<T>> {
        self.vertices
            .iter()
            .map(|v| DiagonalState::on_ladder(v.clone()).expect("vertices are valid states"))
            .collect()
    }

    /// `sum_j weights[j] e_{j+1}`.
    pub fn combine(&self, weights: &[T]) -> Result<Vec<T>> {
        if weights.len() != self.dimension {
            return Err(Error::DimensionMismatch(weights.len(), self.dimension));
        }
        let mut out = vec![T::zero(); self.dimension];
        for (w, vertex) in weights.iter().zip(&self.vertices) {
            for (slot, &v) in out.iter_mut().zip(vertex) {
                *slot = *slot + *w * v;
            }
        }
        Ok(out)
    }
}

pub fn polytope_vertices<T: Scalar>(d: usize) -> Result<VertexSet<T>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, 2));
    }
    let vertices = (1..=d)
        .map(|j| {
            let mass = T::one() / T::from_usize_exact(j);
            (0..d).map(|i| if i < j { mass } else { T::zero() }).collect()
        })
        .collect();
    Ok(VertexSet { dimension: d, vertices })
}

fn require_simplex<T: Scalar>(state: &DiagonalState<T>) -> Result<()> {
    if !state.spectrum().is_non_degenerate() {
        return Err(Error::DegenerateSpectrum);
    }
    if !is_passive(state) {
        return Err(Error::NotPassive("state"));
    }
    Ok(())
}

/// Barycentric weights `c_j = j (q_{j-1} - q_j)` (with `q_d = 0`) over the
/// polytope vertices; `sum_j c_j e_j` reproduces the state.
pub fn vertex_decomposition<T: Scalar>(state: &DiagonalState<T>) -> Result<Vec<T>> {
    require_simplex(state)?;
    let q = state.probs();
    let d = q.len();
    Ok((1..=d)
        .map(|j| {
            let next = if j < d { q[j] } else { T::zero() };
            T::from_usize_exact(j) * (q[j - 1] - next)
        })
        .collect())
}

/// True iff the passive state lies on a facet, i.e. some barycentric weight
/// vanishes.
pub fn on_boundary<T: Scalar>(state: &DiagonalState<T>) -> Result<bool> {
    Ok(vertex_decomposition(state)?
        .into_iter()
        .any(|c| c <= T::comparison_tolerance()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `+1` on the highest level: certifies `q_{d-1} >= 0`.
    Trivial,
    /// `+1` at index `i`, `-1` at `i + 1` (zero-based).
    AdjacentPair(usize),
    /// `+1` at `lower`, `-1` at `upper`, where `upper` has the higher energy.
    /// Only produced for degenerate spectra.
    LevelPair { lower: usize, upper: usize },
}

/// Diagonal Hermitian operator `W` with `Tr(W rho) >= 0` on passive states.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T> {
    kind: WitnessKind,
    diagonal: Vec<T>,
}

impl<T: Scalar> Witness<T> {
    pub fn trivial(d: usize) -> Self {
        let mut diagonal = vec![T::zero(); d];
        diagonal[d - 1] = T::one();
        Self {
            kind: WitnessKind::Trivial,
            diagonal,
        }
    }

    pub fn adjacent_pair(d: usize, i: usize) -> Result<Self> {
        if i + 1 >= d {
            return Err(Error::InvalidArgument(format!(
                "adjacent pair {i} out of range for dimension {d}"
            )));
        }
        Ok(Self::pair(d, i, i + 1, WitnessKind::AdjacentPair(i)))
    }

    fn pair(d: usize, lower: usize, upper: usize, kind: WitnessKind) -> Self {
        let mut diagonal = vec![T::zero(); d];
        diagonal[lower] = T::one();
        diagonal[upper] = -T::one();
        Self { kind, diagonal }
    }

    pub fn kind(&self) -> WitnessKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diagonal
    }
}

impl<T> fmt::Display for Witness<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WitnessKind::Trivial => f.write_str("W_0"),
            WitnessKind::AdjacentPair(i) => write!(f, "W_{{{},{}}}", i + 1, i + 2),
            WitnessKind::LevelPair { lower, upper } => {
                write!(f, "W_{{{},{}}}", lower + 1, upper + 1)
            }
        }
    }
}

/// The facet normals of the passive simplex: `W_0` and every adjacent pair.
pub fn facet_witnesses<T: Scalar>(d: usize) -> Result<Vec<Witness<T>>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, 2));
    }
    let mut witnesses = vec![Witness::trivial(d)];
    for i in 0..d - 1 {
        witnesses.push(Witness::adjacent_pair(d, i)?);
    }
    Ok(witnesses)
}

/// `Tr(W rho) = sum_i w_i q_i`.
pub fn evaluate_witness<T: Scalar>(witness: &Witness<T>, state: &DiagonalState<T>) -> Result<T> {
    if witness.dimension() != state.dim() {
        return Err(Error::DimensionMismatch(witness.dimension(), state.dim()));
    }
    Ok(sum(witness.diagonal.iter().zip(state.probs()).map(|(&w, &q)| w * q)))
}

/// The most violated witness, or `None` exactly when the state is passive.
pub fn detect_active<T: Scalar>(state: &DiagonalState<T>) -> Option<Witness<T>> {
    let (low, high) = worst_violation(state)?;
    let d = state.dim();
    let levels = state.spectrum().levels();
    let adjacent =
        high == low + 1 && state.spectrum().energy_blocks().iter().all(|b| b.len() == 1) && levels[low] < levels[high];
    let kind = if adjacent {
        WitnessKind::AdjacentPair(low)
    } else {
        WitnessKind::LevelPair {
            lower: low,
            upper: high,
        }
    };
    Some(Witness::pair(d, low, high, kind))
}
