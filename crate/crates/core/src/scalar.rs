//! Scalar abstraction shared by every module.
//!
//! The combinatorial parts of the library (optimal charging, discharging,
//! majorization, polytope geometry) only need ordered-field arithmetic and
//! therefore work over [`Scalar`], which includes exact rationals. Anything
//! involving logarithms or exponentials requires [`Real`].

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Exact rational scalar.
pub type Rational = Ratio<i128>;

/// Ordered field used for probabilities and energies.
pub trait Scalar:
    Num + Neg<Output = Self> + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Allowed deviation of a probability vector's total from one.
    fn normalization_tolerance() -> Self;

    /// Relative slack under which two compared quantities count as equal.
    fn comparison_tolerance() -> Self;

    /// Absolute slack under which two energies are treated as degenerate.
    fn degeneracy_tolerance() -> Self;

    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("integer is representable")
    }

    fn abs_val(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Floating-point scalar with transcendental functions.
pub trait Real: Scalar + Float {}

impl<T: Scalar + Float> Real for T {}

impl Scalar for f64 {
    fn normalization_tolerance() -> Self {
        1e-12
    }
    fn comparison_tolerance() -> Self {
        1e-12
    }
    fn degeneracy_tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn normalization_tolerance() -> Self {
        1e-5
    }
    fn comparison_tolerance() -> Self {
        1e-6
    }
    fn degeneracy_tolerance() -> Self {
        1e-5
    }
}

impl Scalar for Rational {
    fn normalization_tolerance() -> Self {
        Ratio::from_integer(0)
    }
    fn comparison_tolerance() -> Self {
        Ratio::from_integer(0)
    }
    fn degeneracy_tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

/// `a > b` beyond the relative comparison tolerance.
pub(crate) fn exceeds<T: Scalar>(a: T, b: T) -> bool {
    a - b > T::comparison_tolerance() * a.abs_val().max_of(b.abs_val())
}

/// `a >= b` up to the relative comparison tolerance.
pub(crate) fn at_least<T: Scalar>(a: T, b: T) -> bool {
    !exceeds(b, a)
}

/// Sum in a canonical (descending) order so that two code paths selecting the
/// same multiset of values produce bit-identical floating-point results.
pub(crate) fn canonical_sum<T: Scalar>(mut values: Vec<T>) -> T {
    values.sort_by(|a, b| b.partial_cmp(a).expect("comparable scalars"));
    values.into_iter().fold(T::zero(), |acc, v| acc + v)
}

pub(crate) fn sum<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values.into_iter().fold(T::zero(), |acc, v| acc + v)
}

/// Parses `"a/b"`, `"a"` or a decimal literal such as `"0.35"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: i128 = num.trim().parse().ok()?;
        let den: i128 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Ratio::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let den = 10i128.checked_pow(frac_part.len() as u32)?;
    let value = Ratio::new(num, den);
    Some(if negative { -value } else { value })
}
