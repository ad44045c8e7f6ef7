//! Passive states as chargers and dischargers of a qubit quantum battery.
//!
//! The battery is a qubit with gap `E`; chargers are diagonal states of a
//! `d`-level system, usually on the unit ladder `0, 1, ..., d-1`. Charging is
//! restricted to energy-conserving joint unitaries, discharging is not.
//!
//! Combinatorial routines are generic over [`Scalar`] and run on `f64`, `f32`
//! and the exact [`Rational`]; anything with logarithms needs [`Real`].
//!
//! ```
//! use passive_battery::{charging, Battery, State};
//!
//! let battery = Battery::new(0.8, 0.2).unwrap();
//! let charger = State::on_ladder(vec![0.5, 0.4, 0.1]).unwrap();
//! let result = charging::optimal_charge(&battery, &charger);
//! assert!((result.delta - 0.22).abs() < 1e-12);
//! ```

pub mod activation;
pub mod charging;
pub mod discharging;
pub mod error;
pub mod figures;
pub mod geometry;
pub mod multicopy;
pub mod sampling;
pub mod scalar;
pub mod state;

pub use error::{Error, Result};
pub use scalar::{parse_rational, Rational, Real, Scalar};
pub use state::{
    majorizes, mean_energy, shannon_entropy, tensor, DiagonalState, EnergySpectrum, InverseTemperature,
    JointDiagonalState, JointEntry, QubitBattery, TENSOR_CAP,
};

pub type State = DiagonalState<f64>;
pub type Battery = QubitBattery<f64>;
pub type Spectrum = EnergySpectrum<f64>;
pub type ExactState = DiagonalState<Rational>;
pub type ExactBattery = QubitBattery<Rational>;
pub type ExactSpectrum = EnergySpectrum<Rational>;
