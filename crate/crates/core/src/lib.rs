//! Equilibria of estimation games between transmitting sensors and jamming
//! sensors on a Gaussian multiple-access channel.
//!
//! Everything is generic over the scalar type (`f32` or `f64`); the aliases
//! below fix it to `f64`, with `F32*` counterparts for single precision.

pub mod asym;
pub mod bounds;
pub mod error;
pub mod model;
pub mod scalar;
pub mod simulate;
pub mod symmetric;

pub use error::{Error, Result};
pub use model::{KnownDiscrepancy, Setting};
pub use scalar::Scalar;

pub type SensorParams = model::SensorParams<f64>;
pub type NetworkScenario = model::NetworkScenario<f64>;
pub type StrategyProfile = model::StrategyProfile<f64>;
pub type AdversaryStrategy = model::AdversaryStrategy<f64>;
pub type EquilibriumReport = model::EquilibriumReport<f64>;
pub type Theorem4Solution = asym::Theorem4Solution<f64>;
pub type Theorem5Solution = asym::Theorem5Solution<f64>;
pub type SymmetricCostInputs = symmetric::SymmetricCostInputs<f64>;

pub type F32SensorParams = model::SensorParams<f32>;
pub type F32NetworkScenario = model::NetworkScenario<f32>;
pub type F32StrategyProfile = model::StrategyProfile<f32>;
pub type F32EquilibriumReport = model::EquilibriumReport<f32>;
