//! Simulation library for cascaded SHG/DFG frequency conversion treated as a
//! three-level adiabatic passage, together with the time-rescaling shortcut
//! that contracts the conversion length by a factor `a`.
//!
//! All numerical code is generic over [`Real`] (implemented for `f32` and
//! `f64`). The aliases below fix the scalar to `f64`, which is what the CLI
//! and the acceptance tests use.
//!
//! Lengths are in millimetres and coupling rates / detunings in mm⁻¹.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupledwave;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod profiles;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type PlainGaussianParams = profiles::PlainGaussianParams<f64>;
pub type RescalingParams = profiles::RescalingParams<f64>;
pub type CouplingSchedule = profiles::CouplingSchedule<f64>;
pub type StateVector = dynamics::StateVector<f64>;
pub type HamiltonianSample = dynamics::HamiltonianSample<f64>;
pub type PropagationResult = dynamics::PropagationResult<f64>;
pub type WaveParameters = coupledwave::WaveParameters<f64>;
pub type WaveState = coupledwave::WaveState<f64>;
pub type WaveTrajectory = coupledwave::WaveTrajectory<f64>;
pub type ModelComparison = coupledwave::ModelComparison<f64>;
pub type Trace = experiments::Trace<f64>;
pub type SweepSpec = experiments::SweepSpec<f64>;
pub type SweepResult = experiments::SweepResult<f64>;
pub type AdiabaticityReport = experiments::AdiabaticityReport<f64>;

/// Single-precision variants, mostly useful for quick scans.
pub type CouplingSchedule32 = profiles::CouplingSchedule<f32>;
pub type PropagationResult32 = dynamics::PropagationResult<f32>;

pub use dynamics::IntegratorSettings;
pub use profiles::{DetuningMode, ScheduleKind};
