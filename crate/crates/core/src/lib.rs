//! Single-electron wavepacket interacting with a radiation wave over a finite
//! length: closed-form perturbation theory and a split-operator solver of the
//! longitudinal modified Schrodinger equation.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod params;
pub mod scalar;
pub mod scenarios;
pub mod solver;
pub mod units;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Constants = units::PhysicalConstants<f64>;
pub type Beam = params::BeamState<f64>;
pub type Drive = params::FieldDrive<f64>;
pub type Source = params::SourceWavepacket<f64>;
pub type Interaction = params::InteractionParams<f64>;
pub type Grid = analytic::MomentumGrid<f64>;
pub type Spectrum = analytic::SpectrumResult<f64>;
