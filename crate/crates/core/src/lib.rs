//! Random-walk signatures of spontaneous wave-function collapse.
//!
//! Closed-form displacement laws for collapse-induced, gravity-induced,
//! thermal, gas and quantum Brownian diffusion of spheres, discs and
//! oscillators, the inverse solvers that turn them into experimental
//! requirements (internal temperature, ambient pressure), and a Monte-Carlo
//! oracle for the t^{3/2} laws. CGS units throughout; pressures in picoTorr.

pub mod cli;
pub mod diffusion;
pub mod error;
pub mod feasibility;
pub mod fit;
pub mod gas;
pub mod models;
pub mod oscillator;
pub mod stochastic;
pub mod table;
pub mod thermal;
pub mod tolerances;
pub mod units;

pub use error::{Error, Result};
pub use models::{CollapseModel, ModelKind};

/// Crate version, embedded in every run record.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
