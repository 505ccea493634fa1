use thiserror::Error;

/// Errors raised by the physics and solver modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the formula.
    #[error("{name} = {value:e} is outside the valid domain ({requirement})")]
    Domain { name: &'static str, value: f64, requirement: &'static str },

    /// A t^{3/2} or linear law with a zero prefactor never reaches a target.
    #[error("no diffusion: the {0} law has a zero prefactor")]
    NoDiffusion(&'static str),

    /// Zero pressure means collisions never happen.
    #[error("collision time is infinite at zero pressure")]
    InfiniteTime,

    #[error("exponent {0:.1} overflows exp(); beta*hbar*omega must stay below 700")]
    Overflow(f64),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { name, value, requirement: "must be > 0" })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { name, value, requirement: "must be >= 0" })
    }
}

pub(crate) fn fraction(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value <= 1.0 {
        Ok(value)
    } else {
        Err(Error::Domain { name, value, requirement: "must lie in (0, 1]" })
    }
}
