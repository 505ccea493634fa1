//! Acceptance tolerances, kept in one place.
//!
//! Relative tolerances are `|computed / reference - 1| <= tol`; factor
//! tolerances are `reference / k <= computed <= reference * k`.

/// Percent-level agreement for closed forms that reproduce printed values.
pub const TIGHT: f64 = 0.02;
pub const STANDARD: f64 = 0.05;
/// Tabulated times, disc pressures and rounded gravity values.
pub const LOOSE: f64 = 0.10;
/// Oscillator grid cells and headline pressure.
pub const OSCILLATOR_FACTOR: f64 = 3.0;
pub const OSCILLATOR_TEMPERATURE_FACTOR: f64 = 1.5;
/// Thermal-threshold comparison against the printed temperatures.
pub const THRESHOLD: f64 = 0.30;
/// Fitted power-law exponent of a Monte-Carlo ensemble.
pub const MC_EXPONENT: f64 = 0.05;
/// Monte-Carlo RMS agreement, in standard errors.
pub const MC_STANDARD_ERRORS: f64 = 3.0;
/// CSL energy gain.
pub const ENERGY_GAIN: f64 = 0.03;

pub fn within_relative(computed: f64, reference: f64, tol: f64) -> bool {
    (computed / reference - 1.0).abs() <= tol
}

pub fn within_factor(computed: f64, reference: f64, factor: f64) -> bool {
    computed >= reference / factor && computed <= reference * factor
}
