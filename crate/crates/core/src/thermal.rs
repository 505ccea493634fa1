//! Photon-recoil localization rates and the thermal Brownian displacement
//! they produce.
//!
//! Three channels contribute: scattering of ambient photons (scales as
//! R^6 T_e^9), absorption of ambient photons (R^3 T_e^6) and emission from the
//! object's own internal temperature (R^3 T_i^6). The dielectric factors
//! Re/Im[(eps - 1)/(eps + 2)]^2 default to one.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{non_negative, positive, Result};
use crate::units::CGS;

/// Riemann zeta(9).
pub const ZETA_9: f64 = 1.0020083928;

/// Fitted coefficient of the emission-limited displacement
/// `6.35e-20 D^-1 R^-3/2 T_i^3 t^3/2` (cm), valid with mass D R^3.
pub const EMISSION_FIT_COEFFICIENT: f64 = 6.35e-20;

/// Internal-temperature thresholds below which scattering overtakes emission,
/// as printed for T_e = 300 K and T_e = 100 K.
pub const PRINTED_THRESHOLD_TE300: f64 = 76.3;
pub const PRINTED_THRESHOLD_TE100: f64 = 14.7;

/// Reference prefactor of the scattering-only displacement estimate (cm).
const CP_SPHERE_COEFFICIENT: f64 = 8.0;
const CP_SPHERE_TIME_SCALE: f64 = 1e5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalEnvironment {
    /// Ambient radiation temperature (K).
    pub t_e: f64,
    /// Internal temperature of the object (K).
    pub t_i: f64,
}

impl ThermalEnvironment {
    pub fn new(t_e: f64, t_i: f64) -> Result<Self> {
        Ok(Self { t_e: positive("T_e", t_e)?, t_i: positive("T_i", t_i)? })
    }
}

/// Multipliers standing in for the dielectric factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DielectricFactors {
    /// Re[(eps - 1)/(eps + 2)]^2, multiplies scattering.
    pub real_part: f64,
    /// Im[(eps - 1)/(eps + 2)]^2, multiplies emission and absorption.
    pub imag_part: f64,
}

impl Default for DielectricFactors {
    fn default() -> Self {
        Self { real_part: 1.0, imag_part: 1.0 }
    }
}

/// Localization parameters in cm^-2 s^-1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalizationParameters {
    pub lambda_sc: f64,
    pub lambda_e: f64,
    pub lambda_a: f64,
    pub total: f64,
}

#[inline]
fn inverse_thermal_wavelength(t: f64) -> f64 {
    CGS.k_b * t / (CGS.hbar * CGS.c_light)
}

fn scattering_prefactor() -> f64 {
    // 8! * 8 * zeta(9) / (9 pi)
    40320.0 * 8.0 * ZETA_9 / (9.0 * PI)
}

fn emission_prefactor() -> f64 {
    16.0 * PI.powi(5) / 189.0
}

/// Scattering localization rate for a sphere of radius `radius` (cm).
pub fn lambda_scattering(radius: f64, t_e: f64) -> Result<f64> {
    let r = positive("radius", radius)?;
    let t = positive("T_e", t_e)?;
    Ok(scattering_prefactor() * CGS.c_light * r.powi(6) * inverse_thermal_wavelength(t).powi(9))
}

/// Emission localization rate at internal temperature `t_i`.
pub fn lambda_emission(radius: f64, t_i: f64) -> Result<f64> {
    let r = positive("radius", radius)?;
    let t = positive("T_i", t_i)?;
    Ok(emission_prefactor() * CGS.c_light * r.powi(3) * inverse_thermal_wavelength(t).powi(6))
}

/// Absorption localization rate at ambient temperature `t_e`. Same law as
/// emission, evaluated at the ambient temperature.
pub fn lambda_absorption(radius: f64, t_e: f64) -> Result<f64> {
    lambda_emission(radius, t_e).map_err(|_| crate::Error::Domain {
        name: "T_e",
        value: t_e,
        requirement: "radius and T_e must be > 0",
    })
}

pub fn localization(
    radius: f64,
    env: &ThermalEnvironment,
    dielectric: &DielectricFactors,
) -> Result<LocalizationParameters> {
    let lambda_sc = dielectric.real_part * lambda_scattering(radius, env.t_e)?;
    let lambda_e = dielectric.imag_part * lambda_emission(radius, env.t_i)?;
    let lambda_a = dielectric.imag_part * lambda_absorption(radius, env.t_e)?;
    Ok(LocalizationParameters { lambda_sc, lambda_e, lambda_a, total: lambda_sc + lambda_e + lambda_a })
}

/// Ratios of emission and absorption to scattering, from the full coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceRatios {
    pub emission_over_scattering: f64,
    pub absorption_over_scattering: f64,
}

impl DominanceRatios {
    pub fn emission_dominant(&self) -> bool {
        self.emission_over_scattering >= 1.0
    }
}

pub fn dominance_ratios(radius: f64, t_e: f64, t_i: f64) -> Result<DominanceRatios> {
    let sc = lambda_scattering(radius, t_e)?;
    Ok(DominanceRatios {
        emission_over_scattering: lambda_emission(radius, t_i)? / sc,
        absorption_over_scattering: lambda_absorption(radius, t_e)? / sc,
    })
}

/// Internal temperature at which emission equals scattering.
///
/// The ratio is a pure power law, T_i^6 / (R^3 T_e^9), so the root is closed
/// form: T_i = T_e (Lambda_sc / Lambda_a)^{1/6}.
pub fn emission_threshold_temperature(radius: f64, t_e: f64) -> Result<f64> {
    let ratios = dominance_ratios(radius, t_e, t_e)?;
    Ok(t_e * ratios.absorption_over_scattering.powf(-1.0 / 6.0))
}

/// RMS displacement after time `t` from rest under momentum diffusion with
/// localization parameter `lambda`: sqrt(2 Lambda / 3) (hbar / M) t^{3/2}.
pub fn thermal_displacement(mass: f64, lambda: f64, t: f64) -> Result<f64> {
    let m = positive("mass", mass)?;
    let l = non_negative("Lambda", lambda)?;
    let t = non_negative("t", t)?;
    Ok((2.0 * l / 3.0).sqrt() * CGS.hbar / m * t.powf(1.5))
}

/// First-principles value of the emission-limited displacement coefficient,
/// combining [`thermal_displacement`] and [`lambda_emission`] with M = D R^3.
pub fn emission_displacement_coefficient() -> f64 {
    let lambda_root = (emission_prefactor() * CGS.c_light).sqrt() * inverse_thermal_wavelength(1.0).powi(3);
    (2.0f64 / 3.0).sqrt() * lambda_root * CGS.hbar
}

/// Emission-limited displacement in the fitted form
/// `6.35e-20 D^-1 R^-3/2 T_i^3 t^3/2` (cm).
pub fn thermal_displacement_emission_fit(density: f64, radius: f64, t_i: f64, t: f64) -> Result<f64> {
    let d = positive("density", density)?;
    let r = positive("radius", radius)?;
    let ti = positive("T_i", t_i)?;
    let t = non_negative("t", t)?;
    Ok(EMISSION_FIT_COEFFICIENT / d * r.powf(-1.5) * ti.powi(3) * t.powf(1.5))
}

/// Older scattering-only estimate `8 D^-1 (T_e/T0)^{9/2} (t/1e5)^{3/2}` (cm).
pub fn thermal_displacement_cp_sphere(density: f64, t_e: f64, t: f64) -> Result<f64> {
    let d = positive("density", density)?;
    let te = positive("T_e", t_e)?;
    let t = non_negative("t", t)?;
    Ok(CP_SPHERE_COEFFICIENT / d * (te / CGS.t_room).powf(4.5) * (t / CP_SPHERE_TIME_SCALE).powf(1.5))
}
