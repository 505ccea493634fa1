//! Physical constants (CGS) and the handful of unit conversions used at the
//! API edges. Every formula in the crate reads its constants from [`CGS`].

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, positive, Result};

/// Table of physical constants in CGS units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (erg s).
    pub hbar: f64,
    /// Boltzmann constant (erg/K).
    pub k_b: f64,
    /// Speed of light (cm/s).
    pub c_light: f64,
    /// Nucleon mass (g).
    pub m_nucleon: f64,
    /// Newton's constant (cm^3 g^-1 s^-2).
    pub g_newton: f64,
    /// Room temperature reference (K).
    pub t_room: f64,
    /// Atomic mass unit (g).
    pub amu_in_g: f64,
}

pub const CGS: PhysicalConstants = PhysicalConstants {
    hbar: 1.0546e-27,
    k_b: 1.3807e-16,
    c_light: 2.998e10,
    m_nucleon: 1.6726e-24,
    g_newton: 6.674e-8,
    t_room: 300.0,
    amu_in_g: 1.6605e-24,
};

const PICO: f64 = 1e12;

pub fn torr_to_picotorr(p_torr: f64) -> Result<f64> {
    Ok(non_negative("pressure (Torr)", p_torr)? * PICO)
}

pub fn picotorr_to_torr(p_pt: f64) -> Result<f64> {
    Ok(non_negative("pressure (pT)", p_pt)? / PICO)
}

pub fn amu_to_grams(m_amu: f64) -> Result<f64> {
    Ok(non_negative("mass (amu)", m_amu)? * CGS.amu_in_g)
}

pub fn grams_to_amu(m_g: f64) -> Result<f64> {
    Ok(non_negative("mass (g)", m_g)? / CGS.amu_in_g)
}

/// How a sphere's mass follows from its radius and density.
///
/// `PaperFit` (M = D R^3) is the convention the published fitted coefficients
/// were produced with; `Geometric` is the true volume (4 pi / 3) D R^3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassConvention {
    #[default]
    PaperFit,
    Geometric,
}

impl std::str::FromStr for MassConvention {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "paper-fit" | "paper" | "fit" => Ok(Self::PaperFit),
            "geometric" | "geo" => Ok(Self::Geometric),
            other => Err(crate::Error::Config(format!("unknown mass convention '{other}'"))),
        }
    }
}

pub fn sphere_mass(radius: f64, density: f64, convention: MassConvention) -> Result<f64> {
    let r = positive("radius", radius)?;
    let d = positive("density", density)?;
    let cube = d * r * r * r;
    Ok(match convention {
        MassConvention::PaperFit => cube,
        MassConvention::Geometric => 4.0 * std::f64::consts::PI / 3.0 * cube,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn picotorr_conversions() {
        assert_relative_eq!(torr_to_picotorr(1e-12).unwrap(), 1.0, max_relative = 1e-15);
        assert_eq!(torr_to_picotorr(0.0).unwrap(), 0.0);
        assert_relative_eq!(torr_to_picotorr(5e-17).unwrap(), 5e-5, max_relative = 1e-15);
        assert!(torr_to_picotorr(-1.0).is_err());
        assert!(picotorr_to_torr(-1.0).is_err());
    }

    #[test]
    fn amu_conversions() {
        assert_eq!(amu_to_grams(1.0).unwrap(), 1.6605e-24);
        assert_relative_eq!(amu_to_grams(1e12).unwrap(), 1.6605e-12, max_relative = 1e-15);
        assert_eq!(amu_to_grams(0.0).unwrap(), 0.0);
        assert!(amu_to_grams(-3.0).is_err());
    }

    #[test]
    fn sphere_mass_conventions() {
        let geo = sphere_mass(1e-5, 1.0, MassConvention::Geometric).unwrap();
        assert_relative_eq!(geo, 4.18879e-15, max_relative = 1e-5);
        let fit = sphere_mass(1e-5, 1.0, MassConvention::PaperFit).unwrap();
        assert_relative_eq!(fit, 1e-15, max_relative = 1e-12);
        let big = sphere_mass(1e-4, 1.0, MassConvention::Geometric).unwrap();
        assert_relative_eq!(big, 4.18879e-12, max_relative = 1e-5);
        assert!(sphere_mass(0.0, 1.0, MassConvention::PaperFit).is_err());
        assert!(sphere_mass(1e-5, -1.0, MassConvention::Geometric).is_err());
    }

    #[test]
    fn mass_convention_parses() {
        assert_eq!("paper-fit".parse::<MassConvention>().unwrap(), MassConvention::PaperFit);
        assert_eq!("geometric".parse::<MassConvention>().unwrap(), MassConvention::Geometric);
        assert!("cubic".parse::<MassConvention>().is_err());
    }

    proptest::proptest! {
        #[test]
        fn conversions_round_trip(p in 0.0f64..1e6, m in 0.0f64..1e20) {
            let back = picotorr_to_torr(torr_to_picotorr(p).unwrap()).unwrap();
            proptest::prop_assert!((back - p).abs() <= 2.0 * f64::EPSILON * p);
            let back = grams_to_amu(amu_to_grams(m).unwrap()).unwrap();
            proptest::prop_assert!((back - m).abs() <= 2.0 * f64::EPSILON * m);
        }

        #[test]
        fn sphere_mass_ratio_and_monotone(r in 1e-7f64..1e-2, d in 0.01f64..30.0, k in 1.0001f64..3.0) {
            let fit = sphere_mass(r, d, MassConvention::PaperFit).unwrap();
            let geo = sphere_mass(r, d, MassConvention::Geometric).unwrap();
            let ratio = geo / fit;
            proptest::prop_assert!((ratio - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
            proptest::prop_assert!(sphere_mass(k * r, d, MassConvention::PaperFit).unwrap() > fit);
            proptest::prop_assert!(sphere_mass(r, k * d, MassConvention::Geometric).unwrap() > geo);
        }
    }
}
