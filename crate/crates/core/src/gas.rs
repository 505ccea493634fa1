//! Mean time between gas-molecule impacts in the impact realm.
//!
//! All three geometries share the law `tau = C (T / T0)^{1/2} / P` with P in
//! picoTorr; only the coefficient C differs.

use serde::Serialize;

use crate::error::{positive, Error, Result};
use crate::units::CGS;

pub const SPHERE_COLLISION_COEFFICIENT: f64 = 2.0;
pub const DISC_COLLISION_COEFFICIENT: f64 = 1.03;
/// Plate coefficient, divided by the plate area in cm^2.
pub const PLATE_COLLISION_COEFFICIENT: f64 = 1.3e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasEnvironment {
    /// Ambient temperature (K).
    pub t_e: f64,
    /// Pressure (picoTorr).
    pub pressure_pt: f64,
}

impl GasEnvironment {
    pub fn new(t_e: f64, pressure_pt: f64) -> Result<Self> {
        Ok(Self { t_e: positive("T_e", t_e)?, pressure_pt: positive("pressure", pressure_pt)? })
    }
}

fn tau(coefficient: f64, t: f64, p_pt: f64) -> Result<f64> {
    let t = positive("temperature", t)?;
    if p_pt == 0.0 {
        return Err(Error::InfiniteTime);
    }
    let p = positive("pressure", p_pt)?;
    Ok(coefficient * (t / CGS.t_room).sqrt() / p)
}

/// Pressure (pT) at which the collision time equals `tau_c`.
fn pressure_for(coefficient: f64, t: f64, tau_c: f64) -> Result<f64> {
    let t = positive("temperature", t)?;
    Ok(coefficient * (t / CGS.t_room).sqrt() / positive("tau_c", tau_c)?)
}

pub fn tau_sphere(t_e: f64, p_pt: f64) -> Result<f64> {
    tau(SPHERE_COLLISION_COEFFICIENT, t_e, p_pt)
}

pub fn tau_disc(t_e: f64, p_pt: f64) -> Result<f64> {
    tau(DISC_COLLISION_COEFFICIENT, t_e, p_pt)
}

/// Collision time for a plate of area `area` (cm^2).
pub fn tau_plate(area: f64, t: f64, p_pt: f64) -> Result<f64> {
    tau(PLATE_COLLISION_COEFFICIENT / positive("area", area)?, t, p_pt)
}

pub fn pressure_for_tau_sphere(t_e: f64, tau_c: f64) -> Result<f64> {
    pressure_for(SPHERE_COLLISION_COEFFICIENT, t_e, tau_c)
}

pub fn pressure_for_tau_disc(t_e: f64, tau_c: f64) -> Result<f64> {
    pressure_for(DISC_COLLISION_COEFFICIENT, t_e, tau_c)
}

pub fn pressure_for_tau_plate(area: f64, t: f64, tau_c: f64) -> Result<f64> {
    pressure_for(PLATE_COLLISION_COEFFICIENT / positive("area", area)?, t, tau_c)
}

/// Whether individual impacts are resolvable over an observation of length
/// `t_observation`.
pub fn impact_realm_ok(tau_c: f64, t_observation: f64) -> bool {
    tau_c > t_observation
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sphere_collision_time() {
        assert_relative_eq!(tau_sphere(300.0, 1.0).unwrap(), 2.0);
        let t = tau_sphere(100.0, 8.2e-3).unwrap();
        assert_relative_eq!(t, 140.8, max_relative = 1e-3);
        // closes with t_CSL(GRW, 1e-5 cm) / chi = 13 / 0.1
        assert!((t / 130.0 - 1.0).abs() < 0.10);
        assert_relative_eq!(tau_sphere(100.0, 2.0 * 8.2e-3).unwrap(), t / 2.0, max_relative = 1e-14);
        assert_eq!(tau_sphere(300.0, 0.0), Err(Error::InfiniteTime));
    }

    #[test]
    fn disc_collision_time() {
        assert_relative_eq!(tau_disc(300.0, 1.0).unwrap(), 1.03);
        let t = tau_disc(100.0, 0.3).unwrap();
        assert!((t / 1.98 - 1.0).abs() < 0.01);
        assert!((t / 2.0 - 1.0).abs() < 0.10);
        assert!(tau_disc(0.0, 1.0).is_err());
    }

    #[test]
    fn plate_collision_time() {
        assert_relative_eq!(tau_plate(1e-12, 300.0, 1.0).unwrap(), 1.3e3, max_relative = 1e-14);
        assert_relative_eq!(tau_plate(1e-11, 300.0, 1.0).unwrap(), 1.3e2, max_relative = 1e-14);
        // headline oscillator point: observing for 1 s should be chi ~ 0.1 of tau
        let chi = 1.0 / tau_plate(1e-12, 1.6e-3, 0.3).unwrap();
        assert!((0.05..=0.2).contains(&chi), "chi {chi}");
        assert!(tau_plate(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn pressure_inversion() {
        let p = pressure_for_tau_sphere(100.0, 140.8).unwrap();
        assert_relative_eq!(tau_sphere(100.0, p).unwrap(), 140.8, max_relative = 1e-14);
        let p = pressure_for_tau_plate(1e-12, 1e-3, 10.0).unwrap();
        assert_relative_eq!(tau_plate(1e-12, 1e-3, p).unwrap(), 10.0, max_relative = 1e-14);
    }

    #[test]
    fn impact_realm_flag() {
        assert!(impact_realm_ok(10.0, 1.0));
        assert!(!impact_realm_ok(1.0, 1.0));
    }

    proptest::proptest! {
        #[test]
        fn scaling_laws(t in 1e-3f64..1e3, p in 1e-6f64..1e3) {
            let s = tau_sphere(t, p).unwrap();
            proptest::prop_assert!((tau_sphere(4.0 * t, p).unwrap() / s - 2.0).abs() < 1e-13);
            proptest::prop_assert!((tau_sphere(t, 2.0 * p).unwrap() / s - 0.5).abs() < 1e-13);
            proptest::prop_assert!((s / tau_disc(t, p).unwrap() - 2.0 / 1.03).abs() < 1e-13);
        }
    }
}
