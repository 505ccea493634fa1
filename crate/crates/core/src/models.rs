//! Collapse-rate parameterizations and geometric form factors.
//!
//! The gravity models enter the diffusion laws through an effective collapse
//! rate: the value that makes the CSL t^{3/2} law coincide with the gravity
//! law for the reference object.

use serde::Serialize;

use crate::error::{non_negative, positive, Error, Result};
use crate::units::CGS;

pub const LAMBDA_GRW: f64 = 1e-16;
pub const LAMBDA_ADLER: f64 = 1e-8;
/// Alternative CSL rate used by some authors.
pub const LAMBDA_CSL_LOW: f64 = 1e-17;
/// Rounded effective Karolyhazy rate used for tabulated values.
pub const LAMBDA_KAROLYHAZY_ROUNDED: f64 = 1e-24;
/// Rounded effective Diosi-Penrose rate used for tabulated values.
pub const LAMBDA_DP_ROUNDED: f64 = 1e-23;
/// Critical localization length r_c (cm).
pub const DEFAULT_RC: f64 = 1e-5;

/// Prefactor linking the CSL and Karolyhazy laws: the CSL sphere displacement
/// is written as `20 lambda^{1/2} t^{3/2}` when the two are equated.
const KAROLYHAZY_MATCH_PREFACTOR: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Grw,
    Csl,
    Adler,
    Karolyhazy,
    DiosiPenrose,
    Custom,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Grw => "grw",
            Self::Csl => "csl",
            Self::Adler => "adler",
            Self::Karolyhazy => "karolyhazy",
            Self::DiosiPenrose => "dp",
            Self::Custom => "custom",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grw" => Ok(Self::Grw),
            "csl" => Ok(Self::Csl),
            "adler" => Ok(Self::Adler),
            "karolyhazy" | "k" => Ok(Self::Karolyhazy),
            "dp" | "diosi-penrose" | "diosi_penrose" => Ok(Self::DiosiPenrose),
            "custom" => Ok(Self::Custom),
            other => Err(Error::Config(format!("unknown collapse model '{other}'"))),
        }
    }
}

/// A named collapse rate `lambda` (s^-1) with localization length `r_c` (cm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapseModel {
    pub kind: ModelKind,
    pub lambda: f64,
    pub r_c: f64,
}

impl CollapseModel {
    pub fn new(kind: ModelKind, lambda: f64, r_c: f64) -> Result<Self> {
        Ok(Self { kind, lambda: non_negative("lambda", lambda)?, r_c: positive("r_c", r_c)? })
    }

    /// Preset rate for `kind` at the default length. `Custom` has no preset
    /// and starts at lambda = 0.
    pub fn preset(kind: ModelKind) -> Self {
        let lambda = match kind {
            ModelKind::Grw | ModelKind::Csl => LAMBDA_GRW,
            ModelKind::Adler => LAMBDA_ADLER,
            ModelKind::Karolyhazy => LAMBDA_KAROLYHAZY_ROUNDED,
            ModelKind::DiosiPenrose => LAMBDA_DP_ROUNDED,
            ModelKind::Custom => 0.0,
        };
        Self { kind, lambda, r_c: DEFAULT_RC }
    }

    pub fn grw() -> Self {
        Self::preset(ModelKind::Grw)
    }

    pub fn csl() -> Self {
        Self::preset(ModelKind::Csl)
    }

    /// CSL with the lower 1e-17 s^-1 rate.
    pub fn csl_low() -> Self {
        Self { lambda: LAMBDA_CSL_LOW, ..Self::csl() }
    }

    pub fn adler() -> Self {
        Self::preset(ModelKind::Adler)
    }

    pub fn karolyhazy() -> Self {
        Self::preset(ModelKind::Karolyhazy)
    }

    pub fn diosi_penrose() -> Self {
        Self::preset(ModelKind::DiosiPenrose)
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::new(self.kind, lambda, self.r_c)
    }

    pub fn with_rc(self, r_c: f64) -> Result<Self> {
        Self::new(self.kind, self.lambda, r_c)
    }
}

/// Geometric form factors of the CSL diffusion laws.
///
/// Only anchor values are known: `f_trans = 0.62` for a sphere with R = r_c and
/// `f_rot = 1/3` for a disc with b = 0.5 r_c, L = 2 r_c. Other geometries must
/// supply their own values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormFactors {
    pub f_trans: f64,
    pub f_rot: f64,
}

pub const F_TRANS_ANCHOR: f64 = 0.62;
pub const F_ROT_ANCHOR: f64 = 1.0 / 3.0;

impl Default for FormFactors {
    fn default() -> Self {
        Self { f_trans: F_TRANS_ANCHOR, f_rot: F_ROT_ANCHOR }
    }
}

impl FormFactors {
    pub fn new(f_trans: f64, f_rot: f64) -> Result<Self> {
        for (name, v) in [("f_trans", f_trans), ("f_rot", f_rot)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Domain { name, value: v, requirement: "must lie in (0, 1]" });
            }
        }
        Ok(Self { f_trans, f_rot })
    }
}

/// Karolyhazy coherence-cell length `a_c` (cm) and decoherence time `tau_g` (s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KarolyhazyParams {
    pub a_c: f64,
    pub tau_g: f64,
}

impl KarolyhazyParams {
    pub fn new(a_c: f64, tau_g: f64) -> Result<Self> {
        Ok(Self { a_c: non_negative("a_c", a_c)?, tau_g: positive("tau_g", tau_g)? })
    }

    /// Reference point for the R = 1e-5 cm, D = 1 g/cc object.
    pub fn reference() -> Self {
        Self { a_c: 1e-5, tau_g: 1000.0 }
    }
}

impl Default for KarolyhazyParams {
    fn default() -> Self {
        Self::reference()
    }
}

/// Effective Karolyhazy rate from `20 lambda^{1/2} t^{3/2} = a_c/10 (t/tau_g)^{3/2}`.
pub fn effective_lambda_karolyhazy(p: &KarolyhazyParams) -> f64 {
    let root = p.a_c / (10.0 * KAROLYHAZY_MATCH_PREFACTOR * p.tau_g.powf(1.5));
    root * root
}

/// Effective Diosi-Penrose rate `G m^2 / (a hbar)` with m the nucleon mass.
pub fn effective_lambda_dp(a: f64) -> Result<f64> {
    let a = positive("a", a)?;
    Ok(CGS.g_newton * CGS.m_nucleon * CGS.m_nucleon / (a * CGS.hbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn presets_match_quoted_rates() {
        assert_eq!(CollapseModel::grw().lambda, 1e-16);
        assert_eq!(CollapseModel::adler().lambda, 1e-8);
        assert_eq!(CollapseModel::csl().lambda, 1e-16);
        assert_eq!(CollapseModel::csl_low().lambda, 1e-17);
        assert_eq!(CollapseModel::grw().r_c, 1e-5);
        assert_eq!(CollapseModel::preset(ModelKind::Custom).lambda, 0.0);
    }

    #[test]
    fn model_validation() {
        assert!(CollapseModel::new(ModelKind::Custom, -1.0, 1e-5).is_err());
        assert!(CollapseModel::new(ModelKind::Custom, 1.0, 0.0).is_err());
        assert!(CollapseModel::grw().with_rc(2e-5).is_ok());
        assert!(FormFactors::new(0.0, 0.5).is_err());
        assert!(FormFactors::new(0.5, 1.5).is_err());
        assert!(KarolyhazyParams::new(1e-5, 0.0).is_err());
    }

    #[test]
    fn parse_model_names() {
        for kind in [
            ModelKind::Grw,
            ModelKind::Csl,
            ModelKind::Adler,
            ModelKind::Karolyhazy,
            ModelKind::DiosiPenrose,
            ModelKind::Custom,
        ] {
            assert_eq!(kind.as_str().parse::<ModelKind>().unwrap(), kind);
        }
        assert!("penrose".parse::<ModelKind>().is_err());
    }

    #[test]
    fn karolyhazy_effective_rate() {
        let lk = effective_lambda_karolyhazy(&KarolyhazyParams::reference());
        assert_relative_eq!(lk, 2.5e-24, max_relative = 1e-12);
        let zero = KarolyhazyParams::new(0.0, 1000.0).unwrap();
        assert_eq!(effective_lambda_karolyhazy(&zero), 0.0);
        let slow = KarolyhazyParams::new(1e-5, 4000.0).unwrap();
        assert_relative_eq!(effective_lambda_karolyhazy(&slow), lk / 64.0, max_relative = 1e-12);
    }

    #[test]
    fn dp_effective_rate() {
        let l = effective_lambda_dp(1e-5).unwrap();
        assert_relative_eq!(l, 1.77e-23, max_relative = 5e-3);
        assert_relative_eq!(effective_lambda_dp(1e-4).unwrap(), l / 10.0, max_relative = 1e-12);
        assert!(effective_lambda_dp(0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn effective_rates_decrease(tau in 1.0f64..1e6, a in 1e-8f64..1e-2, k in 1.001f64..10.0) {
            let p = KarolyhazyParams::new(1e-5, tau).unwrap();
            let q = KarolyhazyParams::new(1e-5, tau * k).unwrap();
            proptest::prop_assert!(effective_lambda_karolyhazy(&q) < effective_lambda_karolyhazy(&p));
            proptest::prop_assert!(effective_lambda_dp(a * k).unwrap() < effective_lambda_dp(a).unwrap());
        }
    }
}
