//! Secular collapse heating of a quantum harmonic oscillator.
//!
//! The energy gain `eta hbar^2 t / 2m` does not depend on the frequency. With
//! the zero-point background subtracted, requiring the thermal occupation
//! energy to be a fraction `epsilon` of the gain fixes the temperature, and
//! requiring the observation time to be a fraction `chi` of the plate
//! collision time fixes the pressure.

use serde::Serialize;

use crate::error::{non_negative, positive, Error, Result};
use crate::gas::PLATE_COLLISION_COEFFICIENT;
use crate::models::{DEFAULT_RC, LAMBDA_GRW};
use crate::units::CGS;

/// Largest `beta hbar omega` passed to `exp`.
pub const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorSpec {
    /// Nucleon count N.
    pub n_nucleons: f64,
    /// Angular frequency (rad/s).
    pub omega: f64,
    /// Plate area seen by the gas (cm^2).
    pub area: f64,
    /// Quality factor.
    pub q: f64,
    pub r_c: f64,
    /// Nucleon number density (cm^-3).
    pub nucleon_density: f64,
}

impl OscillatorSpec {
    pub fn new(n_nucleons: f64, omega: f64, area: f64, q: f64) -> Result<Self> {
        Ok(Self {
            n_nucleons: positive("N", n_nucleons)?,
            omega: positive("omega", omega)?,
            area: positive("area", area)?,
            q: positive("Q", q)?,
            r_c: DEFAULT_RC,
            nucleon_density: 1e24,
        })
    }

    /// 1e12 nucleons at 1e10 rad/s, 1e-12 cm^2 plate, Q = 1e5.
    pub fn headline() -> Self {
        Self::new(1e12, 1e10, 1e-12, 1e5).expect("headline oscillator")
    }

    /// Oscillator whose mass in amu sets the nucleon count.
    pub fn from_mass_amu(mass_amu: f64, omega: f64) -> Result<Self> {
        Ok(Self { n_nucleons: positive("mass (amu)", mass_amu)?, omega: positive("omega", omega)?, ..Self::headline() })
    }

    pub fn with_geometry(self, r_c: f64, nucleon_density: f64) -> Result<Self> {
        Ok(Self { r_c: positive("r_c", r_c)?, nucleon_density: positive("nucleon density", nucleon_density)?, ..self })
    }

    /// Mass N m_nucleon (g).
    pub fn mass(&self) -> f64 {
        self.n_nucleons * CGS.m_nucleon
    }
}

/// Stochasticity parameter `eta` (cm^-2 s^-1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "law", content = "value", rename_all = "snake_case")]
pub enum EtaLaw {
    /// Nucleon counting, `lambda N / r_c^2`.
    Grw,
    /// Mass-density form `8 pi lambda r_c^2 N^{2/3} D^{4/3}`.
    Csl,
    /// The density form with `kappa = lambda / (4 pi r_c^2)^{3/2}` taken
    /// literally. Orders of magnitude off the quoted temperatures; kept for
    /// comparison only.
    CslAsPrinted,
    Custom(f64),
}

impl EtaLaw {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Grw => "grw",
            Self::Csl => "csl",
            Self::CslAsPrinted => "csl_as_printed",
            Self::Custom(_) => "custom",
        }
    }

    pub fn eta(&self, spec: &OscillatorSpec, lambda: f64) -> Result<f64> {
        match *self {
            Self::Grw => eta_grw(spec.n_nucleons, lambda, spec.r_c),
            Self::Csl => eta_csl(spec.n_nucleons, spec.nucleon_density, spec.r_c, lambda),
            Self::CslAsPrinted => eta_csl_as_printed(spec.n_nucleons, spec.nucleon_density, spec.r_c, lambda),
            Self::Custom(v) => non_negative("eta", v),
        }
    }
}

impl std::str::FromStr for EtaLaw {
    type Err = Error;

    /// Accepts `grw`, `csl`, `csl-as-printed` and `custom:<value>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "grw" => Ok(Self::Grw),
            "csl" => Ok(Self::Csl),
            "csl-as-printed" | "csl_as_printed" => Ok(Self::CslAsPrinted),
            _ => match lower.strip_prefix("custom:") {
                Some(v) => v
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad custom eta '{v}'")))
                    .and_then(|v| non_negative("eta", v))
                    .map(Self::Custom),
                None => Err(Error::Config(format!("unknown eta law '{s}' (grw|csl|csl-as-printed|custom:<value>)"))),
            },
        }
    }
}

pub fn eta_grw(n: f64, lambda: f64, r_c: f64) -> Result<f64> {
    Ok(non_negative("lambda", lambda)? / positive("r_c", r_c)?.powi(2) * positive("N", n)?)
}

pub fn eta_csl(n: f64, density: f64, r_c: f64, lambda: f64) -> Result<f64> {
    let (n, d, rc, l) = (
        positive("N", n)?,
        positive("nucleon density", density)?,
        positive("r_c", r_c)?,
        non_negative("lambda", lambda)?,
    );
    Ok(8.0 * std::f64::consts::PI * l * rc * rc * n.powf(2.0 / 3.0) * d.powf(4.0 / 3.0))
}

pub fn eta_csl_as_printed(n: f64, density: f64, r_c: f64, lambda: f64) -> Result<f64> {
    let (n, d, rc, l) = (
        positive("N", n)?,
        positive("nucleon density", density)?,
        positive("r_c", r_c)?,
        non_negative("lambda", lambda)?,
    );
    let pi = std::f64::consts::PI;
    let kappa = l / (4.0 * pi * rc * rc).powf(1.5);
    Ok(kappa * n.powf(2.0 / 3.0) * d.powf(4.0 / 3.0) / (pi * rc * rc).sqrt())
}

/// Energy gained in time `t` (erg).
pub fn csl_energy_gain(eta: f64, mass: f64, t: f64) -> Result<f64> {
    let eta = non_negative("eta", eta)?;
    Ok(eta * CGS.hbar * CGS.hbar * non_negative("t", t)? / (2.0 * positive("mass", mass)?))
}

/// Mean oscillator energy at temperature `t` (erg): the Planck occupation
/// term, plus `hbar omega / 2` if requested. Occupation underflows to 0.
pub fn mean_thermal_energy(omega: f64, t: f64, include_zero_point: bool) -> Result<f64> {
    let quantum = CGS.hbar * positive("omega", omega)?;
    let x = quantum / (CGS.k_b * positive("T", t)?);
    let occupation = if x > MAX_EXPONENT { 0.0 } else { quantum / x.exp_m1() };
    Ok(occupation + if include_zero_point { 0.5 * quantum } else { 0.0 })
}

/// Temperature at which the occupation energy equals `epsilon` times the gain
/// over time `t` (K).
pub fn required_temperature(spec: &OscillatorSpec, eta: f64, epsilon: f64, t: f64) -> Result<f64> {
    positive("epsilon", epsilon)?;
    positive("t", t)?;
    let eta = positive("eta", eta)?;
    let ratio = 2.0 * spec.mass() * spec.omega / (epsilon * eta * CGS.hbar * t);
    Ok(CGS.hbar * spec.omega / CGS.k_b / ratio.ln_1p())
}

/// Pressure (pT) at which an observation of length `t` is a fraction `chi`
/// of the plate collision time, at oscillator temperature `temperature`.
pub fn required_pressure(
    spec: &OscillatorSpec,
    eta: f64,
    epsilon: f64,
    chi: f64,
    temperature: f64,
    t: f64,
) -> Result<f64> {
    let (eta, epsilon, chi, temperature, t) = (
        positive("eta", eta)?,
        positive("epsilon", epsilon)?,
        positive("chi", chi)?,
        positive("T", temperature)?,
        positive("t", t)?,
    );
    let x = CGS.hbar * spec.omega / (CGS.k_b * temperature);
    if x > MAX_EXPONENT {
        return Err(Error::Overflow(x));
    }
    Ok(chi * epsilon * PLATE_COLLISION_COEFFICIENT * eta * CGS.hbar / (2.0 * spec.mass() * spec.omega * spec.area * t)
        * (temperature / CGS.t_room).sqrt()
        * x.exp_m1())
}

/// Shortest resolvable observation time `Q / omega` (s).
pub fn min_observation_time(q: f64, omega: f64) -> Result<f64> {
    Ok(positive("Q", q)? / positive("omega", omega)?)
}

/// Amplitude carrying energy `delta_e`: `sqrt(2 dE / (m omega^2))` (cm).
pub fn classical_displacement(delta_e: f64, mass: f64, omega: f64) -> Result<f64> {
    let de = non_negative("delta E", delta_e)?;
    Ok((2.0 * de / positive("mass", mass)?).sqrt() / positive("omega", omega)?)
}

/// Everything reported for one oscillator scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillatorReport {
    pub spec: OscillatorSpec,
    pub eta_law: &'static str,
    pub lambda: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub chi: f64,
    pub t_observation: f64,
    /// Energy gain over the observation (erg).
    pub delta_e: f64,
    /// hbar omega / 2 (erg).
    pub zero_point: f64,
    pub zero_point_over_gain: f64,
    pub t_required: f64,
    pub p_required_pt: f64,
    pub t_min: f64,
    pub observation_resolved: bool,
    pub x_classical: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorScenario {
    pub spec: OscillatorSpec,
    pub eta_law: EtaLaw,
    pub lambda: f64,
    pub epsilon: f64,
    pub chi: f64,
    pub t_observation: f64,
}

impl OscillatorScenario {
    /// Headline oscillator, GRW counting, eps = chi = 0.1 and 1 s.
    pub fn headline() -> Self {
        Self {
            spec: OscillatorSpec::headline(),
            eta_law: EtaLaw::Grw,
            lambda: LAMBDA_GRW,
            epsilon: 0.1,
            chi: 0.1,
            t_observation: 1.0,
        }
    }
}

pub fn analyze(s: &OscillatorScenario) -> Result<OscillatorReport> {
    let spec = s.spec;
    let eta = s.eta_law.eta(&spec, s.lambda)?;
    let delta_e = csl_energy_gain(eta, spec.mass(), s.t_observation)?;
    let zero_point = mean_thermal_energy(spec.omega, 1.0, true)? - mean_thermal_energy(spec.omega, 1.0, false)?;
    let t_required = required_temperature(&spec, eta, s.epsilon, s.t_observation)?;
    let p_required_pt = required_pressure(&spec, eta, s.epsilon, s.chi, t_required, s.t_observation)?;
    let t_min = min_observation_time(spec.q, spec.omega)?;
    Ok(OscillatorReport {
        spec,
        eta_law: s.eta_law.as_str(),
        lambda: s.lambda,
        eta,
        epsilon: s.epsilon,
        chi: s.chi,
        t_observation: s.t_observation,
        delta_e,
        zero_point,
        zero_point_over_gain: zero_point / delta_e,
        t_required,
        p_required_pt,
        t_min,
        observation_resolved: s.t_observation >= t_min,
        x_classical: classical_displacement(delta_e, spec.mass(), spec.omega)?,
    })
}
