//! Closed-form displacement laws and their time inversions.
//!
//! Every collapse, gravity and thermal law here grows as `k t^{3/2}` from
//! rest; the quantum Brownian baseline is linear in `t`. [`DiffusionLaw`]
//! captures both shapes so tables, sweeps and curves share one inversion.

use serde::Serialize;

use crate::error::{non_negative, positive, Error, Result};
use crate::models::{CollapseModel, KarolyhazyParams};
use crate::units::{sphere_mass, MassConvention, CGS};

/// Prefactor of the disc rotation law `0.018 f_rot^{1/2} t^{3/2} lambda^{1/2} / 1e-8` (rad).
pub const DISC_ROTATION_COEFFICIENT: f64 = 0.018;
const DISC_LAMBDA_SCALE: f64 = 1e-8;

/// Quantum Brownian drift rates calibrated from the tabulated QBD times.
pub const QBD_RATE_SPHERE: f64 = 1e-5 / 1700.0;
pub const QBD_RATE_DISC: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereSpec {
    /// Radius R (cm).
    pub radius: f64,
    /// Density D (g/cc).
    pub density: f64,
    pub mass_convention: MassConvention,
}

impl Default for SphereSpec {
    fn default() -> Self {
        Self { radius: 1e-5, density: 1.0, mass_convention: MassConvention::PaperFit }
    }
}

impl SphereSpec {
    pub fn new(radius: f64, density: f64, mass_convention: MassConvention) -> Result<Self> {
        Ok(Self { radius: positive("radius", radius)?, density: positive("density", density)?, mass_convention })
    }

    pub fn mass(&self) -> f64 {
        sphere_mass(self.radius, self.density, self.mass_convention).expect("validated sphere")
    }

    pub fn nucleon_count(&self) -> f64 {
        self.mass() / CGS.m_nucleon
    }
}

/// A thin disc of radius `radius` (L) and thickness `thickness` (b).
///
/// The thermal rotation estimate reuses the sphere emission law with radius
/// `emission_radius` and converts to an angle by dividing by `lever_arm`;
/// both default to 1e-5 cm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscSpec {
    pub radius: f64,
    pub thickness: f64,
    pub density: f64,
    pub emission_radius: f64,
    pub lever_arm: f64,
}

impl Default for DiscSpec {
    fn default() -> Self {
        Self::from_anchors(1.0, 0.25, crate::models::DEFAULT_RC, 1.0).expect("anchor disc")
    }
}

impl DiscSpec {
    pub fn new(radius: f64, thickness: f64, density: f64) -> Result<Self> {
        let radius = positive("disc radius L", radius)?;
        let thickness = positive("disc thickness b", thickness)?;
        if thickness >= radius {
            return Err(Error::Domain { name: "disc thickness b", value: thickness, requirement: "must be < L" });
        }
        Ok(Self { radius, thickness, density: positive("density", density)?, emission_radius: 1e-5, lever_arm: 1e-5 })
    }

    /// Disc with `gamma = L / 2a` and `beta = b / 2a`.
    pub fn from_anchors(gamma: f64, beta: f64, a: f64, density: f64) -> Result<Self> {
        Self::new(2.0 * a * gamma, 2.0 * a * beta, density)
    }

    pub fn gamma(&self, a: f64) -> f64 {
        self.radius / (2.0 * a)
    }

    pub fn beta(&self, a: f64) -> f64 {
        self.thickness / (2.0 * a)
    }

    pub fn mass(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius * self.thickness * self.density
    }

    /// Moment of inertia about a diameter (g cm^2).
    pub fn moment_of_inertia(&self) -> f64 {
        self.mass() * (self.radius * self.radius / 4.0 + self.thickness * self.thickness / 12.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectKind {
    Sphere,
    Disc,
}

impl std::str::FromStr for ObjectKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sphere" => Ok(Self::Sphere),
            "disc" | "disk" => Ok(Self::Disc),
            other => Err(Error::Config(format!("unknown object kind '{other}'"))),
        }
    }
}

/// Which physical mechanism a curve or law describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawTag {
    Csl,
    GravityK,
    GravityDp,
    Thermal,
    Qbd,
}

impl LawTag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Csl => "csl",
            Self::GravityK => "gravity_k",
            Self::GravityDp => "gravity_dp",
            Self::Thermal => "thermal",
            Self::Qbd => "qbd",
        }
    }
}

impl std::str::FromStr for LawTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "csl" => Ok(Self::Csl),
            "gravity_k" | "karolyhazy" => Ok(Self::GravityK),
            "gravity_dp" | "dp" => Ok(Self::GravityDp),
            "thermal" => Ok(Self::Thermal),
            "qbd" => Ok(Self::Qbd),
            other => Err(Error::Config(format!("unknown law '{other}'"))),
        }
    }
}

/// `lambda^{1/2} hbar sqrt(f/6) / (m a)`: the coefficient of t^{3/2} in the CSL
/// sphere displacement (cm s^-3/2), with `a` the model's r_c.
pub fn csl_sphere_prefactor(model: &CollapseModel, f: f64) -> f64 {
    model.lambda.sqrt() * CGS.hbar * (f / 6.0).sqrt() / (CGS.m_nucleon * model.r_c)
}

pub fn csl_sphere_displacement(model: &CollapseModel, f: f64, t: f64) -> Result<f64> {
    positive("f", f)?;
    Ok(csl_sphere_prefactor(model, f) * non_negative("t", t)?.powf(1.5))
}

pub fn csl_disc_prefactor(model: &CollapseModel, f_rot: f64) -> f64 {
    DISC_ROTATION_COEFFICIENT * f_rot.sqrt() * model.lambda.sqrt() / DISC_LAMBDA_SCALE
}

pub fn csl_disc_rotation(model: &CollapseModel, f_rot: f64, t: f64) -> Result<f64> {
    positive("f_rot", f_rot)?;
    Ok(csl_disc_prefactor(model, f_rot) * non_negative("t", t)?.powf(1.5))
}

/// Karolyhazy displacement `a_c / 10 (t / tau_g)^{3/2}` (cm).
pub fn gravity_displacement_karolyhazy(p: &KarolyhazyParams, t: f64) -> Result<f64> {
    Ok(0.1 * p.a_c * (non_negative("t", t)? / p.tau_g).powf(1.5))
}

/// Calibrated quantum Brownian drift rates (cm/s for spheres, rad/s for discs).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QbdRates {
    pub sphere: f64,
    pub disc: f64,
}

impl Default for QbdRates {
    fn default() -> Self {
        Self { sphere: QBD_RATE_SPHERE, disc: QBD_RATE_DISC }
    }
}

impl QbdRates {
    pub fn rate(&self, kind: ObjectKind) -> f64 {
        match kind {
            ObjectKind::Sphere => self.sphere,
            ObjectKind::Disc => self.disc,
        }
    }
}

pub fn qbd_displacement(kind: ObjectKind, rates: &QbdRates, t: f64) -> Result<f64> {
    Ok(rates.rate(kind) * non_negative("t", t)?)
}

/// A displacement law from rest, either `k t^{3/2}` or `v t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum DiffusionLaw {
    ThreeHalves { prefactor: f64 },
    Linear { rate: f64 },
}

impl DiffusionLaw {
    pub fn csl_sphere(model: &CollapseModel, f: f64) -> Self {
        Self::ThreeHalves { prefactor: csl_sphere_prefactor(model, f) }
    }

    pub fn csl_disc(model: &CollapseModel, f_rot: f64) -> Self {
        Self::ThreeHalves { prefactor: csl_disc_prefactor(model, f_rot) }
    }

    pub fn karolyhazy(p: &KarolyhazyParams) -> Self {
        Self::ThreeHalves { prefactor: 0.1 * p.a_c * p.tau_g.powf(-1.5) }
    }

    pub fn qbd(kind: ObjectKind, rates: &QbdRates) -> Self {
        Self::Linear { rate: rates.rate(kind) }
    }

    pub fn displacement(&self, t: f64) -> Result<f64> {
        let t = non_negative("t", t)?;
        Ok(match *self {
            Self::ThreeHalves { prefactor } => prefactor * t.powf(1.5),
            Self::Linear { rate } => rate * t,
        })
    }

    /// Time at which the law reaches `target`, in closed form.
    pub fn time_to_reach(&self, target: f64) -> Result<f64> {
        let target = positive("target displacement", target)?;
        match *self {
            Self::ThreeHalves { prefactor } if prefactor > 0.0 => Ok((target / prefactor).powf(2.0 / 3.0)),
            Self::Linear { rate } if rate > 0.0 => Ok(target / rate),
            Self::ThreeHalves { .. } => Err(Error::NoDiffusion("t^3/2")),
            Self::Linear { .. } => Err(Error::NoDiffusion("linear")),
        }
    }
}

/// Free-function form of [`DiffusionLaw::time_to_reach`].
pub fn invert_time(law: &DiffusionLaw, target: f64) -> Result<f64> {
    law.time_to_reach(target)
}

/// Sampled displacement-vs-time curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisplacementCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub law: LawTag,
    pub model: String,
}

impl DisplacementCurve {
    /// Evaluates `law` on `times`, which must be strictly increasing and >= 0.
    pub fn sample(law: &DiffusionLaw, tag: LawTag, model: impl Into<String>, times: &[f64]) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidRange("empty time grid".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidRange("times must be strictly increasing".into()));
        }
        let values = times.iter().map(|&t| law.displacement(t)).collect::<Result<Vec<_>>>()?;
        Ok(Self { times: times.to_vec(), values, law: tag, model: model.into() })
    }
}

/// `n` log-spaced points from `start` to `stop` inclusive.
pub fn logspace(start: f64, stop: f64, n: usize) -> Result<Vec<f64>> {
    positive("range start", start)?;
    positive("range stop", stop)?;
    if n == 0 || stop < start || (n > 1 && stop == start) {
        return Err(Error::InvalidRange(format!("logspace({start:e}, {stop:e}, {n})")));
    }
    if n == 1 {
        return Ok(vec![start]);
    }
    let (a, b) = (start.ln(), stop.ln());
    Ok((0..n).map(|i| if i == n - 1 { stop } else { (a + (b - a) * i as f64 / (n - 1) as f64).exp() }).collect())
}
