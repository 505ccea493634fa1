//! Command-line front end.
//!
//! Every output starts with a run record (tool version, command line, resolved
//! parameters, constants, warnings): a `run` object in JSON, `#` lines in
//! CSV. Nothing time- or host-dependent is recorded, so identical inputs give
//! identical bytes.
//!
//! Defaults can be preset in a config file of `key = value` lines, named by
//! `--config` or `CSLWALK_CONFIG`. Keys are the long flag names; flags win.

use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::diffusion::{logspace, DiffusionLaw, DiscSpec, ObjectKind, QbdRates, SphereSpec};
use crate::feasibility::{
    self, derive_coefficients, gravity_feasibility, GravityModel, LambdaSource, ObjectSpec, Scenario, SweepParam,
    PRINTED,
};
use crate::models::{CollapseModel, FormFactors, KarolyhazyParams, ModelKind};
use crate::oscillator::{analyze, EtaLaw, OscillatorScenario, OscillatorSpec};
use crate::stochastic::{moments, simulate, SimConfig};
use crate::table::{fmt_sci, generate_table, TableId};
use crate::thermal::{emission_displacement_coefficient, EMISSION_FIT_COEFFICIENT};
use crate::units::{MassConvention, CGS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REGIME: i32 = 3;
pub const CONFIG_ENV: &str = "CSLWALK_CONFIG";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Model(_) => EXIT_USAGE,
            Self::Io { .. } => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cslwalk", version, about = "Collapse-model random walks: displacement laws and feasibility solvers")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit with status 3 when a solved scenario violates a regime condition.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Config file of `key = value` defaults (overrides CSLWALK_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Physical constants, model presets and solver coefficients.
    Constants,
    /// Required T_i and P for the sphere.
    Sphere(SphereArgs),
    /// Required T_i and P for the disc.
    Disc(DiscArgs),
    /// Feasibility under a gravity-induced diffusion model.
    Gravity(GravityArgs),
    /// Secular heating of a quantum oscillator.
    Oscillator(OscillatorArgs),
    /// Generic feasibility solve for a sphere, disc or gravity scenario.
    Feasibility(FeasibilityArgs),
    /// Reproduce a reference table with computed and printed values.
    Table(TableArgs),
    /// Sweep one parameter of a scenario.
    Sweep(SweepArgs),
    /// Displacement-vs-time curves for every model.
    Curve(CurveArgs),
    /// Monte-Carlo ensemble of collapse-driven random walks.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Sphere,
    Disc,
    Gravity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GravityKind {
    Karolyhazy,
    Dp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectArg {
    Sphere,
    Disc,
}

impl From<ObjectArg> for ObjectKind {
    fn from(o: ObjectArg) -> Self {
        match o {
            ObjectArg::Sphere => ObjectKind::Sphere,
            ObjectArg::Disc => ObjectKind::Disc,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// grw, csl, csl-low, adler, karolyhazy, dp or custom.
    #[arg(long)]
    pub model: Option<String>,
    /// Collapse rate (1/s); overrides the model preset.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Localization length r_c (cm).
    #[arg(long)]
    pub rc: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Thermal over collapse displacement.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Observation time over collision time.
    #[arg(long)]
    pub chi: Option<f64>,
    /// Displacement to resolve (cm, or rad for the disc).
    #[arg(long)]
    pub target: Option<f64>,
    /// Ambient temperature (K).
    #[arg(long = "Te", alias = "te")]
    pub te: Option<f64>,
    /// Density (g/cc).
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub f_trans: Option<f64>,
    #[arg(long)]
    pub f_rot: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SphereGeometry {
    /// Sphere radius (cm).
    #[arg(long)]
    pub radius: Option<f64>,
    /// paper-fit (M = D R^3) or geometric (M = 4 pi D R^3 / 3).
    #[arg(long)]
    pub mass_convention: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DiscGeometry {
    /// Disc radius over 2 r_c.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Disc thickness over 2 r_c.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Radius entering the emission law (cm).
    #[arg(long)]
    pub emission_radius: Option<f64>,
    /// Length converting displacement to angle (cm).
    #[arg(long)]
    pub lever_arm: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GravityOptions {
    #[arg(long, value_enum)]
    pub gravity_model: Option<GravityKind>,
    /// Object under test for gravity scenarios.
    #[arg(long, value_enum)]
    pub object: Option<ObjectArg>,
    /// Karolyhazy cell length (cm).
    #[arg(long)]
    pub a_c: Option<f64>,
    /// Karolyhazy time (s).
    #[arg(long)]
    pub tau_g: Option<f64>,
    /// Diosi-Penrose length (cm).
    #[arg(long)]
    pub a: Option<f64>,
    /// Use the live-derived effective rate instead of the rounded one.
    #[arg(long)]
    pub live_lambda: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SphereArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub geometry: SphereGeometry,
}

#[derive(Debug, Clone, Args)]
pub struct DiscArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub geometry: DiscGeometry,
}

#[derive(Debug, Clone, Args)]
pub struct GravityArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub sphere: SphereGeometry,
    #[command(flatten)]
    pub disc: DiscGeometry,
    #[command(flatten)]
    pub gravity: GravityOptions,
}

#[derive(Debug, Clone, Args)]
pub struct FeasibilityArgs {
    #[arg(value_enum, id = "object_target", value_name = "TARGET")]
    pub target: Target,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub sphere: SphereGeometry,
    #[command(flatten)]
    pub disc: DiscGeometry,
    #[command(flatten)]
    pub gravity: GravityOptions,
}

#[derive(Debug, Clone, Args)]
pub struct OscillatorArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Oscillator mass (amu); sets the nucleon count.
    #[arg(long)]
    pub mass_amu: Option<f64>,
    /// Angular frequency (rad/s).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Plate area (cm^2).
    #[arg(long)]
    pub area: Option<f64>,
    /// Quality factor.
    #[arg(long = "Q", alias = "q")]
    pub q: Option<f64>,
    /// Thermal over collapse energy gain.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Observation time over plate collision time.
    #[arg(long)]
    pub chi: Option<f64>,
    /// Observation time (s).
    #[arg(long)]
    pub t: Option<f64>,
    /// grw, csl, csl-as-printed or custom:<value>.
    #[arg(long)]
    pub eta_law: Option<String>,
    /// Nucleon number density (cm^-3).
    #[arg(long)]
    pub nucleon_density: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// I, II, III or IV.
    #[arg(long)]
    pub id: String,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// epsilon, chi or time.
    #[arg(long)]
    pub param: String,
    #[arg(long, value_enum)]
    pub object: Option<ObjectArg>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    /// Number of log-spaced points.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub sphere: SphereGeometry,
    #[command(flatten)]
    pub disc: DiscGeometry,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub object: Option<ObjectArg>,
    /// First time (s).
    #[arg(long)]
    pub from: Option<f64>,
    /// Last time (s).
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Object whose walk is simulated (default sphere).
    #[arg(long, value_enum)]
    pub kind: Option<ObjectArg>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Final time (s).
    #[arg(long)]
    pub t: Option<f64>,
    /// Number of trajectories (default 10000).
    #[arg(long)]
    pub ntraj: Option<usize>,
    /// Base RNG seed (default 0); trajectory i uses stream i.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Step (s); defaults to t/1000.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Also write per-trajectory final displacements to this CSV file.
    #[arg(long)]
    pub trajectories: Option<PathBuf>,
}

/// Provenance header of every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub constants: crate::units::PhysicalConstants,
    pub warnings: Vec<String>,
}

impl RunRecord {
    fn csv_header(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# tool: {} {}", self.tool, self.version);
        let _ = writeln!(out, "# command: {}", self.command);
        for (k, v) in &self.config {
            let _ = writeln!(out, "# config: {k} = {v}");
        }
        let c = &self.constants;
        let _ = writeln!(
            out,
            "# constants: hbar={:e} k_b={:e} c_light={:e} m_nucleon={:e} g_newton={:e} t_room={:e} amu_in_g={:e}",
            c.hbar, c.k_b, c.c_light, c.m_nucleon, c.g_newton, c.t_room, c.amu_in_g
        );
        for w in &self.warnings {
            let _ = writeln!(out, "# warning: {w}");
        }
        out
    }
}

/// Text form of a resolved value in the run record.
trait Recorded {
    fn recorded(&self) -> String;
}

impl Recorded for f64 {
    fn recorded(&self) -> String {
        format!("{self:e}")
    }
}

macro_rules! recorded_via_display {
    ($($t:ty),*) => {$(
        impl Recorded for $t {
            fn recorded(&self) -> String {
                self.to_string()
            }
        }
    )*};
}
recorded_via_display!(usize, u64, bool, String);

/// Resolves parameters as flag, then config file, then default, and records
/// each resolved value for the run record.
struct Resolver {
    file: BTreeMap<String, String>,
    used: BTreeMap<String, String>,
}

impl Resolver {
    fn new(file: BTreeMap<String, String>) -> Self {
        Self { file, used: BTreeMap::new() }
    }

    fn lookup<T>(&mut self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr + Recorded,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(raw) => {
                    Some(raw.parse::<T>().map_err(|e| CliError::Usage(format!("config key '{key}' = '{raw}': {e}")))?)
                }
                None => None,
            },
        };
        if let Some(v) = &value {
            self.used.insert(key.to_string(), v.recorded());
        }
        Ok(value)
    }

    fn get<T>(&mut self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr + Recorded,
        T::Err: Display,
    {
        let v = self.lookup(flag, key)?.unwrap_or(default);
        self.used.insert(key.to_string(), v.recorded());
        Ok(v)
    }

    fn unused_keys(&self) -> Vec<String> {
        self.file.keys().filter(|k| !self.used.contains_key(*k)).cloned().collect()
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected 'key = value'", i + 1)))?;
        let key = k.trim().replace('-', "_").to_ascii_lowercase();
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse_str<T: FromStr<Err = crate::Error>>(raw: &str) -> Result<T, CliError> {
    raw.parse::<T>().map_err(CliError::from)
}

fn resolve_model(r: &mut Resolver, m: &ModelArgs, default: ModelKind) -> Result<CollapseModel, CliError> {
    let name = r.get(m.model.clone(), "model", default.as_str().to_string())?;
    let mut model = match name.to_ascii_lowercase().as_str() {
        "csl-low" | "csl_low" => CollapseModel::csl_low(),
        other => CollapseModel::preset(parse_str::<ModelKind>(other)?),
    };
    if let Some(l) = r.lookup(m.lambda, "lambda")? {
        model = model.with_lambda(l)?;
    }
    if model.kind == ModelKind::Custom && m.lambda.is_none() && !r.used.contains_key("lambda") {
        return Err(CliError::Usage("model 'custom' needs --lambda".into()));
    }
    let rc = r.get(m.rc, "rc", model.r_c)?;
    Ok(model.with_rc(rc)?)
}

struct ResolvedScenario {
    scenario: Scenario,
}

fn resolve_scenario(
    r: &mut Resolver,
    s: &ScenarioArgs,
    object: ObjectKind,
    sphere: &SphereGeometry,
    disc: &DiscGeometry,
    default_model: ModelKind,
    default_te: f64,
) -> Result<ResolvedScenario, CliError> {
    let model = resolve_model(r, &s.model, default_model)?;
    let density = r.get(s.density, "density", 1.0)?;
    let ff = FormFactors::new(
        r.get(s.f_trans, "f_trans", crate::models::F_TRANS_ANCHOR)?,
        r.get(s.f_rot, "f_rot", crate::models::F_ROT_ANCHOR)?,
    )?;
    let (object_spec, default_target) = match object {
        ObjectKind::Sphere => {
            let radius = r.get(sphere.radius, "radius", 1e-5)?;
            let conv_name = r.get(sphere.mass_convention.clone(), "mass_convention", "paper-fit".to_string())?;
            let conv: MassConvention = parse_str(&conv_name)?;
            (ObjectSpec::Sphere(SphereSpec::new(radius, density, conv)?), 1e-5)
        }
        ObjectKind::Disc => {
            let gamma = r.get(disc.gamma, "gamma", 1.0)?;
            let beta = r.get(disc.beta, "beta", 0.25)?;
            let mut d = DiscSpec::from_anchors(gamma, beta, model.r_c, density)?;
            d.emission_radius = crate::error::positive(
                "emission radius",
                r.get(disc.emission_radius, "emission_radius", d.emission_radius)?,
            )?;
            d.lever_arm = crate::error::positive("lever arm", r.get(disc.lever_arm, "lever_arm", d.lever_arm)?)?;
            (ObjectSpec::Disc(d), 1e-3)
        }
    };
    let scenario = Scenario {
        object: object_spec,
        model,
        form_factors: ff,
        epsilon: r.get(s.epsilon, "epsilon", 0.1)?,
        chi: r.get(s.chi, "chi", 0.1)?,
        target_displacement: r.get(s.target, "target", default_target)?,
        t_e: r.get(s.te, "te", default_te)?,
        qbd_rates: QbdRates::default(),
    };
    scenario.validate()?;
    Ok(ResolvedScenario { scenario })
}

enum Body {
    Json(Value),
    Csv(String),
}

struct Outcome {
    body: Body,
    warnings: Vec<String>,
    regime_violations: Vec<String>,
}

impl Outcome {
    fn json(v: Value) -> Self {
        Self { body: Body::Json(v), warnings: Vec::new(), regime_violations: Vec::new() }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable output")
}

fn feasibility_outcome(result: &feasibility::FeasibilityResult, extra: Value) -> Outcome {
    let violations: Vec<String> = result.regime_flags.violations().iter().map(|s| s.to_string()).collect();
    let mut v = to_value(result);
    if let (Value::Object(map), Value::Object(extra)) = (&mut v, extra) {
        map.extend(extra);
    }
    Outcome {
        body: Body::Json(v),
        warnings: violations.iter().map(|s| format!("regime violation: {s}")).collect(),
        regime_violations: violations,
    }
}

fn solve_object(
    r: &mut Resolver,
    object: ObjectKind,
    s: &ScenarioArgs,
    sg: &SphereGeometry,
    dg: &DiscGeometry,
) -> Result<Outcome, CliError> {
    let rs = resolve_scenario(r, s, object, sg, dg, ModelKind::Grw, 100.0)?;
    let result = feasibility::solve(&rs.scenario)?;
    Ok(feasibility_outcome(&result, json!({})))
}

fn solve_gravity(
    r: &mut Resolver,
    s: &ScenarioArgs,
    sg: &SphereGeometry,
    dg: &DiscGeometry,
    g: &GravityOptions,
) -> Result<Outcome, CliError> {
    let kind = match r.get(g.gravity_model.map(gravity_name), "gravity_model", "karolyhazy".to_string())?.as_str() {
        "karolyhazy" => GravityKind::Karolyhazy,
        "dp" => GravityKind::Dp,
        other => return Err(CliError::Usage(format!("unknown gravity model '{other}' (karolyhazy|dp)"))),
    };
    let object = match r.get(g.object.map(object_name), "object", "sphere".to_string())?.as_str() {
        "sphere" => ObjectKind::Sphere,
        "disc" => ObjectKind::Disc,
        other => return Err(CliError::Usage(format!("unknown object '{other}' (sphere|disc)"))),
    };
    let default_model = match kind {
        GravityKind::Karolyhazy => ModelKind::Karolyhazy,
        GravityKind::Dp => ModelKind::DiosiPenrose,
    };
    let rs = resolve_scenario(r, s, object, sg, dg, default_model, 1.0)?;
    let model = match kind {
        GravityKind::Karolyhazy => {
            let reference = KarolyhazyParams::reference();
            GravityModel::Karolyhazy(KarolyhazyParams::new(
                r.get(g.a_c, "a_c", reference.a_c)?,
                r.get(g.tau_g, "tau_g", reference.tau_g)?,
            )?)
        }
        GravityKind::Dp => GravityModel::DiosiPenrose { a: r.get(g.a, "a", crate::models::DEFAULT_RC)? },
    };
    let live = r.get(if g.live_lambda { Some(true) } else { None }, "live_lambda", false)?;
    let source = if live { LambdaSource::Live } else { LambdaSource::Rounded };
    let out = gravity_feasibility(&rs.scenario, &model, source)?;
    Ok(feasibility_outcome(
        &out.result,
        json!({
            "gravity_model": to_value(&model),
            "route": to_value(&out.route),
            "lambda_effective_live": out.lambda_effective_live,
            "lambda_effective_used": out.lambda_effective_used,
            "printed_form_cross_check": to_value(&out.printed_form),
        }),
    ))
}

fn gravity_name(k: GravityKind) -> String {
    match k {
        GravityKind::Karolyhazy => "karolyhazy".into(),
        GravityKind::Dp => "dp".into(),
    }
}

fn object_name(o: ObjectArg) -> String {
    match o {
        ObjectArg::Sphere => "sphere".into(),
        ObjectArg::Disc => "disc".into(),
    }
}

fn resolve_object(r: &mut Resolver, o: Option<ObjectArg>) -> Result<ObjectKind, CliError> {
    parse_str(&r.get(o.map(object_name), "object", "sphere".to_string())?)
}

fn constants() -> Outcome {
    let presets: Vec<Value> =
        [ModelKind::Grw, ModelKind::Csl, ModelKind::Adler, ModelKind::Karolyhazy, ModelKind::DiosiPenrose]
            .iter()
            .map(|&k| to_value(&CollapseModel::preset(k)))
            .collect();
    let ff = FormFactors::default();
    Outcome::json(json!({
        "constants": to_value(&CGS),
        "models": presets,
        "csl_low": to_value(&CollapseModel::csl_low()),
        "form_factors": to_value(&ff),
        "emission_fit_coefficient": EMISSION_FIT_COEFFICIENT,
        "emission_first_principles_coefficient": emission_displacement_coefficient(),
        "coefficients_fit": to_value(&derive_coefficients(EMISSION_FIT_COEFFICIENT, &ff)),
        "coefficients_first_principles": to_value(&derive_coefficients(emission_displacement_coefficient(), &ff)),
        "coefficients_printed": to_value(&PRINTED),
    }))
}

fn oscillator(r: &mut Resolver, a: &OscillatorArgs) -> Result<Outcome, CliError> {
    let model = resolve_model(r, &a.model, ModelKind::Grw)?;
    let spec = OscillatorSpec::from_mass_amu(r.get(a.mass_amu, "mass_amu", 1e12)?, r.get(a.omega, "omega", 1e10)?)?;
    let spec = OscillatorSpec {
        area: crate::error::positive("area", r.get(a.area, "area", spec.area)?)?,
        q: crate::error::positive("Q", r.get(a.q, "q", spec.q)?)?,
        ..spec
    }
    .with_geometry(model.r_c, r.get(a.nucleon_density, "nucleon_density", spec.nucleon_density)?)?;
    let eta_law: EtaLaw = parse_str(&r.get(a.eta_law.clone(), "eta_law", "grw".to_string())?)?;
    let scenario = OscillatorScenario {
        spec,
        eta_law,
        lambda: model.lambda,
        epsilon: r.get(a.epsilon, "epsilon", 0.1)?,
        chi: r.get(a.chi, "chi", 0.1)?,
        t_observation: r.get(a.t, "t", 1.0)?,
    };
    let report = analyze(&scenario)?;
    let mut out = Outcome::json(to_value(&report));
    if eta_law == EtaLaw::CslAsPrinted {
        out.warnings.push("eta law csl-as-printed is a comparison-only evaluation".into());
    }
    if !report.observation_resolved {
        out.regime_violations.push("observation_shorter_than_q_over_omega".into());
        out.warnings.push("regime violation: observation_shorter_than_q_over_omega".into());
    }
    Ok(out)
}

fn table(r: &mut Resolver, a: &TableArgs, format: Format) -> Result<Outcome, CliError> {
    let id: TableId = parse_str(&r.get(Some(a.id.clone()), "id", String::new())?)?;
    let t = generate_table(id)?;
    let mut warnings: Vec<String> = t
        .cells()
        .filter(|(_, _, c)| c.note.is_some())
        .map(|(row, col, c)| {
            format!("known anomaly at {}={} {col}: {}", t.row_key, fmt_sci(row.key), c.note.unwrap_or(""))
        })
        .collect();
    warnings.extend(
        t.unexplained_mismatches()
            .into_iter()
            .map(|(k, col)| format!("outside tolerance at {}={} {col}", t.row_key, fmt_sci(k))),
    );
    let body = match format {
        Format::Csv => Body::Csv(t.to_csv()),
        Format::Json => Body::Json(to_value(&t)),
    };
    Ok(Outcome { body, warnings, regime_violations: Vec::new() })
}

fn points_csv(header: [&str; 2], points: &[(f64, f64)]) -> String {
    let mut out = format!("{},{}\n", header[0], header[1]);
    for (x, y) in points {
        let _ = writeln!(out, "{},{}", fmt_sci(*x), fmt_sci(*y));
    }
    out
}

fn sweep(r: &mut Resolver, a: &SweepArgs, format: Format) -> Result<Outcome, CliError> {
    let param: SweepParam = parse_str(&r.get(Some(a.param.clone()), "param", String::new())?)?;
    let object = resolve_object(r, a.object)?;
    let rs = resolve_scenario(r, &a.scenario, object, &a.sphere, &a.disc, ModelKind::Grw, 100.0)?;
    let (lo, hi) = match param {
        SweepParam::Epsilon | SweepParam::Chi => (0.01, 1.0),
        SweepParam::Time => (1e-3, 1e3),
    };
    let values = logspace(r.get(a.from, "from", lo)?, r.get(a.to, "to", hi)?, r.get(a.n, "n", 21)?)?;
    let curve = feasibility::sweep(param, &values, &rs.scenario)?;
    let x_name = match param {
        SweepParam::Epsilon => "epsilon",
        SweepParam::Chi => "chi",
        SweepParam::Time => "t_s",
    };
    let body = match format {
        Format::Csv => Body::Csv(points_csv([x_name, param.output()], &curve.points)),
        Format::Json => Body::Json(to_value(&curve)),
    };
    Ok(Outcome { body, warnings: Vec::new(), regime_violations: Vec::new() })
}

fn curve(r: &mut Resolver, a: &CurveArgs, format: Format) -> Result<Outcome, CliError> {
    let object = resolve_object(r, a.object)?;
    let times = logspace(r.get(a.from, "from", 1e-4)?, r.get(a.to, "to", 1e6)?, r.get(a.n, "n", 61)?)?;
    let ff = FormFactors::default();
    let law = |m: CollapseModel| match object {
        ObjectKind::Sphere => DiffusionLaw::csl_sphere(&m, ff.f_trans),
        ObjectKind::Disc => DiffusionLaw::csl_disc(&m, ff.f_rot),
    };
    let unit = match object {
        ObjectKind::Sphere => "cm",
        ObjectKind::Disc => "rad",
    };
    let laws = [
        ("grw", law(CollapseModel::grw())),
        ("adler", law(CollapseModel::adler())),
        ("karolyhazy", law(CollapseModel::karolyhazy())),
        ("dp", law(CollapseModel::diosi_penrose())),
        ("qbd", DiffusionLaw::qbd(object, &QbdRates::default())),
    ];
    let mut rows = Vec::with_capacity(times.len());
    for &t in &times {
        let vals = laws.iter().map(|(_, l)| l.displacement(t)).collect::<crate::Result<Vec<_>>>()?;
        rows.push((t, vals));
    }
    let body = match format {
        Format::Csv => {
            let mut out = String::from("t_s");
            for (name, _) in &laws {
                let _ = write!(out, ",{name}_{unit}");
            }
            out.push('\n');
            for (t, vals) in &rows {
                out.push_str(&fmt_sci(*t));
                for v in vals {
                    let _ = write!(out, ",{}", fmt_sci(*v));
                }
                out.push('\n');
            }
            Body::Csv(out)
        }
        Format::Json => Body::Json(json!({
            "object": to_value(&object),
            "unit": unit,
            "times_s": times,
            "curves": laws.iter().enumerate().map(|(j, (name, _))| {
                json!({ "law": name, "values": rows.iter().map(|(_, v)| v[j]).collect::<Vec<_>>() })
            }).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome { body, warnings: Vec::new(), regime_violations: Vec::new() })
}

fn simulate_cmd(r: &mut Resolver, a: &SimulateArgs, header: &dyn Fn(&[String]) -> String) -> Result<Outcome, CliError> {
    let kind: ObjectKind = parse_str(&r.get(a.kind.map(object_name), "kind", "sphere".to_string())?)?;
    let model = resolve_model(r, &a.model, ModelKind::Grw)?;
    let default_t = match kind {
        ObjectKind::Sphere => 13.0,
        ObjectKind::Disc => 0.2,
    };
    let t = r.get(a.t, "t", default_t)?;
    let n_traj = r.get(a.ntraj, "ntraj", 10_000)?;
    let seed = r.get(a.seed, "seed", 0)?;
    let ff = FormFactors::default();
    let base = match kind {
        ObjectKind::Sphere => SimConfig::csl_sphere(&model, &SphereSpec::default(), ff.f_trans, t, n_traj, seed),
        ObjectKind::Disc => SimConfig::csl_disc(&model, &DiscSpec::default(), ff.f_rot, t, n_traj, seed),
    };
    let cfg = base.with_dt(r.get(a.dt, "dt", base.dt)?);
    let ens = simulate(&cfg)?;
    let fin = ens.final_rms();
    let analytic = cfg.analytic_rms(fin.t);
    let fit = ens.fit_powerlaw().ok();
    let result = json!({
        "config": to_value(&cfg),
        "checkpoints": ens.times.len(),
        "final": to_value(&fin),
        "analytic_rms": analytic,
        "deviation_in_standard_errors": if fin.standard_error > 0.0 { (fin.rms - analytic) / fin.standard_error } else { 0.0 },
        "powerlaw_fit": to_value(&fit),
        "final_moments": to_value(&moments(&ens.final_samples())),
        "rms_curve": to_value(&ens.rms_curve()),
    });
    if let Some(path) = &a.trajectories {
        let mut csv = header(&ens.warnings);
        csv.push_str("trajectory,final_displacement\n");
        for (i, x) in ens.final_samples().iter().enumerate() {
            let _ = writeln!(csv, "{i},{}", fmt_sci(*x));
        }
        write_file(path, &csv)?;
    }
    Ok(Outcome { body: Body::Json(result), warnings: ens.warnings.clone(), regime_violations: Vec::new() })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Parses `args` (including the program name) and runs the command, writing
/// the primary output to `stdout` unless `--out` is given. Returns the exit
/// code; diagnostics go to `stderr`.
pub fn run(args: &[String], env_config: Option<PathBuf>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, args, env_config, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, args: &[String], env_config: Option<PathBuf>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let config_path = cli.config.clone().or(env_config);
    let file = match &config_path {
        Some(p) => parse_config(
            &std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?,
        )?,
        None => BTreeMap::new(),
    };
    let mut r = Resolver::new(file);
    let command_line =
        std::iter::once("cslwalk".to_string()).chain(args.iter().skip(1).cloned()).collect::<Vec<_>>().join(" ");
    let record = |used: BTreeMap<String, String>, warnings: Vec<String>| RunRecord {
        tool: "cslwalk",
        version: crate::VERSION,
        command: command_line.clone(),
        config: used,
        constants: CGS,
        warnings,
    };
    let default_format = |f: Format| cli.format.unwrap_or(f);

    let outcome = match &cli.command {
        Command::Constants => constants(),
        Command::Sphere(a) => {
            solve_object(&mut r, ObjectKind::Sphere, &a.scenario, &a.geometry, &DiscGeometry::default())?
        }
        Command::Disc(a) => {
            solve_object(&mut r, ObjectKind::Disc, &a.scenario, &SphereGeometry::default(), &a.geometry)?
        }
        Command::Gravity(a) => solve_gravity(&mut r, &a.scenario, &a.sphere, &a.disc, &a.gravity)?,
        Command::Feasibility(a) => match a.target {
            Target::Sphere => solve_object(&mut r, ObjectKind::Sphere, &a.scenario, &a.sphere, &a.disc)?,
            Target::Disc => solve_object(&mut r, ObjectKind::Disc, &a.scenario, &a.sphere, &a.disc)?,
            Target::Gravity => solve_gravity(&mut r, &a.scenario, &a.sphere, &a.disc, &a.gravity)?,
        },
        Command::Oscillator(a) => oscillator(&mut r, a)?,
        Command::Table(a) => table(&mut r, a, default_format(Format::Csv))?,
        Command::Sweep(a) => sweep(&mut r, a, default_format(Format::Csv))?,
        Command::Curve(a) => curve(&mut r, a, default_format(Format::Csv))?,
        Command::Simulate(a) => {
            let snapshot = r.used.clone();
            let header = |w: &[String]| record(snapshot.clone(), w.to_vec()).csv_header();
            simulate_cmd(&mut r, a, &header)?
        }
    };

    let mut warnings = outcome.warnings;
    warnings.extend(r.unused_keys().into_iter().map(|k| format!("unused config key '{k}'")));
    let run = record(r.used.clone(), warnings);
    let text = match outcome.body {
        Body::Json(result) if cli.format != Some(Format::Csv) => {
            let mut s = serde_json::to_string_pretty(&json!({ "run": to_value(&run), "result": result }))
                .expect("serializable output");
            s.push('\n');
            s
        }
        Body::Json(result) => run.csv_header() + &flatten_csv(&result),
        Body::Csv(body) => run.csv_header() + &body,
    };
    match &cli.out {
        Some(path) => write_file(path, &text)?,
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?,
    }
    if cli.strict && !outcome.regime_violations.is_empty() {
        return Ok(EXIT_REGIME);
    }
    Ok(EXIT_OK)
}

/// Renders a JSON result as `key,value` rows with dotted paths; arrays use indices.
fn flatten_csv(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(&key(k), v, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| walk(&key(&i.to_string()), v, out)),
            Value::Number(n) => {
                let text = n.as_f64().map(fmt_sci).unwrap_or_else(|| n.to_string());
                let _ = writeln!(out, "{prefix},{text}");
            }
            Value::String(s) => {
                let _ = writeln!(out, "{prefix},{s}");
            }
            Value::Bool(b) => {
                let _ = writeln!(out, "{prefix},{b}");
            }
            Value::Null => {
                let _ = writeln!(out, "{prefix},");
            }
        }
    }
    let mut out = String::from("key,value\n");
    walk("", v, &mut out);
    out
}

/// Entry point used by the binary.
pub fn main_from_env() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let env_config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    run(&args, env_config, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&args, None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn config_parsing() {
        let m =
            parse_config("# comment\nepsilon = 0.2\n\nmodel=adler # trailing\nTe = 50\nmass-convention = geometric\n")
                .unwrap();
        assert_eq!(m["epsilon"], "0.2");
        assert_eq!(m["model"], "adler");
        assert_eq!(m["te"], "50");
        assert_eq!(m["mass_convention"], "geometric");
        assert!(parse_config("novalue\n").is_err());
        assert!(parse_config(" = 3\n").is_err());
    }

    #[test]
    fn no_args_is_usage() {
        let (code, _, err) = run_args(&["cslwalk"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn unknown_flag_is_usage() {
        let (code, _, _) = run_args(&["cslwalk", "sphere", "--bogus", "1"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn domain_error_exit_code() {
        let (code, _, err) = run_args(&["cslwalk", "sphere", "--epsilon", "0"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("epsilon"));
    }

    #[test]
    fn sphere_json() {
        let (code, out, _) = run_args(&[
            "cslwalk",
            "sphere",
            "--model",
            "adler",
            "--epsilon",
            "0.1",
            "--chi",
            "0.1",
            "--target",
            "1e-5",
            "--Te",
            "100",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let t = v["result"]["t_i"].as_f64().unwrap();
        let p = v["result"]["pressure_pt"].as_f64().unwrap();
        assert!((t / 463.0 - 1.0).abs() < 0.02 && (p / 3.8 - 1.0).abs() < 0.05);
        assert_eq!(v["run"]["config"]["model"], "adler");
    }

    #[test]
    fn strict_regime_exit() {
        // a hot environment puts scattering above emission at the solved T_i
        let (code, out, _) = run_args(&["cslwalk", "--strict", "sphere", "--Te", "300"]);
        assert_eq!(code, EXIT_REGIME);
        assert!(out.contains("emission_not_dominant"));
        let (code, _, _) = run_args(&["cslwalk", "sphere", "--Te", "300"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn table_csv_has_header() {
        let (code, out, _) = run_args(&["cslwalk", "table", "--id", "I"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("# tool: cslwalk"));
        assert!(out.lines().any(|l| l.starts_with("delta_x_cm,")));
        assert!(out.contains("# warning: known anomaly"));
    }

    #[test]
    fn byte_stable() {
        let a = run_args(&["cslwalk", "simulate", "--ntraj", "50", "--seed", "9"]);
        let b = run_args(&["cslwalk", "simulate", "--ntraj", "50", "--seed", "9"]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
    }
}
