//! C ABI over the `cslwalk` library.
//!
//! Conventions:
//! * every fallible call returns a [`CslwalkStatus`] and writes results
//!   through out-pointers;
//! * objects are opaque handles created by `*_new`/`*_preset` calls and
//!   released with the matching `*_free` (null is accepted);
//! * on failure, [`cslwalk_last_error`] returns a message for the calling
//!   thread, valid until its next failing call;
//! * panics never cross the boundary; they become `CSLWALK_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cslwalk::diffusion::DiffusionLaw;
use cslwalk::feasibility::{self, gravity_feasibility, GravityModel, LambdaSource, Scenario};
use cslwalk::models::{CollapseModel, KarolyhazyParams, ModelKind};
use cslwalk::oscillator::{analyze, EtaLaw, OscillatorScenario, OscillatorSpec};
use cslwalk::stochastic::{simulate, SimConfig, TrajectoryEnsemble};
use cslwalk::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CslwalkStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    NoDiffusion = 3,
    InfiniteTime = 4,
    Overflow = 5,
    InvalidRange = 6,
    InvalidArgument = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CslwalkModelKind {
    Grw = 0,
    Csl = 1,
    Adler = 2,
    Karolyhazy = 3,
    DiosiPenrose = 4,
    Custom = 5,
}

impl From<CslwalkModelKind> for ModelKind {
    fn from(k: CslwalkModelKind) -> Self {
        match k {
            CslwalkModelKind::Grw => ModelKind::Grw,
            CslwalkModelKind::Csl => ModelKind::Csl,
            CslwalkModelKind::Adler => ModelKind::Adler,
            CslwalkModelKind::Karolyhazy => ModelKind::Karolyhazy,
            CslwalkModelKind::DiosiPenrose => ModelKind::DiosiPenrose,
            CslwalkModelKind::Custom => ModelKind::Custom,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CslwalkObject {
    Sphere = 0,
    Disc = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CslwalkEtaLaw {
    Grw = 0,
    Csl = 1,
    CslAsPrinted = 2,
}

/// Opaque collapse model.
pub struct CslwalkModel(CollapseModel);

/// Opaque feasibility scenario.
pub struct CslwalkScenario(Scenario);

/// Opaque Monte-Carlo ensemble.
pub struct CslwalkEnsemble(TrajectoryEnsemble);

/// Solved feasibility scenario. Flags are 1 when the condition holds.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CslwalkFeasibility {
    /// Required internal temperature (K).
    pub t_i: f64,
    /// Required pressure (pT).
    pub pressure_pt: f64,
    /// Time to reach the target (s).
    pub t_csl: f64,
    /// Collision time at the solved pressure (s).
    pub tau_c: f64,
    /// Time for quantum Brownian drift to reach the target (s).
    pub t_qbd: f64,
    pub emission_dominant: u8,
    pub impact_realm_ok: u8,
    pub qbd_subdominant: u8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CslwalkOscillatorReport {
    pub eta: f64,
    pub delta_e: f64,
    pub zero_point: f64,
    pub t_required: f64,
    pub p_required_pt: f64,
    pub t_min: f64,
    pub x_classical: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CslwalkRms {
    pub t: f64,
    pub rms: f64,
    pub standard_error: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CslwalkStatus {
    match e {
        Error::Domain { .. } => CslwalkStatus::Domain,
        Error::NoDiffusion(_) => CslwalkStatus::NoDiffusion,
        Error::InfiniteTime => CslwalkStatus::InfiniteTime,
        Error::Overflow(_) => CslwalkStatus::Overflow,
        Error::InvalidRange(_) | Error::DegenerateFit(_) => CslwalkStatus::InvalidRange,
        Error::Config(_) => CslwalkStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CslwalkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CslwalkStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("null pointer: {what}"));
            CslwalkStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            CslwalkStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(value);
    Ok(())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cslwalk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the calling thread's last failure (empty if none).
#[no_mangle]
pub extern "C" fn cslwalk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Preset model for `kind`. `Custom` starts with lambda = 0.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_model_preset(kind: CslwalkModelKind, out: *mut *mut CslwalkModel) -> CslwalkStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(CslwalkModel(CollapseModel::preset(kind.into()))))))
}

/// Model with explicit rate (1/s) and length (cm).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_model_new(
    kind: CslwalkModelKind,
    lambda: f64,
    r_c: f64,
    out: *mut *mut CslwalkModel,
) -> CslwalkStatus {
    guard(|| {
        let m = CollapseModel::new(kind.into(), lambda, r_c)?;
        write_out(out, Box::into_raw(Box::new(CslwalkModel(m))))
    })
}

/// # Safety
/// `model` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_model_free(model: *mut CslwalkModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_model_lambda(model: *const CslwalkModel, out: *mut f64) -> CslwalkStatus {
    guard(|| write_out(out, deref(model, "model")?.0.lambda))
}

/// Collapse displacement after `t` seconds: cm for a sphere with R = r_c,
/// rad for the anchor disc.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_csl_displacement(
    model: *const CslwalkModel,
    object: CslwalkObject,
    t: f64,
    out: *mut f64,
) -> CslwalkStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        write_out(out, law(m, object).displacement(t)?)
    })
}

/// Time (s) for the collapse law to reach `target`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_csl_time_to_reach(
    model: *const CslwalkModel,
    object: CslwalkObject,
    target: f64,
    out: *mut f64,
) -> CslwalkStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        write_out(out, law(m, object).time_to_reach(target)?)
    })
}

fn law(m: &CollapseModel, object: CslwalkObject) -> DiffusionLaw {
    let ff = cslwalk::models::FormFactors::default();
    match object {
        CslwalkObject::Sphere => DiffusionLaw::csl_sphere(m, ff.f_trans),
        CslwalkObject::Disc => DiffusionLaw::csl_disc(m, ff.f_rot),
    }
}

/// Default scenario (eps = chi = 0.1, T_e = 100 K; 1e-5 cm or 1e-3 rad
/// target) for `object` under a copy of `model`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_scenario_new(
    model: *const CslwalkModel,
    object: CslwalkObject,
    out: *mut *mut CslwalkScenario,
) -> CslwalkStatus {
    guard(|| {
        let m = deref(model, "model")?.0;
        let s = match object {
            CslwalkObject::Sphere => Scenario::sphere(m),
            CslwalkObject::Disc => Scenario::disc(m),
        };
        write_out(out, Box::into_raw(Box::new(CslwalkScenario(s))))
    })
}

/// # Safety
/// `scenario` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_scenario_free(scenario: *mut CslwalkScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Sets the four scalar inputs at once; the scenario is unchanged on error.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_scenario_set(
    scenario: *mut CslwalkScenario,
    epsilon: f64,
    chi: f64,
    target: f64,
    t_e: f64,
) -> CslwalkStatus {
    guard(|| {
        let s = deref_mut(scenario, "scenario")?;
        let next = Scenario { epsilon, chi, target_displacement: target, t_e, ..s.0 };
        next.validate()?;
        s.0 = next;
        Ok(())
    })
}

fn feasibility_out(r: &feasibility::FeasibilityResult) -> CslwalkFeasibility {
    CslwalkFeasibility {
        t_i: r.t_i,
        pressure_pt: r.pressure_pt,
        t_csl: r.t_csl,
        tau_c: r.tau_c,
        t_qbd: r.t_qbd,
        emission_dominant: r.regime_flags.emission_dominant.into(),
        impact_realm_ok: r.regime_flags.impact_realm_ok.into(),
        qbd_subdominant: r.regime_flags.qbd_subdominant.into(),
    }
}

/// Solves the scenario for the required T_i and P.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_scenario_solve(
    scenario: *const CslwalkScenario,
    out: *mut CslwalkFeasibility,
) -> CslwalkStatus {
    guard(|| {
        let r = feasibility::solve(&deref(scenario, "scenario")?.0)?;
        write_out(out, feasibility_out(&r))
    })
}

/// Karolyhazy feasibility with cell length `a_c` (cm) and time `tau_g` (s).
/// Spheres use the native law; discs use the rounded effective rate.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_scenario_solve_karolyhazy(
    scenario: *const CslwalkScenario,
    a_c: f64,
    tau_g: f64,
    out: *mut CslwalkFeasibility,
) -> CslwalkStatus {
    guard(|| {
        let s = &deref(scenario, "scenario")?.0;
        let g = GravityModel::Karolyhazy(KarolyhazyParams::new(a_c, tau_g)?);
        let r = gravity_feasibility(s, &g, LambdaSource::Rounded)?;
        write_out(out, feasibility_out(&r.result))
    })
}

/// Oscillator analysis for a mass in amu, angular frequency (rad/s), plate
/// area (cm^2), quality factor, rate `lambda`, fractions and observation time.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn cslwalk_oscillator_analyze(
    mass_amu: f64,
    omega: f64,
    area: f64,
    q: f64,
    eta_law: CslwalkEtaLaw,
    lambda: f64,
    epsilon: f64,
    chi: f64,
    t: f64,
    out: *mut CslwalkOscillatorReport,
) -> CslwalkStatus {
    guard(|| {
        let base = OscillatorSpec::from_mass_amu(mass_amu, omega)?;
        let spec = OscillatorSpec::new(base.n_nucleons, omega, area, q)?;
        let eta_law = match eta_law {
            CslwalkEtaLaw::Grw => EtaLaw::Grw,
            CslwalkEtaLaw::Csl => EtaLaw::Csl,
            CslwalkEtaLaw::CslAsPrinted => EtaLaw::CslAsPrinted,
        };
        let r = analyze(&OscillatorScenario { spec, eta_law, lambda, epsilon, chi, t_observation: t })?;
        write_out(
            out,
            CslwalkOscillatorReport {
                eta: r.eta,
                delta_e: r.delta_e,
                zero_point: r.zero_point,
                t_required: r.t_required,
                p_required_pt: r.p_required_pt,
                t_min: r.t_min,
                x_classical: r.x_classical,
            },
        )
    })
}

/// Runs an ensemble with momentum diffusion `diffusion` and inertia
/// `inertia`. `dt <= 0` selects `t_final / 1000`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_simulate(
    diffusion: f64,
    inertia: f64,
    t_final: f64,
    dt: f64,
    n_traj: usize,
    seed: u64,
    out: *mut *mut CslwalkEnsemble,
) -> CslwalkStatus {
    guard(|| {
        let mut cfg = SimConfig::new(diffusion, inertia, t_final, n_traj, seed);
        if dt > 0.0 {
            cfg = cfg.with_dt(dt);
        }
        let e = simulate(&cfg)?;
        write_out(out, Box::into_raw(Box::new(CslwalkEnsemble(e))))
    })
}

/// Ensemble for the collapse walk of the default sphere or disc.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_simulate_csl(
    model: *const CslwalkModel,
    object: CslwalkObject,
    t_final: f64,
    n_traj: usize,
    seed: u64,
    out: *mut *mut CslwalkEnsemble,
) -> CslwalkStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        let ff = cslwalk::models::FormFactors::default();
        let cfg = match object {
            CslwalkObject::Sphere => SimConfig::csl_sphere(m, &Default::default(), ff.f_trans, t_final, n_traj, seed),
            CslwalkObject::Disc => SimConfig::csl_disc(m, &Default::default(), ff.f_rot, t_final, n_traj, seed),
        };
        let e = simulate(&cfg)?;
        write_out(out, Box::into_raw(Box::new(CslwalkEnsemble(e))))
    })
}

/// # Safety
/// `ensemble` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_ensemble_free(ensemble: *mut CslwalkEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

/// Number of recorded time points.
///
/// # Safety
/// `ensemble` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_ensemble_len(ensemble: *const CslwalkEnsemble, out: *mut usize) -> CslwalkStatus {
    guard(|| write_out(out, deref(ensemble, "ensemble")?.0.times.len()))
}

/// RMS and standard error at checkpoint `k`.
///
/// # Safety
/// `ensemble` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cslwalk_ensemble_rms(
    ensemble: *const CslwalkEnsemble,
    k: usize,
    out: *mut CslwalkRms,
) -> CslwalkStatus {
    guard(|| {
        let e = &deref(ensemble, "ensemble")?.0;
        if k >= e.times.len() {
            return Err(Error::InvalidRange(format!("checkpoint {k} of {}", e.times.len())).into());
        }
        let r = e.rms_at(k);
        write_out(out, CslwalkRms { t: r.t, rms: r.rms, standard_error: r.standard_error })
    })
}
