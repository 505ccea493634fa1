//! Monte-Carlo random walks driven by momentum diffusion.
//!
//! Each trajectory starts at rest. Every step adds a Gaussian momentum kick
//! of variance `2 D dt`; position integrates `p / M` with the trapezoid rule.
//! The second moment tends to `(2/3) (D / M^2) t^3`, the square of a t^{3/2}
//! displacement law, so the ensemble independently checks the closed forms.
//!
//! Trajectory `i` draws from ChaCha8 stream `i` of the master seed, so
//! results do not depend on thread count or scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::diffusion::{csl_disc_prefactor, DiscSpec, SphereSpec};
use crate::error::{non_negative, positive, Error, Result};
use crate::fit::{fit_powerlaw, PowerLawFit};
use crate::models::CollapseModel;
use crate::units::CGS;

/// Number of recorded time points per trajectory (fewer for short runs).
pub const CHECKPOINTS: usize = 50;
/// First recorded step; earlier steps carry visible discretization bias.
pub const FIRST_CHECKPOINT_STEP: usize = 20;
/// Steps below this count raise the coarse-step warning.
pub const MIN_STEPS: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    /// Momentum diffusion constant, (g cm/s)^2/s or (erg s)^2/s.
    pub diffusion_coefficient: f64,
    /// Mass (g) or moment of inertia (g cm^2).
    pub inertia: f64,
    pub t_final: f64,
    pub dt: f64,
    pub n_traj: usize,
    pub seed: u64,
}

impl SimConfig {
    /// Default step is `t_final / 1000`.
    pub fn new(diffusion_coefficient: f64, inertia: f64, t_final: f64, n_traj: usize, seed: u64) -> Self {
        Self { diffusion_coefficient, inertia, t_final, dt: t_final / 1000.0, n_traj, seed }
    }

    /// Translation of a sphere under the CSL law.
    pub fn csl_sphere(
        model: &CollapseModel,
        sphere: &SphereSpec,
        f: f64,
        t_final: f64,
        n_traj: usize,
        seed: u64,
    ) -> Self {
        let d = csl_momentum_diffusion_coefficient(model, f, sphere.nucleon_count(), model.r_c);
        Self::new(d, sphere.mass(), t_final, n_traj, seed)
    }

    /// Rotation of a disc under the CSL law.
    pub fn csl_disc(
        model: &CollapseModel,
        disc: &DiscSpec,
        f_rot: f64,
        t_final: f64,
        n_traj: usize,
        seed: u64,
    ) -> Self {
        let i = disc.moment_of_inertia();
        Self::new(csl_angular_diffusion_coefficient(model, f_rot, i), i, t_final, n_traj, seed)
    }

    pub fn with_dt(self, dt: f64) -> Self {
        Self { dt, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("diffusion coefficient", self.diffusion_coefficient)?;
        positive("inertia", self.inertia)?;
        positive("dt", self.dt)?;
        positive("t_final", self.t_final)?;
        if self.t_final < self.dt {
            return Err(Error::Domain { name: "t_final", value: self.t_final, requirement: "must be >= dt" });
        }
        if self.n_traj < 2 {
            return Err(Error::Domain { name: "n_traj", value: self.n_traj as f64, requirement: "must be >= 2" });
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        ((self.t_final / self.dt).round() as usize).max(1)
    }

    /// Closed-form RMS displacement at time `t`.
    pub fn analytic_rms(&self, t: f64) -> f64 {
        (2.0 / 3.0 * self.diffusion_coefficient * t.powi(3)).sqrt() / self.inertia
    }
}

/// `lambda hbar^2 f N^2 / (4 a^2)`: the momentum diffusion whose t^{3/2}
/// displacement matches the CSL sphere law.
pub fn csl_momentum_diffusion_coefficient(model: &CollapseModel, f: f64, n: f64, a: f64) -> f64 {
    model.lambda * CGS.hbar * CGS.hbar * f * n * n / (4.0 * a * a)
}

/// Angular-momentum diffusion `(3/2) I^2 k^2` with `k` the disc rotation
/// prefactor, so that `(2/3) (D / I^2) t^3 = (k t^{3/2})^2`.
pub fn csl_angular_diffusion_coefficient(model: &CollapseModel, f_rot: f64, inertia: f64) -> f64 {
    let k = csl_disc_prefactor(model, f_rot);
    1.5 * inertia * inertia * k * k
}

/// RMS estimate and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RmsEstimate {
    pub t: f64,
    pub rms: f64,
    pub standard_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryEnsemble {
    pub config: SimConfig,
    pub times: Vec<f64>,
    /// Trajectory-major samples: `samples[traj * times.len() + k]`.
    #[serde(skip)]
    pub samples: Vec<f64>,
    pub seed_used: u64,
    pub warnings: Vec<String>,
}

fn checkpoint_steps(n_steps: usize) -> Vec<usize> {
    let first = FIRST_CHECKPOINT_STEP.min(n_steps) as f64;
    let last = n_steps as f64;
    let mut steps: Vec<usize> = (0..CHECKPOINTS)
        .map(|i| {
            let frac = i as f64 / (CHECKPOINTS - 1) as f64;
            (first * (last / first).powf(frac)).round() as usize
        })
        .collect();
    steps.dedup();
    *steps.last_mut().expect("non-empty") = n_steps;
    steps
}

fn run_trajectory(cfg: &SimConfig, steps: &[usize], stream: u64, out: &mut [f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let sigma = (2.0 * cfg.diffusion_coefficient * cfg.dt).sqrt();
    let half_dt_over_m = 0.5 * cfg.dt / cfg.inertia;
    let (mut p, mut x) = (0.0f64, 0.0f64);
    let mut next = 0;
    for step in 1..=steps[steps.len() - 1] {
        let z: f64 = StandardNormal.sample(&mut rng);
        let p_new = p + sigma * z;
        x += half_dt_over_m * (p + p_new);
        p = p_new;
        if step == steps[next] {
            out[next] = x;
            next += 1;
        }
    }
}

/// Runs the ensemble. Identical configs give bit-identical ensembles.
pub fn simulate(cfg: &SimConfig) -> Result<TrajectoryEnsemble> {
    cfg.validate()?;
    let n_steps = cfg.n_steps();
    let steps = checkpoint_steps(n_steps);
    let n_chk = steps.len();
    let mut samples = vec![0.0; cfg.n_traj * n_chk];
    if cfg.diffusion_coefficient > 0.0 {
        samples.par_chunks_mut(n_chk).enumerate().for_each(|(i, out)| run_trajectory(cfg, &steps, i as u64, out));
    }
    let mut warnings = Vec::new();
    if cfg.dt > cfg.t_final / MIN_STEPS {
        warnings.push(format!("dt = {:e} s exceeds t_final/{MIN_STEPS}; expect discretization bias", cfg.dt));
    }
    Ok(TrajectoryEnsemble {
        config: *cfg,
        times: steps.iter().map(|&s| s as f64 * cfg.dt).collect(),
        samples,
        seed_used: cfg.seed,
        warnings,
    })
}

impl TrajectoryEnsemble {
    pub fn n_traj(&self) -> usize {
        self.config.n_traj
    }

    pub fn coarse_step(&self) -> bool {
        !self.warnings.is_empty()
    }

    /// Samples of all trajectories at checkpoint `k`.
    pub fn column(&self, k: usize) -> impl Iterator<Item = f64> + '_ {
        let n = self.times.len();
        (0..self.n_traj()).map(move |i| self.samples[i * n + k])
    }

    pub fn final_samples(&self) -> Vec<f64> {
        self.column(self.times.len() - 1).collect()
    }

    /// RMS at checkpoint `k`; the standard error of the mean square,
    /// `std(x^2) / sqrt(n)`, is propagated as `SE / (2 rms)`.
    pub fn rms_at(&self, k: usize) -> RmsEstimate {
        let n = self.n_traj() as f64;
        let sq: Vec<f64> = self.column(k).map(|x| x * x).collect();
        let mean = sq.iter().sum::<f64>() / n;
        let var = sq.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let rms = mean.sqrt();
        let se_mean = (var / n).sqrt();
        RmsEstimate { t: self.times[k], rms, standard_error: if rms > 0.0 { se_mean / (2.0 * rms) } else { 0.0 } }
    }

    pub fn rms_curve(&self) -> Vec<RmsEstimate> {
        (0..self.times.len()).map(|k| self.rms_at(k)).collect()
    }

    pub fn final_rms(&self) -> RmsEstimate {
        self.rms_at(self.times.len() - 1)
    }

    pub fn fit_powerlaw(&self) -> Result<PowerLawFit> {
        let curve = self.rms_curve();
        let t: Vec<f64> = curve.iter().map(|e| e.t).collect();
        let y: Vec<f64> = curve.iter().map(|e| e.rms).collect();
        fit_powerlaw(&t, &y)
    }
}

pub fn moments(samples: &[f64]) -> Moments {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let central = |p: i32| samples.iter().map(|x| (x - mean).powi(p)).sum::<f64>() / n;
    let variance = central(2);
    if variance == 0.0 {
        return Moments { mean, variance, skewness: 0.0, excess_kurtosis: 0.0 };
    }
    Moments {
        mean,
        variance,
        skewness: central(3) / variance.powf(1.5),
        excess_kurtosis: central(4) / (variance * variance) - 3.0,
    }
}
