//! Acceptance criteria. Each test prints one `ACCEPTANCE` line with its
//! verdict (written straight to stderr so it shows without `--nocapture`)
//! and then asserts.

use std::io::Write;

use cslwalk::diffusion::DiscSpec;
use cslwalk::diffusion::{DiffusionLaw, SphereSpec};
use cslwalk::feasibility::{
    derive_coefficients, gravity_feasibility, required_internal_temperature, required_pressure, solve, GravityModel,
    LambdaSource, ObjectSpec, Scenario, PRINTED,
};
use cslwalk::models::LAMBDA_ADLER;
use cslwalk::models::{
    effective_lambda_dp, effective_lambda_karolyhazy, CollapseModel, FormFactors, KarolyhazyParams, DEFAULT_RC,
};
use cslwalk::oscillator::{analyze, OscillatorScenario, OscillatorSpec};
use cslwalk::stochastic::{moments, simulate, SimConfig};
use cslwalk::table::{generate_table, TableId};
use cslwalk::thermal::{dominance_ratios, emission_displacement_coefficient, emission_threshold_temperature};
use cslwalk::tolerances::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

struct Report {
    id: u32,
    title: &'static str,
    checks: Vec<(String, bool)>,
}

impl Report {
    fn new(id: u32, title: &'static str) -> Self {
        Self { id, title, checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, pass: bool) {
        self.checks.push((label.into(), pass));
    }

    fn relative(&mut self, name: &str, computed: f64, reference: f64, tol: f64) {
        let pass = within_relative(computed, reference, tol);
        self.check(format!("{name}={computed:.4e} vs {reference:e} (+-{}%)", tol * 100.0), pass);
    }

    fn factor(&mut self, name: &str, computed: f64, reference: f64, k: f64) {
        let pass = within_factor(computed, reference, k);
        self.check(format!("{name}={computed:.4e} vs {reference:e} (x{k})"), pass);
    }

    fn finish(self) {
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("ACCEPTANCE C{:02} {verdict} {}", self.id, self.title);
        for (label, pass) in &self.checks {
            line.push_str(&format!(" | {} {label}", if *pass { "ok" } else { "FAILED" }));
        }
        line.push('\n');
        let _ = std::io::stderr().write_all(line.as_bytes());
        assert!(failed.is_empty(), "criterion {} failed: {failed:?}", self.id);
    }
}

#[test]
fn c01_sphere_temperature() {
    let mut r = Report::new(1, "sphere internal temperature");
    let t = required_internal_temperature(&Scenario::sphere(CollapseModel::grw())).unwrap();
    r.relative("T_i(grw)", t, 21.5, TIGHT);
    let t = required_internal_temperature(&Scenario::sphere(CollapseModel::adler())).unwrap();
    r.relative("T_i(adler)", t, 463.0, TIGHT);
    r.finish();
}

#[test]
fn c02_sphere_pressure() {
    let mut r = Report::new(2, "sphere pressure");
    let p = required_pressure(&Scenario::sphere(CollapseModel::grw())).unwrap();
    r.relative("P(grw)", p, 8.2e-3, STANDARD);
    let p = required_pressure(&Scenario::sphere(CollapseModel::adler())).unwrap();
    r.relative("P(adler)", p, 3.8, STANDARD);
    r.finish();
}

#[test]
fn c03_disc_solvers() {
    let mut r = Report::new(3, "disc temperature and pressure");
    let grw = solve(&Scenario::disc(CollapseModel::grw())).unwrap();
    let adler = solve(&Scenario::disc(CollapseModel::adler())).unwrap();
    r.relative("T_i(grw)", grw.t_i, 17.0, STANDARD);
    r.relative("T_i(adler)", adler.t_i, 365.0, STANDARD);
    r.relative("P(grw)", grw.pressure_pt, 0.3, LOOSE);
    r.relative("P(adler)", adler.pressure_pt, 132.7, LOOSE);
    r.finish();
}

#[test]
fn c04_displacement_tables() {
    let mut r = Report::new(4, "tables I and II");
    for id in [TableId::I, TableId::II] {
        let t = generate_table(id).unwrap();
        let total = t.cells().count();
        let ok = t.cells().filter(|(_, _, c)| c.within_tolerance).count();
        let mismatches = t.unexplained_mismatches();
        r.check(
            format!("table {}: {ok}/{total} cells within 10%, unexplained {mismatches:?}", id.as_str()),
            mismatches.is_empty(),
        );
        for (row, col, c) in t.cells().filter(|(_, _, c)| c.note.is_some()) {
            r.check(
                format!(
                    "table {} flagged {col}@{:e}: computed {:.4e}, printed {}",
                    id.as_str(),
                    row.key,
                    c.computed,
                    c.printed
                ),
                within_relative(c.computed, 1.36e3, TIGHT),
            );
        }
    }
    r.finish();
}

#[test]
fn c05_gravity_models() {
    let mut r = Report::new(5, "gravity models");
    let k = KarolyhazyParams::reference();
    let sphere = Scenario { t_e: 1.0, ..Scenario::sphere(CollapseModel::karolyhazy()) };
    let g = gravity_feasibility(&sphere, &GravityModel::Karolyhazy(k), LambdaSource::Rounded).unwrap();
    r.relative("T_i(karolyhazy)", g.result.t_i, 1.16, TIGHT);
    r.relative("P(karolyhazy)", g.result.pressure_pt, 3e-6, STANDARD);
    let disc = Scenario { t_e: 1.0, ..Scenario::disc(CollapseModel::diosi_penrose()) };
    let dp = gravity_feasibility(&disc, &GravityModel::DiosiPenrose { a: DEFAULT_RC }, LambdaSource::Rounded).unwrap();
    r.relative("T_i(dp disc)", dp.result.t_i, 1.18, LOOSE);
    r.relative("P(dp disc)", dp.result.pressure_pt, 1.33e-4, LOOSE);
    r.factor("lambda_K(live)", effective_lambda_karolyhazy(&k), 1e-24, 3.0);
    r.factor("lambda_DP(live)", effective_lambda_dp(DEFAULT_RC).unwrap(), 1e-23, 2.0);
    r.finish();
}

#[test]
fn c06_oscillator_headline() {
    let mut r = Report::new(6, "oscillator headline");
    let grw = analyze(&OscillatorScenario::headline()).unwrap();
    r.relative("dE", grw.delta_e, 3.3e-37, ENERGY_GAIN);
    r.check(
        format!("zero-point/gain={:.3e} in [1e17,1e21]", grw.zero_point_over_gain),
        (1e17..=1e21).contains(&grw.zero_point_over_gain),
    );
    r.factor("T_required", grw.t_required, 1.6e-3, OSCILLATOR_TEMPERATURE_FACTOR);
    r.factor("P_required", grw.p_required_pt, 0.3, OSCILLATOR_FACTOR);
    r.check(format!("t_min={:e} == 1e-5", grw.t_min), grw.t_min == 1e-5);
    let adler = OscillatorScenario { lambda: LAMBDA_ADLER, ..OscillatorScenario::headline() };
    let heavy = analyze(&adler).unwrap();
    let light =
        analyze(&OscillatorScenario { spec: OscillatorSpec::from_mass_amu(1e6, 1e10).unwrap(), ..adler }).unwrap();
    let order = |x: f64, o: f64| (x.log10() - o.log10()).abs() <= 0.5;
    r.check(format!("x(1e12 amu, adler)={:.3e} ~ 1e-18", heavy.x_classical), order(heavy.x_classical, 1e-18));
    r.check(format!("x(1e6 amu, adler)={:.3e} ~ 1e-15", light.x_classical), order(light.x_classical, 1e-15));
    r.finish();
}

#[test]
fn c07_oscillator_tables() {
    let mut r = Report::new(7, "tables III and IV");
    for id in [TableId::III, TableId::IV] {
        let t = generate_table(id).unwrap();
        let worst = t.cells().map(|(_, _, c)| (c.computed / c.printed).max(c.printed / c.computed)).fold(1.0, f64::max);
        let all = t.cells().all(|(_, _, c)| c.within_tolerance);
        let both = t.to_csv().contains(",computed,") && t.to_csv().contains(",paper_printed,");
        r.check(
            format!("table {}: worst factor {worst:.3}, computed+printed emitted {both}", id.as_str()),
            all && both,
        );
    }
    r.finish();
}

#[test]
fn c08_coefficient_closure() {
    let mut r = Report::new(8, "coefficient closure from first principles");
    let c = derive_coefficients(emission_displacement_coefficient(), &FormFactors::default());
    r.relative("csl_sphere", c.csl_sphere, PRINTED.csl_sphere, STANDARD);
    r.relative("sphere_pressure", c.sphere_pressure, PRINTED.sphere_pressure, STANDARD);
    r.relative("disc_pressure", c.disc_pressure, PRINTED.disc_pressure, STANDARD);
    r.relative("sphere_temperature", c.sphere_temperature, PRINTED.sphere_temperature, STANDARD);
    r.relative("disc_temperature", c.disc_temperature, PRINTED.disc_temperature, STANDARD);
    r.finish();
}

#[test]
fn c09_monte_carlo_oracle() {
    let mut r = Report::new(9, "Monte-Carlo oracle");
    let grw = CollapseModel::grw();
    let ff = FormFactors::default();
    let runs = [
        ("sphere", SimConfig::csl_sphere(&grw, &SphereSpec::default(), ff.f_trans, 13.0, 10_000, 2024)),
        ("disc", SimConfig::csl_disc(&grw, &DiscSpec::default(), ff.f_rot, 0.2, 10_000, 2025)),
    ];
    for (name, cfg) in runs {
        let e = simulate(&cfg).unwrap();
        let fin = e.final_rms();
        let analytic = cfg.analytic_rms(fin.t);
        let z = (fin.rms - analytic) / fin.standard_error;
        r.check(format!("{name} rms={:.4e} analytic={analytic:.4e} z={z:.2}", fin.rms), z.abs() <= MC_STANDARD_ERRORS);
        let fit = e.fit_powerlaw().unwrap();
        r.check(format!("{name} exponent={:.4}", fit.exponent), (fit.exponent - 1.5).abs() <= MC_EXPONENT);
        let m = moments(&e.final_samples());
        r.check(
            format!("{name} skew={:.3} kurt={:.3}", m.skewness, m.excess_kurtosis),
            m.skewness.abs() < 0.1 && m.excess_kurtosis.abs() < 0.2,
        );
    }
    let small = SimConfig::csl_sphere(&grw, &SphereSpec::default(), ff.f_trans, 13.0, 500, 77);
    let (a, b) = (simulate(&small).unwrap(), simulate(&small).unwrap());
    let identical = a.samples.iter().zip(&b.samples).all(|(x, y)| x.to_bits() == y.to_bits());
    r.check("identical seeds give bit-identical samples", identical);

    // mean |relative error| over 32 seeds at each ensemble size
    let sizes = [100usize, 1000, 10_000];
    let errors: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            (0..32u64)
                .map(|seed| {
                    let cfg = small.with_dt(13.0 / 200.0);
                    let cfg = SimConfig { n_traj: n, seed: 1000 + seed, ..cfg };
                    let fin = simulate(&cfg).unwrap().final_rms();
                    (fin.rms / cfg.analytic_rms(fin.t) - 1.0).abs()
                })
                .sum::<f64>()
                / 32.0
        })
        .collect();
    let x: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let (mx, my) = (x.iter().sum::<f64>() / 3.0, y.iter().sum::<f64>() / 3.0);
    let slope = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>()
        / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    let shown: Vec<String> = errors.iter().map(|e| format!("{e:.2e}")).collect();
    r.check(format!("convergence slope={slope:.3} (errors {})", shown.join("/")), (-0.65..=-0.35).contains(&slope));
    r.finish();
}

#[test]
fn c10_property_suite() {
    let mut r = Report::new(10, "property suite");
    let mut runner = TestRunner::new(Config { cases: 256, ..Config::default() });

    let exact = runner.run(&(1e-20f64..1e-6, 1e-6f64..1e6), |(lam, t)| {
        let law = DiffusionLaw::csl_sphere(&CollapseModel::grw().with_lambda(lam).unwrap(), 0.62);
        let (a, b) = (law.displacement(t).unwrap(), law.displacement(4.0 * t).unwrap());
        prop_assert!((b / (8.0 * a) - 1.0).abs() <= 4.0 * f64::EPSILON);
        Ok(())
    });
    r.check("t^3/2 exactness: D(4t) = 8 D(t)", exact.is_ok());

    let monotone = runner.run(
        &(0.01f64..0.5, 0.01f64..0.5, 1e-20f64..1e-7, 1.01f64..3.0, 0usize..2),
        |(eps, chi, lam, k, obj)| {
            let model = CollapseModel::grw().with_lambda(lam).unwrap();
            let base = if obj == 0 { Scenario::sphere(model) } else { Scenario::disc(model) };
            let base = Scenario { epsilon: eps, chi, ..base };
            let (t0, p0) = (required_internal_temperature(&base).unwrap(), required_pressure(&base).unwrap());
            let up_lam = Scenario { model: model.with_lambda(lam * k).unwrap(), ..base };
            let up_eps = Scenario { epsilon: eps * k, ..base };
            let up_chi = Scenario { chi: (chi * k).min(1.0), ..base };
            let up_te = Scenario { t_e: base.t_e * k, ..base };
            let up_target = Scenario { target_displacement: base.target_displacement * k, ..base };
            let mut denser = base;
            match &mut denser.object {
                ObjectSpec::Sphere(s) => s.density *= k,
                ObjectSpec::Disc(d) => d.density *= k,
            }
            prop_assert!(required_internal_temperature(&up_lam).unwrap() > t0);
            prop_assert!(required_internal_temperature(&up_eps).unwrap() > t0);
            prop_assert!(required_internal_temperature(&denser).unwrap() > t0);
            prop_assert!(required_pressure(&up_lam).unwrap() > p0);
            prop_assert!(required_pressure(&up_chi).unwrap() > p0);
            prop_assert!(required_pressure(&up_te).unwrap() > p0);
            prop_assert!(required_pressure(&up_target).unwrap() < p0);
            Ok(())
        },
    );
    r.check("solver monotonicity (sphere and disc)", monotone.is_ok());

    let round_trip = runner.run(&(1e-20f64..1e-6, 1e-8f64..1.0, any::<bool>()), |(lam, x, linear)| {
        let law = if linear {
            DiffusionLaw::Linear { rate: lam * 1e10 }
        } else {
            DiffusionLaw::csl_disc(&CollapseModel::grw().with_lambda(lam).unwrap(), 1.0 / 3.0)
        };
        let t = law.time_to_reach(x).unwrap();
        prop_assert!((law.displacement(t).unwrap() / x - 1.0).abs() < 1e-12);
        Ok(())
    });
    r.check("invert_time round trips", round_trip.is_ok());

    let flag = runner.run(&(1e-6f64..1e-4, 1.0f64..400.0, 0.5f64..0.99), |(radius, t_e, frac)| {
        let th = emission_threshold_temperature(radius, t_e).unwrap();
        prop_assert!(!dominance_ratios(radius, t_e, th * frac).unwrap().emission_dominant());
        prop_assert!(dominance_ratios(radius, t_e, th / frac).unwrap().emission_dominant());
        Ok(())
    });
    // the solved scenario raises the flag exactly when T_i is below threshold
    let mut solver_flag = true;
    for t_e in [10.0, 50.0, 100.0, 150.0, 300.0] {
        let res = solve(&Scenario { t_e, ..Scenario::sphere(CollapseModel::grw()) }).unwrap();
        solver_flag &= res.regime_flags.emission_dominant == (res.t_i > res.emission_threshold_t_i);
    }
    let hot = solve(&Scenario { t_e: 300.0, ..Scenario::sphere(CollapseModel::grw()) }).unwrap();
    solver_flag &= !hot.regime_flags.emission_dominant;
    r.check("emission-dominance flag fires below threshold", flag.is_ok() && solver_flag);
    r.finish();
}
