//! Resolution of parsed flags into parameter sets, and the subcommands.

use std::path::PathBuf;

use fracmech::similarity::{self, KeplerReport, LogLogFit, OrbitLandmark};
use fracmech::{
    hamiltonian, integrate, FractionalParams, InitialConditions, IntegratorConfig, OscillatorSpec, PeriodReport,
    PowerLawPotential, Vector,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{
    Command, HjArgs, KeplerArgs, KineticArgs, OutputArgs, PeriodArgs, PotentialArgs, SimulateArgs, SweepArgs,
    ToleranceArgs,
};
use crate::error::CliError;
use crate::output::{sibling, write_csv, write_json};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kinetic {
    pub alpha: f64,
    pub d_alpha: f64,
    /// Set when the kinetic term came from `--mass`.
    pub mass: Option<f64>,
}

impl Kinetic {
    fn params(&self) -> Result<FractionalParams, CliError> {
        Ok(match self.mass {
            Some(m) => FractionalParams::classical(m)?,
            None => FractionalParams::new(self.alpha, self.d_alpha)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    pub strength: f64,
    pub degree: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Motion {
    Momentum(Vec<f64>),
    Velocity(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateParams {
    pub kinetic: Kinetic,
    pub potential: Potential,
    pub q0: Vec<f64>,
    pub motion: Motion,
    pub t0: f64,
    pub t1: f64,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodParams {
    pub kinetic: Kinetic,
    pub potential: Potential,
    pub energy: f64,
    pub check_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HjParams {
    pub kinetic: Kinetic,
    pub potential: Potential,
    pub energy: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub energies: Vec<f64>,
    pub d_alpha: f64,
    pub strength: f64,
    pub check_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeplerParams {
    pub kinetic: Kinetic,
    pub strength: f64,
    pub q0: Vec<f64>,
    pub motion: Motion,
    pub rhos: Vec<f64>,
    pub check_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "parameters", rename_all = "snake_case")]
pub enum Params {
    Simulate(SimulateParams),
    Period(PeriodParams),
    Hj(HjParams),
    Sweep(SweepParams),
    Kepler(KeplerParams),
}

impl Params {
    pub fn name(&self) -> &'static str {
        match self {
            Params::Simulate(_) => "simulate",
            Params::Period(_) => "period",
            Params::Hj(_) => "hj",
            Params::Sweep(_) => "sweep",
            Params::Kepler(_) => "kepler",
        }
    }

    /// The parameter set alone, as echoed in the manifest.
    pub fn to_value(&self) -> serde_json::Value {
        let v = match self {
            Params::Simulate(p) => serde_json::to_value(p),
            Params::Period(p) => serde_json::to_value(p),
            Params::Hj(p) => serde_json::to_value(p),
            Params::Sweep(p) => serde_json::to_value(p),
            Params::Kepler(p) => serde_json::to_value(p),
        };
        v.expect("parameter sets serialize")
    }
}

/// Where the artifacts of a run go; `None` data means standard output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outputs {
    pub data: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    /// Side summary (Kepler only).
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub params: Params,
    pub tolerances: IntegratorConfig,
    pub outputs: Outputs,
}

fn kinetic(args: &KineticArgs) -> Result<Kinetic, CliError> {
    match args.mass {
        Some(m) => {
            if let Some(a) = args.alpha {
                if a != 2.0 {
                    return Err(CliError::Usage(format!("--mass implies --alpha 2, got --alpha {a}")));
                }
            }
            let p = FractionalParams::classical(m)?;
            Ok(Kinetic { alpha: 2.0, d_alpha: p.d_alpha(), mass: Some(m) })
        }
        None => {
            let alpha = args.alpha.ok_or_else(|| CliError::Usage("--alpha is required unless --mass is given".into()))?;
            Ok(Kinetic { alpha, d_alpha: args.d_alpha.unwrap_or(1.0), mass: None })
        }
    }
}

fn potential(args: &PotentialArgs) -> Potential {
    Potential { strength: args.strength, degree: args.degree }
}

fn tolerances(args: &ToleranceArgs) -> Result<IntegratorConfig, CliError> {
    let cfg = IntegratorConfig {
        rel_tol: args.rel_tol,
        abs_tol: args.abs_tol,
        event_tol: args.event_tol,
        max_steps: args.max_steps,
        ..IntegratorConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn outputs(args: &OutputArgs, summary: Option<PathBuf>, with_summary: bool) -> Outputs {
    let manifest = args.manifest.clone().or_else(|| args.out.as_deref().map(|p| sibling(p, "manifest.json")));
    let summary = if with_summary {
        summary.or_else(|| args.out.as_deref().map(|p| sibling(p, "summary.json")))
    } else {
        None
    };
    Outputs { data: args.out.clone(), manifest, summary }
}

fn motion(p0: &Option<Vec<f64>>, v0: &Option<Vec<f64>>, default: Vec<f64>) -> Motion {
    match (p0, v0) {
        (_, Some(v)) => Motion::Velocity(v.clone()),
        (Some(p), None) => Motion::Momentum(p.clone()),
        (None, None) => Motion::Momentum(default),
    }
}

/// Turn parsed flags into a complete, validated parameter set.
pub fn resolve(cmd: &Command) -> Result<Resolved, CliError> {
    let (params, tol, out) = match cmd {
        Command::Simulate(a) => {
            let SimulateArgs { q0, p0, v0, t0, t1, samples, .. } = a;
            if !(t1 > t0) {
                return Err(CliError::Usage(format!("--t1 ({t1}) must exceed --t0 ({t0})")));
            }
            if *samples == Some(0) {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let p = SimulateParams {
                kinetic: kinetic(&a.kinetic)?,
                potential: potential(&a.potential),
                q0: q0.clone(),
                motion: motion(p0, v0, vec![0.0; q0.len()]),
                t0: *t0,
                t1: *t1,
                samples: *samples,
            };
            (Params::Simulate(p), &a.tolerances, outputs(&a.output, None, false))
        }
        Command::Period(a) => {
            let PeriodArgs { energy, check_tol, .. } = a;
            let p = PeriodParams {
                kinetic: kinetic(&a.kinetic)?,
                potential: potential(&a.potential),
                energy: *energy,
                check_tol: *check_tol,
            };
            (Params::Period(p), &a.tolerances, outputs(&a.output, None, false))
        }
        Command::Hj(a) => {
            let HjArgs { energy, samples, .. } = a;
            if *samples == 0 {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let p = HjParams {
                kinetic: kinetic(&a.kinetic)?,
                potential: potential(&a.potential),
                energy: *energy,
                samples: *samples,
            };
            (Params::Hj(p), &a.tolerances, outputs(&a.output, None, false))
        }
        Command::Sweep(a) => {
            let SweepArgs { alphas, betas, energies, d_alpha, strength, check_tol, .. } = a;
            let p = SweepParams {
                alphas: alphas.clone(),
                betas: betas.clone(),
                energies: energies.clone(),
                d_alpha: *d_alpha,
                strength: *strength,
                check_tol: *check_tol,
            };
            (Params::Sweep(p), &a.tolerances, outputs(&a.output, None, false))
        }
        Command::Kepler(a) => {
            let KeplerArgs { strength, q0, p0, v0, rhos, check_tol, summary, .. } = a;
            let p = KeplerParams {
                kinetic: kinetic(&a.kinetic)?,
                strength: *strength,
                q0: q0.clone(),
                motion: motion(p0, v0, vec![0.0, 0.8]),
                rhos: rhos.clone(),
                check_tol: *check_tol,
            };
            (Params::Kepler(p), &a.tolerances, outputs(&a.output, summary.clone(), true))
        }
    };
    if !(check_tol_of(&params) > 0.0) {
        return Err(CliError::Usage("--check-tol must be positive".into()));
    }
    Ok(Resolved { params, tolerances: tolerances(tol)?, outputs: out })
}

fn check_tol_of(p: &Params) -> f64 {
    match p {
        Params::Period(p) => p.check_tol,
        Params::Sweep(p) => p.check_tol,
        Params::Kepler(p) => p.check_tol,
        Params::Simulate(_) | Params::Hj(_) => 1.0,
    }
}

/// Result of a subcommand that produced its artifacts.
pub struct Report {
    pub data: Vec<u8>,
    pub summary: serde_json::Value,
    /// A consistency check that failed after the data was produced.
    pub failure: Option<CliError>,
}

pub fn execute(r: &Resolved) -> Result<Report, CliError> {
    match &r.params {
        Params::Simulate(p) => simulate(p, &r.tolerances),
        Params::Period(p) => period(p, &r.tolerances),
        Params::Hj(p) => hj(p, &r.tolerances),
        Params::Sweep(p) => sweep(p, &r.tolerances),
        Params::Kepler(p) => kepler(p, &r.tolerances),
    }
}

fn vector(xs: &[f64], flag: &str) -> Result<Vector, CliError> {
    Vector::new(xs).map_err(|e| CliError::Usage(format!("{flag}: {e}")))
}

fn initial_conditions(q0: &[f64], motion: &Motion) -> Result<InitialConditions, CliError> {
    let q = vector(q0, "--q0")?;
    let ic = match motion {
        Motion::Momentum(p) => InitialConditions::with_momentum(q, vector(p, "--p0")?),
        Motion::Velocity(v) => InitialConditions::with_velocity(q, vector(v, "--v0")?),
    };
    ic.map_err(|e| CliError::Usage(format!("initial conditions: {e}")))
}

fn simulate(p: &SimulateParams, cfg: &IntegratorConfig) -> Result<Report, CliError> {
    let params = p.kinetic.params()?;
    let pot = PowerLawPotential::new(p.potential.strength, p.potential.degree)?;
    let ic = initial_conditions(&p.q0, &p.motion)?;
    let sol = integrate(&params, &pot, &ic, (p.t0, p.t1), cfg)?;
    let traj = &sol.trajectory;

    let states = match p.samples {
        None => traj.samples().iter().map(|s| (s.state, s.energy)).collect::<Vec<_>>(),
        Some(n) => {
            let mut out = Vec::with_capacity(n);
            for k in 0..n {
                let t = if n == 1 { p.t0 } else { p.t0 + (p.t1 - p.t0) * k as f64 / (n - 1) as f64 };
                let s = traj
                    .state_at(t.min(traj.t_end()))
                    .ok_or_else(|| CliError::Numeric(format!("no dense output at t = {t}")))?;
                out.push((s, hamiltonian(&params, &pot, &s)?));
            }
            out
        }
    };

    let dim = ic.dim();
    let mut header: Vec<String> = vec!["t".into()];
    header.extend((1..=dim).map(|i| format!("q{i}")));
    header.extend((1..=dim).map(|i| format!("p{i}")));
    header.extend(["energy".into(), "energy_drift_rel".into()]);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();

    let e0 = traj.initial().energy;
    let drift = |e: f64| if e0 == 0.0 { (e - e0).abs() } else { (e - e0).abs() / e0.abs() };
    let mut max_drift = 0.0f64;
    let rows: Vec<Vec<f64>> = states
        .iter()
        .map(|(s, e)| {
            max_drift = max_drift.max(drift(*e));
            let mut row = vec![s.t];
            row.extend_from_slice(s.q.as_slice());
            row.extend_from_slice(s.p.as_slice());
            row.extend([*e, drift(*e)]);
            row
        })
        .collect();

    let mut data = Vec::new();
    write_csv(&mut data, &header, &rows)?;
    let summary = json!({
        "rows": rows.len(),
        "initial_energy": e0,
        "max_energy_drift_rel": max_drift,
        "accepted_steps": traj.accepted_steps,
        "rejected_steps": traj.rejected_steps,
    });
    Ok(Report { data, summary, failure: None })
}

fn oscillator(k: &Kinetic, pot: &Potential, energy: f64) -> Result<OscillatorSpec, CliError> {
    Ok(OscillatorSpec::new(k.params()?, PowerLawPotential::oscillator(pot.strength, pot.degree)?, energy)?)
}

fn spread_failure(what: &str, spread: f64, tol: f64) -> Option<CliError> {
    (spread > tol).then(|| CliError::Numeric(format!("{what}: relative spread {spread:e} exceeds --check-tol {tol:e}")))
}

fn period(p: &PeriodParams, cfg: &IntegratorConfig) -> Result<Report, CliError> {
    let osc = oscillator(&p.kinetic, &p.potential, p.energy)?;
    let report: PeriodReport = osc.period_report(Some(cfg))?;
    let mut data = Vec::new();
    write_json(&mut data, &report)?;
    let summary = json!({
        "max_pairwise_rel_diff": report.max_pairwise_rel_diff,
        "check_tol": p.check_tol,
        "passed": report.is_consistent(p.check_tol),
    });
    let failure = spread_failure("period", report.max_pairwise_rel_diff, p.check_tol);
    Ok(Report { data, summary, failure })
}

fn hj(p: &HjParams, cfg: &IntegratorConfig) -> Result<Report, CliError> {
    let osc = oscillator(&p.kinetic, &p.potential, p.energy)?;
    let params = osc.params;
    let period = osc.period();
    let q_turn = osc.turning_point();

    // Through the origin at t = 0 moving forward, matching the HJ phase with δ = 0.
    let p_max = (p.energy / params.d_alpha()).powf(1.0 / params.alpha());
    let ic = InitialConditions::with_momentum(Vector::scalar(0.0), Vector::scalar(p_max))?;
    let sol = integrate(&params, &osc.pot, &ic, (0.0, period), cfg)?;
    let traj = &sol.trajectory;

    let n = p.samples;
    let mut max_diff = 0.0f64;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let t = if n == 1 { 0.0 } else { period * k as f64 / (n - 1) as f64 };
        let q_ode = traj
            .state_at(t.min(traj.t_end()))
            .ok_or_else(|| CliError::Numeric(format!("no dense output at t = {t}")))?
            .q[0];
        let q_hj = osc.hj_trajectory(t, 0.0);
        let diff = (q_hj - q_ode).abs();
        max_diff = max_diff.max(diff);
        rows.push(vec![t, q_hj, q_ode, diff]);
    }

    let mut data = Vec::new();
    write_csv(&mut data, &["t", "q_hj", "q_ode", "abs_diff"], &rows)?;
    let summary = json!({
        "period": period,
        "turning_point": q_turn,
        "max_abs_diff": max_diff,
        "max_abs_diff_rel_turning_point": max_diff / q_turn,
    });
    Ok(Report { data, summary, failure: None })
}

fn sweep(p: &SweepParams, cfg: &IntegratorConfig) -> Result<Report, CliError> {
    // Lexicographic grid order, validated before any integration starts.
    let mut grid = Vec::with_capacity(p.alphas.len() * p.betas.len() * p.energies.len());
    for &alpha in &p.alphas {
        for &beta in &p.betas {
            for &energy in &p.energies {
                let spec = OscillatorSpec::from_values(alpha, p.d_alpha, p.strength, beta, energy)
                    .map_err(|e| CliError::Usage(format!("grid point alpha={alpha} beta={beta} energy={energy}: {e}")))?;
                grid.push(spec);
            }
        }
    }
    let reports: Vec<PeriodReport> =
        grid.par_iter().map(|spec| spec.period_report(Some(cfg))).collect::<Result<_, _>>()?;

    let mut worst = 0.0f64;
    let rows: Vec<Vec<f64>> = grid
        .iter()
        .zip(&reports)
        .map(|(spec, r)| {
            worst = worst.max(r.max_pairwise_rel_diff);
            vec![
                spec.params.alpha(),
                spec.pot.degree(),
                spec.energy,
                r.closed_form,
                r.quadrature,
                r.ode_measured.unwrap_or(f64::NAN),
                r.max_pairwise_rel_diff,
            ]
        })
        .collect();

    let mut data = Vec::new();
    write_csv(&mut data, &["alpha", "beta", "energy", "T_closed", "T_quad", "T_ode", "rel_spread"], &rows)?;
    let summary = json!({
        "rows": rows.len(),
        "max_rel_spread": worst,
        "check_tol": p.check_tol,
        "passed": worst <= p.check_tol,
    });
    let failure = spread_failure("sweep", worst, p.check_tol);
    Ok(Report { data, summary, failure })
}

/// Summary of a Kepler run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeplerSummary {
    pub alpha: f64,
    pub landmark: OrbitLandmark,
    pub base_period: f64,
    pub predicted_slope: f64,
    /// Absent for a single length ratio.
    pub fit: Option<LogLogFit>,
    pub single_point: bool,
    pub check_tol: f64,
    pub passed: bool,
}

impl KeplerSummary {
    fn new(r: &KeplerReport, check_tol: f64) -> Self {
        let passed = r.fit.is_none_or(|f| (f.slope - r.predicted_slope).abs() <= check_tol);
        Self {
            alpha: r.alpha,
            landmark: r.landmark,
            base_period: r.base_period,
            predicted_slope: r.predicted_slope,
            fit: r.fit,
            single_point: r.fit.is_none(),
            check_tol,
            passed,
        }
    }
}

fn kepler(p: &KeplerParams, cfg: &IntegratorConfig) -> Result<Report, CliError> {
    let params = p.kinetic.params()?;
    if !(p.strength < 0.0) {
        return Err(CliError::Usage(format!("--strength must be negative (attractive), got {}", p.strength)));
    }
    let pot = PowerLawPotential::new(p.strength, -1.0)?;
    let ic = initial_conditions(&p.q0, &p.motion)?;
    let report = similarity::fractional_kepler_check(&params, &pot, &ic, &p.rhos, cfg)?;

    let rows: Vec<Vec<f64>> =
        report.rows.iter().map(|r| vec![r.rho, r.measured_ratio, r.predicted_ratio, r.rel_err]).collect();
    let mut data = Vec::new();
    write_csv(&mut data, &["rho", "T_ratio_measured", "T_ratio_predicted", "rel_err"], &rows)?;

    let summary = KeplerSummary::new(&report, p.check_tol);
    let failure = (!summary.passed).then(|| {
        let slope = summary.fit.map_or(f64::NAN, |f| f.slope);
        CliError::Numeric(format!(
            "fitted slope {slope} differs from 2 - 1/alpha = {} by more than {}",
            summary.predicted_slope, p.check_tol
        ))
    });
    Ok(Report { data, summary: serde_json::to_value(&summary)?, failure })
}
