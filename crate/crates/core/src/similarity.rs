//! Mechanical similarity for homogeneous potentials `V = s|q|^β`.
//!
//! Under `q → ρq` the equations of motion are invariant when times scale by
//! `ρ^(1−β+β/α)`, velocities by `ρ^(β−β/α)`, momenta by `ρ^(β/α)` and energies
//! by `ρ^β`. For `β = −1` this gives the fractional Kepler law
//! `T ∝ l^(2−1/α)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::{CustomEvent, Direction, EventKind, EventRecord, Integrator, IntegratorConfig};
use crate::model::{hamiltonian, FractionalParams, InitialConditions, InitialMotion, PowerLawPotential};
use crate::trajectory::{Sample, Trajectory};
use crate::vector::Vector;

/// Power-law exponents of the similarity map, all relative to the length ratio
/// except `time_vs_energy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityExponents {
    pub time_vs_length: f64,
    pub velocity_vs_length: f64,
    pub energy_vs_length: f64,
    pub time_vs_energy: f64,
}

impl SimilarityExponents {
    /// Momentum exponent `β/α`.
    pub fn momentum_vs_length(&self) -> f64 {
        self.energy_vs_length - self.velocity_vs_length
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must lie in (1, 2], got {alpha}")))
    }
}

pub fn exponents(alpha: f64, beta: f64) -> Result<SimilarityExponents> {
    check_alpha(alpha)?;
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::invalid(format!("potential degree must be finite and nonzero, got {beta}")));
    }
    Ok(SimilarityExponents {
        time_vs_length: 1.0 - beta + beta / alpha,
        velocity_vs_length: beta - beta / alpha,
        energy_vs_length: beta,
        time_vs_energy: 1.0 / alpha + 1.0 / beta - 1.0,
    })
}

/// Degree `−γ` of the potential for which `T² ∝ l³` holds under α-kinetics:
/// `γ = α / (2(α − 1))`.
pub fn kepler_gamma(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(alpha / (2.0 * (alpha - 1.0)))
}

struct Factors {
    time: f64,
    length: f64,
    velocity: f64,
    momentum: f64,
    energy: f64,
}

fn factors(rho: f64, alpha: f64, beta: f64) -> Result<Factors> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid(format!("length ratio must be positive, got {rho}")));
    }
    let e = exponents(alpha, beta)?;
    Ok(Factors {
        time: rho.powf(e.time_vs_length),
        length: rho,
        velocity: rho.powf(e.velocity_vs_length),
        momentum: rho.powf(beta / alpha),
        energy: rho.powf(e.energy_vs_length),
    })
}

/// Image of `traj` under the similarity map with length ratio `rho`.
pub fn scale_trajectory(traj: &Trajectory, rho: f64, alpha: f64, beta: f64) -> Result<Trajectory> {
    let f = factors(rho, alpha, beta)?;
    let samples = traj
        .samples()
        .iter()
        .map(|s| Sample {
            state: crate::model::PhaseState { t: s.state.t * f.time, q: s.state.q * f.length, p: s.state.p * f.momentum },
            energy: s.energy * f.energy,
        })
        .collect();
    let segments = traj.segments().iter().map(|seg| seg.scaled(f.time, f.length, f.momentum)).collect();
    Ok(Trajectory::from_parts(samples, segments, traj.accepted_steps, traj.rejected_steps))
}

/// Initial conditions mapped by `q0 → ρq0`, `q̇0 → ρ^(β−β/α) q̇0`.
pub fn scale_initial_conditions(ic: &InitialConditions, rho: f64, alpha: f64, beta: f64) -> Result<InitialConditions> {
    let f = factors(rho, alpha, beta)?;
    let q0 = ic.q0 * f.length;
    let motion = match ic.motion {
        InitialMotion::Velocity(v) => InitialMotion::Velocity(v * f.velocity),
        InitialMotion::Momentum(p) => InitialMotion::Momentum(p * f.momentum),
    };
    Ok(InitialConditions { q0, motion })
}

/// The fiducial event used to compare corresponding points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Landmark {
    /// The first momentum or position component crossing zero.
    FirstTurningOrOrigin,
    /// `|q|` reaching the given fraction of its initial value.
    RadiusFraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub rho: f64,
    pub predicted_ratio: f64,
    pub measured_ratio: f64,
    pub rel_err: f64,
}

fn landmark_time(
    params: &FractionalParams,
    pot: &PowerLawPotential,
    ic: &InitialConditions,
    landmark: Landmark,
    horizon: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let sol = match landmark {
        Landmark::FirstTurningOrOrigin => {
            Integrator::new(params, pot, *cfg).stop_when(|events, _| !events.is_empty()).run(ic, (0.0, horizon))?
        }
        Landmark::RadiusFraction(frac) => {
            if !(frac > 0.0) || frac == 1.0 {
                return Err(Error::invalid(format!("radius fraction must be positive and differ from 1, got {frac}")));
            }
            let target = frac * ic.q0.norm();
            Integrator::new(params, pot, *cfg)
                .without_builtin_events()
                .with_event(CustomEvent::new("radius", Direction::Either, move |s| s.q.norm() - target))
                .stop_when(|events, _| !events.is_empty())
                .run(ic, (0.0, horizon))?
        }
    };
    sol.events.first().map(|e| e.time).ok_or_else(|| {
        Error::NoConvergence(format!("landmark {landmark:?} not reached before t = {horizon}"))
    })
}

/// Measure landmark times of similarity-scaled copies of `ic` and compare the
/// ratios with `ρ^(1−β+β/α)`.
///
/// `horizon` bounds the unscaled integration and is scaled along with time.
pub fn verify_scaling(
    params: &FractionalParams,
    pot: &PowerLawPotential,
    ic: &InitialConditions,
    rhos: &[f64],
    landmark: Landmark,
    horizon: f64,
    cfg: &IntegratorConfig,
) -> Result<Vec<ScalingRow>> {
    let (alpha, beta) = (params.alpha(), pot.degree());
    let e = exponents(alpha, beta)?;
    let base = landmark_time(params, pot, ic, landmark, horizon, cfg)?;
    rhos.par_iter()
        .map(|&rho| {
            let scaled = scale_initial_conditions(ic, rho, alpha, beta)?;
            let predicted_ratio = rho.powf(e.time_vs_length);
            let t = landmark_time(params, pot, &scaled, landmark, horizon * predicted_ratio, cfg)?;
            let measured_ratio = t / base;
            Ok(ScalingRow { rho, predicted_ratio, measured_ratio, rel_err: (measured_ratio - predicted_ratio).abs() / predicted_ratio })
        })
        .collect()
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `ln y`.
    pub residual: f64,
}

/// `None` with fewer than two distinct abscissae.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Option<LogLogFit> {
    if xs.len() != ys.len() || xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Some(LogLogFit { slope, intercept, residual: (ss / n).sqrt() })
}

/// How the orbital period was measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitLandmark {
    /// Time between successive perihelion passages.
    Perihelion,
    /// Time for the polar angle to advance by 2π; used for circular orbits.
    Azimuth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeplerRow {
    pub rho: f64,
    pub period: f64,
    pub measured_ratio: f64,
    pub predicted_ratio: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeplerReport {
    pub alpha: f64,
    pub landmark: OrbitLandmark,
    pub base_period: f64,
    pub predicted_slope: f64,
    pub rows: Vec<KeplerRow>,
    /// Absent when fewer than two distinct ratios were requested.
    pub fit: Option<LogLogFit>,
}

/// Bounded-orbit data derived from the initial conditions.
struct OrbitShape {
    perihelion: f64,
    aphelion: f64,
    /// Sign of `q × p`.
    spin: f64,
    time_scale: f64,
}

fn orbit_shape(params: &FractionalParams, pot: &PowerLawPotential, ic: &InitialConditions) -> Result<OrbitShape> {
    let state = ic.phase_state(0.0, params);
    let energy = hamiltonian(params, pot, &state)?;
    if !(energy < 0.0) {
        return Err(Error::Unsuitable(format!("orbit is unbounded: energy {energy} is not negative")));
    }
    let ang = state.q.cross_z(&state.p);
    if ang == 0.0 || !ang.is_finite() {
        return Err(Error::Unsuitable("zero angular momentum: the orbit collides with the centre".into()));
    }
    let (a, d, k) = (params.alpha(), params.d_alpha(), -pot.strength());
    let l = ang.abs();
    // Radial turning points solve f(r) = D (L/r)^α − k/r − E = 0. f is positive
    // near 0 and at infinity with a single minimum at r_min, where it is not
    // positive because the starting radius already has f ≤ 0.
    let f = |r: f64| d * (l / r).powf(a) - k / r - energy;
    let r_min = (a * d * l.powf(a) / k).powf(1.0 / (a - 1.0));
    let r0 = state.q.norm();
    let root = |mut inside: f64, mut outside: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if f(mid) <= 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    let (perihelion, aphelion) = if f(r_min) < 0.0 {
        let mut lo = r_min.min(r0);
        while f(lo) <= 0.0 {
            lo *= 0.5;
        }
        let mut hi = r_min.max(r0);
        while f(hi) <= 0.0 {
            hi *= 2.0;
        }
        (root(r_min, lo), root(r_min, hi))
    } else {
        (r_min, r_min)
    };
    let speed = params.alpha() * d * state.p.norm().powf(a - 1.0);
    Ok(OrbitShape { perihelion, aphelion, spin: ang.signum(), time_scale: aphelion / speed })
}

fn orbit_period(
    params: &FractionalParams,
    pot: &PowerLawPotential,
    ic: &InitialConditions,
    landmark: OrbitLandmark,
    spin: f64,
    horizon: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let integrator = Integrator::new(params, pot, *cfg).without_builtin_events();
    let (integrator, needed) = match landmark {
        OrbitLandmark::Perihelion => {
            (integrator.with_event(CustomEvent::new("perihelion", Direction::Rising, |s| s.q.dot(&s.p))), 2)
        }
        OrbitLandmark::Azimuth => {
            let axis = ic.q0.unit_or_zero();
            let dir = if spin > 0.0 { Direction::Rising } else { Direction::Falling };
            (integrator.with_event(CustomEvent::new("azimuth", dir, move |s| axis.cross_z(&s.q))), 1)
        }
    };
    let sol = integrator.stop_when(move |events: &[EventRecord], _| events.len() >= needed).run(ic, (0.0, horizon))?;
    let times: Vec<f64> = sol.events.iter().map(|e| e.time).collect();
    match (landmark, times.as_slice()) {
        (OrbitLandmark::Perihelion, [t0, t1, ..]) => Ok(t1 - t0),
        (OrbitLandmark::Azimuth, [t, ..]) => Ok(*t),
        _ => Err(Error::NoConvergence(format!("orbit landmarks not reached before t = {horizon}"))),
    }
}

/// Relative radial excursion below which an orbit counts as circular.
const CIRCULAR_ECCENTRICITY: f64 = 1e-6;

/// Measure orbital periods of similarity-scaled copies of a bound orbit in the
/// attractive `β = −1` potential and compare `T(ρ)/T(1)` with `ρ^(2−1/α)`.
pub fn fractional_kepler_check(
    params: &FractionalParams,
    pot: &PowerLawPotential,
    ic: &InitialConditions,
    rhos: &[f64],
    cfg: &IntegratorConfig,
) -> Result<KeplerReport> {
    if pot.degree() != -1.0 || !(pot.strength() < 0.0) {
        return Err(Error::invalid(format!(
            "Kepler check needs an attractive degree -1 potential, got strength {} degree {}",
            pot.strength(),
            pot.degree()
        )));
    }
    if ic.dim() != 2 {
        return Err(Error::invalid(format!("Kepler check runs in two dimensions, got {}", ic.dim())));
    }
    if ic.q0.norm() == 0.0 {
        return Err(Error::domain("initial position at the singular origin"));
    }
    if rhos.is_empty() {
        return Err(Error::invalid("empty list of length ratios"));
    }
    let alpha = params.alpha();
    let e = exponents(alpha, -1.0)?;
    let shape = orbit_shape(params, pot, ic)?;
    let landmark = if (shape.aphelion - shape.perihelion) / shape.aphelion < CIRCULAR_ECCENTRICITY {
        OrbitLandmark::Azimuth
    } else {
        OrbitLandmark::Perihelion
    };
    let horizon = 1e4 * shape.time_scale;
    let base_period = orbit_period(params, pot, ic, landmark, shape.spin, horizon, cfg)?;
    let rows = rhos
        .par_iter()
        .map(|&rho| {
            let scaled = scale_initial_conditions(ic, rho, alpha, -1.0)?;
            let predicted_ratio = rho.powf(e.time_vs_length);
            let period = orbit_period(params, pot, &scaled, landmark, shape.spin, horizon * predicted_ratio, cfg)?;
            let measured_ratio = period / base_period;
            Ok(KeplerRow {
                rho,
                period,
                measured_ratio,
                predicted_ratio,
                rel_err: (measured_ratio - predicted_ratio).abs() / predicted_ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.rho).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.measured_ratio).collect();
    Ok(KeplerReport {
        alpha,
        landmark,
        base_period,
        predicted_slope: e.time_vs_length,
        rows,
        fit: log_log_fit(&xs, &ys),
    })
}

/// Default bound orbit used by the Kepler check: unit distance, tangential
/// momentum 0.8 in the unit-strength attractive potential.
pub fn default_orbit() -> InitialConditions {
    InitialConditions {
        q0: Vector::new(&[1.0, 0.0]).expect("two components"),
        motion: InitialMotion::Momentum(Vector::new(&[0.0, 0.8]).expect("two components")),
    }
}

/// Event kind used when a custom landmark fires; exposed for callers that
/// inspect raw solutions.
pub fn landmark_event_kind(landmark: OrbitLandmark) -> EventKind {
    EventKind::Custom(match landmark {
        OrbitLandmark::Perihelion => "perihelion".into(),
        OrbitLandmark::Azimuth => "azimuth".into(),
    })
}
