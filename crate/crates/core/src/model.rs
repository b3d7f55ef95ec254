//! Domain types and pointwise evaluators of fractional mechanics.
//!
//! The Hamiltonian is `H = D_α |p|^α + V(q)` with `1 < α ≤ 2` and a power-law
//! potential `V(q) = s |q|^β`. In more than one dimension `|·|` is the
//! Euclidean norm and the sign functions of the 1D equations become unit
//! vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadTolerance};
use crate::trajectory::Trajectory;
use crate::vector::{abs_pow, Vector};

/// Kinetic-term parameters: exponent `α ∈ (1, 2]` and scale `D_α > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalParams {
    alpha: f64,
    d_alpha: f64,
}

impl FractionalParams {
    pub fn new(alpha: f64, d_alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::invalid(format!("alpha must lie in (1, 2], got {alpha}")));
        }
        if !(d_alpha > 0.0 && d_alpha.is_finite()) {
            return Err(Error::invalid(format!("D_alpha must be positive and finite, got {d_alpha}")));
        }
        Ok(Self { alpha, d_alpha })
    }

    /// The classical limit `α = 2`, `D₂ = 1/2m`.
    pub fn classical(mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::invalid(format!("mass must be positive and finite, got {mass}")));
        }
        Self::new(2.0, 0.5 / mass)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn d_alpha(&self) -> f64 {
        self.d_alpha
    }

    /// `m = 1/(2 D₂)` when `α = 2`.
    pub fn mass(&self) -> Option<f64> {
        (self.alpha == 2.0).then(|| 0.5 / self.d_alpha)
    }

    /// `(1/(α D_α))^(1/(α−1))`, the coefficient relating `|p|` to `|q̇|^(1/(α−1))`.
    fn inverse_velocity_coefficient(&self) -> f64 {
        (1.0 / (self.alpha * self.d_alpha)).powf(1.0 / (self.alpha - 1.0))
    }

    /// Kinetic energy `D_α |p|^α`.
    pub fn kinetic_energy(&self, p: &Vector) -> f64 {
        self.d_alpha * abs_pow(p.norm(), self.alpha)
    }
}

/// `V(q) = strength · |q|^degree`.
///
/// For the fractional oscillator `strength = g²` and `degree = β ∈ (1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawPotential {
    strength: f64,
    degree: f64,
}

impl PowerLawPotential {
    pub fn new(strength: f64, degree: f64) -> Result<Self> {
        if !strength.is_finite() {
            return Err(Error::invalid(format!("potential strength must be finite, got {strength}")));
        }
        if degree == 0.0 || !degree.is_finite() {
            return Err(Error::invalid(format!("potential degree must be finite and nonzero, got {degree}")));
        }
        Ok(Self { strength, degree })
    }

    /// The oscillator potential `g² |q|^β`, requiring `g² > 0` and `1 < β ≤ 2`.
    pub fn oscillator(g2: f64, beta: f64) -> Result<Self> {
        let pot = Self::new(g2, beta)?;
        pot.require_oscillator()?;
        Ok(pot)
    }

    /// `V ≡ 0`.
    pub fn free() -> Self {
        Self { strength: 0.0, degree: 2.0 }
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn is_oscillator(&self) -> bool {
        self.strength > 0.0 && self.degree > 1.0 && self.degree <= 2.0
    }

    pub fn require_oscillator(&self) -> Result<()> {
        if self.is_oscillator() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "oscillator potential needs strength > 0 and 1 < degree <= 2 (strength = {}, degree = {})",
                self.strength, self.degree
            )))
        }
    }

    pub fn value(&self, q: &Vector) -> Result<f64> {
        if self.strength == 0.0 {
            return Ok(0.0);
        }
        let r = q.norm();
        if r == 0.0 && self.degree < 0.0 {
            return Err(Error::domain(format!("potential of degree {} is singular at q = 0", self.degree)));
        }
        Ok(self.strength * abs_pow(r, self.degree))
    }

    /// `∂V/∂q = strength · degree · |q|^(degree−1) · q/|q|`.
    pub fn gradient(&self, q: &Vector) -> Result<Vector> {
        if self.strength == 0.0 {
            return Ok(Vector::zeros(q.dim()));
        }
        let r = q.norm();
        if r == 0.0 {
            if self.degree <= 1.0 {
                return Err(Error::domain(format!("force of degree-{} potential is singular at q = 0", self.degree)));
            }
            return Ok(Vector::zeros(q.dim()));
        }
        let magnitude = self.strength * self.degree * abs_pow(r, self.degree - 1.0);
        Ok(*q * (magnitude / r))
    }

    /// `dV/dq` for a 1D coordinate.
    pub fn derivative_1d(&self, q: f64) -> Result<f64> {
        Ok(self.gradient(&Vector::scalar(q))?[0])
    }
}

/// A point in phase space at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub q: Vector,
    pub p: Vector,
}

impl PhaseState {
    pub fn new(t: f64, q: Vector, p: Vector) -> Result<Self> {
        if q.dim() != p.dim() {
            return Err(Error::invalid(format!(
                "position has dimension {} but momentum has dimension {}",
                q.dim(),
                p.dim()
            )));
        }
        Ok(Self { t, q, p })
    }

    /// 1D convenience constructor.
    pub fn scalar(t: f64, q: f64, p: f64) -> Self {
        Self { t, q: Vector::scalar(q), p: Vector::scalar(p) }
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }
}

/// How the initial motion is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialMotion {
    Velocity(Vector),
    Momentum(Vector),
}

/// Initial position plus either the initial velocity or momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialConditions {
    pub q0: Vector,
    pub motion: InitialMotion,
}

impl InitialConditions {
    pub fn with_momentum(q0: Vector, p0: Vector) -> Result<Self> {
        PhaseState::new(0.0, q0, p0)?;
        Ok(Self { q0, motion: InitialMotion::Momentum(p0) })
    }

    pub fn with_velocity(q0: Vector, qdot0: Vector) -> Result<Self> {
        PhaseState::new(0.0, q0, qdot0)?;
        Ok(Self { q0, motion: InitialMotion::Velocity(qdot0) })
    }

    pub fn dim(&self) -> usize {
        self.q0.dim()
    }

    pub fn momentum(&self, params: &FractionalParams) -> Vector {
        match self.motion {
            InitialMotion::Momentum(p) => p,
            InitialMotion::Velocity(v) => momentum_from_velocity(params, &v),
        }
    }

    pub fn velocity(&self, params: &FractionalParams) -> Vector {
        match self.motion {
            InitialMotion::Momentum(p) => velocity_from_momentum(params, &p),
            InitialMotion::Velocity(v) => v,
        }
    }

    pub fn phase_state(&self, t0: f64, params: &FractionalParams) -> PhaseState {
        PhaseState { t: t0, q: self.q0, p: self.momentum(params) }
    }
}

/// `H = D_α |p|^α + V(q)`.
pub fn hamiltonian(params: &FractionalParams, pot: &PowerLawPotential, state: &PhaseState) -> Result<f64> {
    Ok(params.kinetic_energy(&state.p) + pot.value(&state.q)?)
}

/// `L = (1/(αD_α))^(1/(α−1)) · ((α−1)/α) · |q̇|^(α/(α−1)) − V(q)`.
pub fn lagrangian(params: &FractionalParams, pot: &PowerLawPotential, q: &Vector, qdot: &Vector) -> Result<f64> {
    let a = params.alpha;
    let kinetic = params.inverse_velocity_coefficient() * (a - 1.0) / a * abs_pow(qdot.norm(), a / (a - 1.0));
    Ok(kinetic - pot.value(q)?)
}

/// Inverse Legendre map: `|p| = (1/(αD_α))^(1/(α−1)) |q̇|^(1/(α−1))`, parallel to `q̇`.
pub fn momentum_from_velocity(params: &FractionalParams, qdot: &Vector) -> Vector {
    let speed = qdot.norm();
    if speed == 0.0 {
        return Vector::zeros(qdot.dim());
    }
    let magnitude = params.inverse_velocity_coefficient() * abs_pow(speed, 1.0 / (params.alpha - 1.0));
    *qdot * (magnitude / speed)
}

/// `q̇ = ∂H/∂p = α D_α |p|^(α−1) p/|p|`, and 0 at `p = 0`.
pub fn velocity_from_momentum(params: &FractionalParams, p: &Vector) -> Vector {
    let pn = p.norm();
    if pn == 0.0 {
        return Vector::zeros(p.dim());
    }
    let magnitude = params.alpha * params.d_alpha * abs_pow(pn, params.alpha - 1.0);
    *p * (magnitude / pn)
}

/// Right-hand side of Hamilton's equations: `(q̇, ṗ) = (∂H/∂p, −∂H/∂q)`.
pub fn hamilton_rhs(params: &FractionalParams, pot: &PowerLawPotential, state: &PhaseState) -> Result<(Vector, Vector)> {
    let qdot = velocity_from_momentum(params, &state.p);
    let pdot = -pot.gradient(&state.q)?;
    Ok((qdot, pdot))
}

/// Left-hand side of the 1D Lagrangian equation of motion,
/// `(1/(αD))^(1/(α−1)) (1/(α−1)) q̈ |q̇|^((2−α)/(α−1)) + V′(q)`.
///
/// Vanishes along physical trajectories. Undefined at `q̇ = 0` for `α < 2`.
pub fn euler_lagrange_residual(
    params: &FractionalParams,
    pot: &PowerLawPotential,
    q: f64,
    qdot: f64,
    qddot: f64,
) -> Result<f64> {
    let a = params.alpha;
    if qdot == 0.0 && a < 2.0 {
        return Err(Error::domain("Lagrangian equation is singular at zero velocity for alpha < 2"));
    }
    let inertia = params.inverse_velocity_coefficient() / (a - 1.0) * abs_pow(qdot, (2.0 - a) / (a - 1.0));
    Ok(inertia * qddot + pot.derivative_1d(q)?)
}

/// Value of an action integral with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionEstimate {
    pub value: f64,
    pub error_estimate: f64,
    /// False when some segment could not be integrated to the requested
    /// tolerance (the step data is too coarse for the integrand).
    pub tolerance_met: bool,
}

/// `S = ∫ L(q̇, q) dt` along an arbitrary path given as `t ↦ (q, q̇)`.
///
/// The interval is split at `breakpoints` (which should include any kinks of
/// the integrand, e.g. integrator step boundaries) and each piece integrated
/// adaptively to an absolute error share of `abs_tol`.
pub fn action_of_path<F>(
    params: &FractionalParams,
    pot: &PowerLawPotential,
    breakpoints: &[f64],
    path: F,
    abs_tol: f64,
) -> Result<ActionEstimate>
where
    F: Fn(f64) -> (Vector, Vector),
{
    let mut est = ActionEstimate { value: 0.0, error_estimate: 0.0, tolerance_met: true };
    if breakpoints.len() < 2 {
        return Ok(est);
    }
    let span = (breakpoints[breakpoints.len() - 1] - breakpoints[0]).abs();
    if span == 0.0 {
        return Ok(est);
    }
    // Domain errors of V are surfaced after the fact rather than from inside the integrand.
    let failure = std::cell::Cell::new(None);
    let integrand = |t: f64| {
        let (q, qdot) = path(t);
        match lagrangian(params, pot, &q, &qdot) {
            Ok(l) => l,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    for w in breakpoints.windows(2) {
        let share = abs_tol * (w[1] - w[0]).abs() / span;
        let tol = QuadTolerance { abs: share, rel: 0.0, max_intervals: 200 };
        let q = quadrature::integrate_best_effort(&integrand, w[0], w[1], tol);
        est.value += q.value;
        est.error_estimate += q.error;
        if q.error > share {
            est.tolerance_met = false;
        }
    }
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(est)
}

/// Action of an integrated trajectory, evaluated on its dense output with the
/// velocity recovered from the momentum.
pub fn action(params: &FractionalParams, pot: &PowerLawPotential, traj: &Trajectory) -> Result<ActionEstimate> {
    let duration = traj.t_end() - traj.t_start();
    let scale = traj.samples()[0].energy.abs().max(f64::MIN_POSITIVE);
    action_with_tolerance(params, pot, traj, 1e-13 * scale * duration)
}

pub fn action_with_tolerance(
    params: &FractionalParams,
    pot: &PowerLawPotential,
    traj: &Trajectory,
    abs_tol: f64,
) -> Result<ActionEstimate> {
    let breakpoints: Vec<f64> = traj.samples().iter().map(|s| s.state.t).collect();
    action_of_path(
        params,
        pot,
        &breakpoints,
        |t| {
            let s = traj.state_at(t).expect("breakpoints lie inside the trajectory");
            (s.q, velocity_from_momentum(params, &s.p))
        },
        abs_tol,
    )
}

/// Step rule for central differences: `h = max(min, rel·|x|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffStep {
    pub rel: f64,
    pub min: f64,
}

impl Default for DiffStep {
    fn default() -> Self {
        Self { rel: 1e-6, min: 1e-6 }
    }
}

impl DiffStep {
    fn at(&self, x: f64) -> f64 {
        self.min.max(self.rel * x.abs())
    }
}

fn central_difference(f: &dyn Fn(&PhaseState) -> f64, state: &PhaseState, step: DiffStep, var: Var) -> f64 {
    let x = var.get(state);
    let h = step.at(x);
    let mut plus = *state;
    let mut minus = *state;
    var.set(&mut plus, x + h);
    var.set(&mut minus, x - h);
    (f(&plus) - f(&minus)) / (2.0 * h)
}

#[derive(Clone, Copy)]
enum Var {
    Q(usize),
    P(usize),
    T,
}

impl Var {
    fn get(self, s: &PhaseState) -> f64 {
        match self {
            Var::Q(i) => s.q[i],
            Var::P(i) => s.p[i],
            Var::T => s.t,
        }
    }

    fn set(self, s: &mut PhaseState, v: f64) {
        match self {
            Var::Q(i) => s.q[i] = v,
            Var::P(i) => s.p[i] = v,
            Var::T => s.t = v,
        }
    }
}

/// `{u, v} = Σᵢ ∂u/∂pᵢ ∂v/∂qᵢ − ∂u/∂qᵢ ∂v/∂pᵢ`, by central differences.
///
/// With this ordering `{H, q} = q̇` and `{H, p} = ṗ`.
pub fn poisson_bracket(
    u: &dyn Fn(&PhaseState) -> f64,
    v: &dyn Fn(&PhaseState) -> f64,
    state: &PhaseState,
    step: DiffStep,
) -> f64 {
    (0..state.dim())
        .map(|i| {
            let (q, p) = (Var::Q(i), Var::P(i));
            central_difference(u, state, step, p) * central_difference(v, state, step, q)
                - central_difference(u, state, step, q) * central_difference(v, state, step, p)
        })
        .sum()
}

/// `df/dt = ∂f/∂t + {H, f}` along the flow of `H`.
pub fn total_time_derivative(
    f: &dyn Fn(&PhaseState) -> f64,
    params: &FractionalParams,
    pot: &PowerLawPotential,
    state: &PhaseState,
    step: DiffStep,
) -> Result<f64> {
    // Probe once so that a singular state reports a domain error instead of NaN.
    hamiltonian(params, pot, state)?;
    let h = |s: &PhaseState| hamiltonian(params, pot, s).unwrap_or(f64::NAN);
    let explicit = central_difference(f, state, step, Var::T);
    Ok(explicit + poisson_bracket(&h, f, state, step))
}

/// Turning-point distance `(E/g²)^(1/β)` where the potential equals the energy.
pub fn turning_point(pot: &PowerLawPotential, energy: f64) -> Result<f64> {
    if !(energy > 0.0) || !(pot.strength > 0.0) || !(pot.degree > 0.0) {
        return Err(Error::domain(format!(
            "turning point needs energy > 0, strength > 0, degree > 0 (E = {energy}, strength = {}, degree = {})",
            pot.strength, pot.degree
        )));
    }
    Ok((energy / pot.strength).powf(1.0 / pot.degree))
}

/// Free-particle solution of the Hamilton-Jacobi equation:
/// `q = α D_α (E/D_α)^(1−1/α) (t+δ)`, `p = (E/D_α)^(1/α)`.
pub fn free_particle_trajectory(params: &FractionalParams, energy: f64, delta: f64, t: f64) -> Result<(f64, f64)> {
    if !(energy > 0.0) {
        return Err(Error::domain(format!("free-particle solution needs E > 0, got {energy}")));
    }
    let (a, d) = (params.alpha, params.d_alpha);
    let ratio = energy / d;
    let q = a * d * ratio.powf(1.0 - 1.0 / a) * (t + delta);
    let p = ratio.powf(1.0 / a);
    Ok((q, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(x: &[f64]) -> Vector {
        Vector::new(x).unwrap()
    }

    fn classical() -> FractionalParams {
        FractionalParams::classical(1.0).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(FractionalParams::new(1.0, 1.0).is_err());
        assert!(FractionalParams::new(2.5, 1.0).is_err());
        assert!(FractionalParams::new(1.5, 0.0).is_err());
        assert!(FractionalParams::new(f64::NAN, 1.0).is_err());
        assert_eq!(classical().d_alpha(), 0.5);
        assert_eq!(classical().mass(), Some(1.0));
        assert!(PowerLawPotential::new(1.0, 0.0).is_err());
        assert!(PowerLawPotential::oscillator(1.0, 1.0).is_err());
        assert!(PowerLawPotential::oscillator(-1.0, 2.0).is_err());
        assert!(PowerLawPotential::oscillator(1.0, 2.0).is_ok());
        assert!(PhaseState::new(0.0, v(&[1.0]), v(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let pot = PowerLawPotential::oscillator(1.0, 2.0).unwrap();
        let h = hamiltonian(&classical(), &pot, &PhaseState::scalar(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(h, 0.5);
        let h = hamiltonian(&classical(), &pot, &PhaseState::scalar(0.0, 1.0, 1.0)).unwrap();
        assert_eq!(h, 1.5);
        let params = FractionalParams::new(1.5, 1.0).unwrap();
        let h = hamiltonian(&params, &pot, &PhaseState::scalar(0.0, 0.0, 2.0)).unwrap();
        assert_relative_eq!(h, 2.828_427_124_746_19, max_relative = 1e-15);
    }

    #[test]
    fn hamiltonian_singular_potential_at_origin() {
        let kepler = PowerLawPotential::new(-1.0, -1.0).unwrap();
        let s = PhaseState::new(0.0, v(&[0.0, 0.0]), v(&[1.0, 0.0])).unwrap();
        assert!(matches!(hamiltonian(&classical(), &kepler, &s), Err(Error::Domain(_))));
    }

    #[test]
    fn lagrangian_examples() {
        let free = PowerLawPotential::free();
        let l = lagrangian(&classical(), &free, &v(&[0.3]), &v(&[1.0])).unwrap();
        assert_relative_eq!(l, 0.5, max_relative = 1e-15);
        let params = FractionalParams::new(1.5, 1.0).unwrap();
        assert_eq!(lagrangian(&params, &free, &v(&[2.0]), &v(&[0.0])).unwrap(), 0.0);
        let l = lagrangian(&params, &free, &v(&[0.0]), &v(&[1.5])).unwrap();
        assert_relative_eq!(l, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn legendre_map_examples() {
        let p = momentum_from_velocity(&classical(), &v(&[3.0]));
        assert_relative_eq!(p[0], 3.0, max_relative = 1e-15);
        assert_eq!(momentum_from_velocity(&classical(), &v(&[0.0]))[0], 0.0);
        let params = FractionalParams::new(1.5, 1.0).unwrap();
        let p = momentum_from_velocity(&params, &v(&[1.5, 0.0]));
        assert_relative_eq!(p[0], 1.0, max_relative = 1e-15);
        assert_eq!(p[1], 0.0);

        let q = velocity_from_momentum(&classical(), &v(&[3.0]));
        assert_relative_eq!(q[0], 3.0, max_relative = 1e-15);
        assert_eq!(velocity_from_momentum(&params, &v(&[0.0, 0.0, 0.0])).as_slice(), &[0.0; 3]);
        let q = velocity_from_momentum(&params, &v(&[4.0]));
        assert_relative_eq!(q[0], 3.0, max_relative = 1e-15);
    }

    #[test]
    fn rhs_examples() {
        let pot = PowerLawPotential::oscillator(1.0, 2.0).unwrap();
        let (qd, pd) = hamilton_rhs(&classical(), &pot, &PhaseState::scalar(0.0, 1.0, 0.0)).unwrap();
        assert_eq!((qd[0], pd[0]), (0.0, -2.0));
        let (qd, pd) = hamilton_rhs(&classical(), &pot, &PhaseState::scalar(0.0, 0.0, 1.0)).unwrap();
        assert_eq!((qd[0], pd[0]), (1.0, 0.0));
        let params = FractionalParams::new(1.5, 1.0).unwrap();
        let pot = PowerLawPotential::oscillator(1.0, 1.5).unwrap();
        let (qd, pd) = hamilton_rhs(&params, &pot, &PhaseState::scalar(0.0, 1.0, 1.0)).unwrap();
        assert_relative_eq!(qd[0], 1.5, max_relative = 1e-15);
        assert_relative_eq!(pd[0], -1.5, max_relative = 1e-15);
    }

    #[test]
    fn rhs_singular_at_origin_for_low_degree() {
        let linear = PowerLawPotential::new(1.0, 1.0).unwrap();
        assert!(hamilton_rhs(&classical(), &linear, &PhaseState::scalar(0.0, 0.0, 1.0)).is_err());
        let quad = PowerLawPotential::new(1.0, 1.5).unwrap();
        let (_, pd) = hamilton_rhs(&classical(), &quad, &PhaseState::scalar(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(pd[0], 0.0);
    }

    #[test]
    fn euler_lagrange_free_particle_and_singularity() {
        let params = FractionalParams::new(1.5, 1.0).unwrap();
        let free = PowerLawPotential::free();
        assert_eq!(euler_lagrange_residual(&params, &free, 0.4, 2.0, 0.0).unwrap(), 0.0);
        assert!(euler_lagrange_residual(&params, &free, 0.4, 0.0, 1.0).is_err());
        // α = 2: m q̈ + V′(q) with m = 1, V = q², q̈ = −2q.
        let pot = PowerLawPotential::oscillator(1.0, 2.0).unwrap();
        let r = euler_lagrange_residual(&classical(), &pot, 0.7, 0.0, -1.4).unwrap();
        assert!(r.abs() < 1e-15);
    }

    #[test]
    fn bracket_examples() {
        let s = PhaseState::scalar(0.0, 0.3, -0.8);
        let q = |s: &PhaseState| s.q[0];
        let p = |s: &PhaseState| s.p[0];
        assert_relative_eq!(poisson_bracket(&p, &q, &s, DiffStep::default()), 1.0, max_relative = 1e-9);
        let f = |s: &PhaseState| s.q[0].sin() * s.p[0].powi(3);
        assert_eq!(poisson_bracket(&f, &f, &s, DiffStep::default()), 0.0);

        let params = FractionalParams::new(1.5, 1.0).unwrap();
        let pot = PowerLawPotential::oscillator(1.0, 2.0).unwrap();
        let h = |s: &PhaseState| hamiltonian(&params, &pot, s).unwrap();
        let s = PhaseState::scalar(0.0, 0.0, 2.0);
        let b = poisson_bracket(&h, &q, &s, DiffStep::default());
        assert_relative_eq!(b, 1.5 * 2f64.sqrt(), max_relative = 1e-9);
        assert_relative_eq!(b, velocity_from_momentum(&params, &s.p)[0], max_relative = 1e-9);
    }

    #[test]
    fn time_derivative_examples() {
        let params = FractionalParams::new(1.5, 1.0).unwrap();
        let pot = PowerLawPotential::oscillator(1.0, 1.5).unwrap();
        let s = PhaseState::scalar(0.0, 0.6, 0.9);
        let h = |x: &PhaseState| hamiltonian(&params, &pot, x).unwrap();
        let dh = total_time_derivative(&h, &params, &pot, &s, DiffStep::default()).unwrap();
        assert!(dh.abs() < 1e-9);
        let q = |x: &PhaseState| x.q[0];
        let dq = total_time_derivative(&q, &params, &pot, &s, DiffStep::default()).unwrap();
        assert_relative_eq!(dq, velocity_from_momentum(&params, &s.p)[0], max_relative = 1e-9);
        // Explicit time dependence.
        let g = |x: &PhaseState| x.t * 3.0;
        let dg = total_time_derivative(&g, &params, &pot, &s, DiffStep::default()).unwrap();
        assert_relative_eq!(dg, 3.0, max_relative = 1e-9);
    }

    #[test]
    fn turning_point_examples() {
        let pot = PowerLawPotential::oscillator(1.0, 2.0).unwrap();
        assert_eq!(turning_point(&pot, 1.0).unwrap(), 1.0);
        assert_eq!(turning_point(&pot, 4.0).unwrap(), 2.0);
        let pot = PowerLawPotential::oscillator(0.5, 1.5).unwrap();
        let qt = turning_point(&pot, 2.0).unwrap();
        assert_relative_eq!(qt, 2.519_842_099_789_746, max_relative = 1e-14);
        let params = FractionalParams::new(1.5, 1.0).unwrap();
        let e = hamiltonian(&params, &pot, &PhaseState::scalar(0.0, qt, 0.0)).unwrap();
        assert_relative_eq!(e, 2.0, max_relative = 1e-14);
        assert!(turning_point(&pot, 0.0).is_err());
        assert!(turning_point(&PowerLawPotential::new(-1.0, -1.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn free_particle_examples() {
        let (q, p) = free_particle_trajectory(&classical(), 0.5, 0.0, 2.5).unwrap();
        assert_relative_eq!(q, 2.5, max_relative = 1e-15);
        assert_relative_eq!(p, 1.0, max_relative = 1e-15);
        let params = FractionalParams::new(1.3, 2.0).unwrap();
        let (q, _) = free_particle_trajectory(&params, 3.0, 0.7, -0.7).unwrap();
        assert_eq!(q, 0.0);
        // E = 8, α = 1.5, D = 1: q = 1.5·8^(1/3) = 3, p = 8^(2/3) = 4.
        let params = FractionalParams::new(1.5, 1.0).unwrap();
        let (q, p) = free_particle_trajectory(&params, 8.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(q, 3.0, max_relative = 1e-14);
        assert_relative_eq!(p, 4.0, max_relative = 1e-14);
        let e = hamiltonian(&params, &PowerLawPotential::free(), &PhaseState::scalar(0.0, q, p)).unwrap();
        assert_relative_eq!(e, 8.0, max_relative = 1e-14);
        assert!(free_particle_trajectory(&params, 0.0, 0.0, 1.0).is_err());
    }
}
