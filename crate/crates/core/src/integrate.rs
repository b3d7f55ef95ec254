//! Adaptive Dormand-Prince 5(4) integration of Hamilton's equations with
//! dense output and sign-crossing event location.
//!
//! Only the Hamiltonian form of the dynamics is integrated. Its right-hand
//! side is continuous everywhere the potential is, but for `α < 2` it is not
//! Lipschitz at `p = 0` (`|p|^(α−1)` has unbounded slope), and for `β < 2`
//! the same holds at `q = 0`. The embedded error estimate badly underrates
//! the error of a step through such a point, so in one dimension those steps
//! are checked by step doubling instead.
//!
//! Absolute tolerances are scaled per component by a momentum scale
//! `(|E|/D_α)^(1/α)` and a length scale `(|E|/|s|)^(1/β)` derived from the
//! initial energy, so the same configuration is meaningful across the wide
//! dynamic ranges fractional exponents produce.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{hamilton_rhs, hamiltonian, turning_point, FractionalParams, InitialConditions, PhaseState, PowerLawPotential};
use crate::trajectory::{DenseSegment, Sample, Trajectory, STATE_LEN};
use crate::vector::{sgn, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// First trial step; chosen automatically when `None`.
    pub initial_step: Option<f64>,
    /// Width of the final bracket when locating events.
    pub event_tol: f64,
    /// Upper bound on the step size; the span length when `None`.
    pub max_step: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_steps: 5_000_000, initial_step: None, event_tol: 1e-12, max_step: None }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self { rel_tol, abs_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.rel_tol) || !positive(self.abs_tol) || !positive(self.event_tol) {
            return Err(Error::invalid("integrator tolerances must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps must be positive"));
        }
        if matches!(self.initial_step, Some(h) if !positive(h)) || matches!(self.max_step, Some(h) if !positive(h)) {
            return Err(Error::invalid("step sizes must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// A momentum component crosses zero.
    TurningPoint,
    /// A position component crosses zero.
    OriginCrossing,
    /// A user-supplied event function crosses zero.
    Custom(String),
}

/// Which sign changes of an event function count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Negative to positive.
    Rising,
    /// Positive to negative.
    Falling,
    Either,
}

impl Direction {
    fn accepts(self, from: f64, to: f64) -> bool {
        match self {
            Direction::Rising => from < 0.0 && to > 0.0,
            Direction::Falling => from > 0.0 && to < 0.0,
            Direction::Either => from != to,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub kind: EventKind,
    /// Phase-space component for built-in events; 0 for custom ones.
    pub component: usize,
    pub time: f64,
    pub state: PhaseState,
}

/// A scalar function of the state whose zero crossings are recorded.
pub struct CustomEvent<'a> {
    pub name: String,
    pub direction: Direction,
    pub func: Box<dyn Fn(&PhaseState) -> f64 + Send + Sync + 'a>,
}

impl<'a> CustomEvent<'a> {
    pub fn new(name: impl Into<String>, direction: Direction, func: impl Fn(&PhaseState) -> f64 + Send + Sync + 'a) -> Self {
        Self { name: name.into(), direction, func: Box::new(func) }
    }
}

/// Output of an integration run.
#[derive(Debug, Clone)]
pub struct Solution {
    pub trajectory: Trajectory,
    pub events: Vec<EventRecord>,
}

impl Solution {
    pub fn events_of<'s>(&'s self, kind: &'s EventKind) -> impl Iterator<Item = &'s EventRecord> + 's {
        self.events.iter().filter(move |e| &e.kind == kind)
    }

    pub fn max_energy_drift(&self) -> f64 {
        self.trajectory.max_energy_drift()
    }
}

type StopPredicate<'a> = Box<dyn Fn(&[EventRecord], &Trajectory) -> bool + 'a>;

/// Configurable integration run.
pub struct Integrator<'a> {
    params: FractionalParams,
    pot: PowerLawPotential,
    cfg: IntegratorConfig,
    builtin_events: bool,
    custom: Vec<CustomEvent<'a>>,
    stop: Option<StopPredicate<'a>>,
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 0.2;
const C3: f64 = 0.3;
const C4: f64 = 0.8;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

// Step-size controller (Hairer's settings).
const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const PI_BETA: f64 = 0.04;

/// Near `p = 0` steps are capped at this fraction of the span.
const TURNING_CAP_FRACTION: f64 = 1e-3;
const TURNING_CAP_P: f64 = 1e-6;

/// Local errors add up over many steps, so each step is held to this
/// fraction of the requested tolerances.
const TOL_FRACTION: f64 = 0.1;

/// Smallest per-step relative tolerance; tighter requests are clamped.
const MIN_REL_TOL: f64 = 100.0 * f64::EPSILON;

/// Floor on the local error order assumed at a non-smooth point; below it
/// Richardson extrapolation of a step-doubling difference is meaningless.
const MIN_KINK_ORDER: f64 = 1.05;

/// A step through a non-smooth point is accepted once it shrinks to this many
/// ulps of `t`: its local error is then `O(h·|f|)`, far below what further
/// halving could resolve in floating point.
const KINK_FLOOR_ULPS: f64 = 1e3;

fn kink_floor(t: f64) -> f64 {
    KINK_FLOOR_ULPS * f64::EPSILON * t.abs()
}

/// Steps through a non-smooth point are held to this fraction of the
/// per-step tolerance, since their error law is known only to leading order.
const KINK_TOL_FRACTION: f64 = 0.1;

type Y = [f64; STATE_LEN];

struct Rhs {
    params: FractionalParams,
    pot: PowerLawPotential,
    dim: usize,
}

impl Rhs {
    fn unpack(&self, t: f64, y: &Y) -> PhaseState {
        let d = self.dim;
        PhaseState {
            t,
            q: Vector::new(&y[..d]).expect("dimension checked"),
            p: Vector::new(&y[d..2 * d]).expect("dimension checked"),
        }
    }

    fn eval(&self, t: f64, y: &Y) -> Result<Y> {
        let s = self.unpack(t, y);
        let (qdot, pdot) = hamilton_rhs(&self.params, &self.pot, &s)?;
        let mut out = [0.0; STATE_LEN];
        out[..self.dim].copy_from_slice(qdot.as_slice());
        out[self.dim..2 * self.dim].copy_from_slice(pdot.as_slice());
        Ok(out)
    }
}

fn combo(y: &Y, h: f64, terms: &[(f64, &Y)], n: usize) -> Y {
    let mut out = *y;
    for i in 0..n {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Per-component error weights `atol_i + rtol·|y_i|`.
struct Tolerance {
    atol: Y,
    rtol: f64,
    n: usize,
}

impl Tolerance {
    /// RMS of `e_i / (atol_i + rtol·max(|y0_i|, |y1_i|))`.
    fn norm(&self, y0: &Y, y1: &Y, e: impl Fn(usize) -> f64) -> f64 {
        let sum: f64 = (0..self.n)
            .map(|i| {
                let sk = self.atol[i] + self.rtol * y0[i].abs().max(y1[i].abs());
                (e(i) / sk).powi(2)
            })
            .sum();
        (sum / self.n as f64).sqrt()
    }
}

struct StepOut {
    y: Y,
    /// Right-hand side at the end point (first stage of the next step).
    k_last: Y,
    err: f64,
    coeffs: [[f64; STATE_LEN]; 5],
}

fn dopri_step(rhs: &Rhs, t: f64, y: &Y, k1: &Y, t_new: f64, tol: &Tolerance) -> Result<StepOut> {
    let n = tol.n;
    let h = t_new - t;
    let y2 = combo(y, h, &[(A21, k1)], n);
    let k2 = rhs.eval(t + C2 * h, &y2)?;
    let y3 = combo(y, h, &[(A31, k1), (A32, &k2)], n);
    let k3 = rhs.eval(t + C3 * h, &y3)?;
    let y4 = combo(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)], n);
    let k4 = rhs.eval(t + C4 * h, &y4)?;
    let y5 = combo(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)], n);
    let k5 = rhs.eval(t + C5 * h, &y5)?;
    let y6 = combo(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], n);
    let k6 = rhs.eval(t + h, &y6)?;
    let y_new = combo(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], n);
    let k7 = rhs.eval(t_new, &y_new)?;

    let err = tol.norm(y, &y_new, |i| h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]));
    let mut coeffs = [[0.0; STATE_LEN]; 5];
    for i in 0..n {
        let diff = y_new[i] - y[i];
        let bspl = h * k1[i] - diff;
        coeffs[0][i] = y[i];
        coeffs[1][i] = diff;
        coeffs[2][i] = bspl;
        coeffs[3][i] = diff - h * k7[i] - bspl;
        coeffs[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    Ok(StepOut { y: y_new, k_last: k7, err, coeffs })
}

struct EventTracker {
    /// Sign of the most recent nonzero value of each event function.
    last_sign: Vec<f64>,
}

impl<'a> Integrator<'a> {
    pub fn new(params: &FractionalParams, pot: &PowerLawPotential, cfg: IntegratorConfig) -> Self {
        Self { params: *params, pot: *pot, cfg, builtin_events: true, custom: Vec::new(), stop: None }
    }

    /// Skip the built-in turning-point and origin-crossing events.
    pub fn without_builtin_events(mut self) -> Self {
        self.builtin_events = false;
        self
    }

    pub fn with_event(mut self, event: CustomEvent<'a>) -> Self {
        self.custom.push(event);
        self
    }

    /// Stop at the end of the first step after which `pred` holds.
    pub fn stop_when(mut self, pred: impl Fn(&[EventRecord], &Trajectory) -> bool + 'a) -> Self {
        self.stop = Some(Box::new(pred));
        self
    }

    /// Stop once `count` events of `kind` have been recorded.
    pub fn stop_after(self, kind: EventKind, count: usize) -> Self {
        self.stop_when(move |events, _| events.iter().filter(|e| e.kind == kind).count() >= count)
    }

    fn n_events(&self, dim: usize) -> usize {
        (if self.builtin_events { 2 * dim } else { 0 }) + self.custom.len()
    }

    /// Value of event function `j` on the packed state.
    fn event_value(&self, j: usize, dim: usize, y_state: &dyn Fn() -> PhaseState, y: &Y) -> f64 {
        if self.builtin_events && j < 2 * dim {
            // Momentum components first (turning points), then positions.
            if j < dim {
                y[dim + j]
            } else {
                y[j - dim]
            }
        } else {
            let k = j - if self.builtin_events { 2 * dim } else { 0 };
            (self.custom[k].func)(&y_state())
        }
    }

    fn event_meta(&self, j: usize, dim: usize) -> (EventKind, usize, Direction) {
        if self.builtin_events && j < 2 * dim {
            if j < dim {
                (EventKind::TurningPoint, j, Direction::Either)
            } else {
                (EventKind::OriginCrossing, j - dim, Direction::Either)
            }
        } else {
            let k = j - if self.builtin_events { 2 * dim } else { 0 };
            (EventKind::Custom(self.custom[k].name.clone()), 0, self.custom[k].direction)
        }
    }

    fn segment_event_value(&self, j: usize, seg: &DenseSegment, t: f64) -> f64 {
        let dim = seg.dim;
        if self.builtin_events && j < 2 * dim {
            let theta = (t - seg.t0) / seg.h;
            let i = if j < dim { dim + j } else { j - dim };
            seg.component(theta, i)
        } else {
            let k = j - if self.builtin_events { 2 * dim } else { 0 };
            (self.custom[k].func)(&seg.eval(t))
        }
    }

    /// Bisection on the dense output for the crossing inside `seg`.
    fn locate(&self, j: usize, seg: &DenseSegment, from_sign: f64) -> f64 {
        let (mut lo, mut hi) = (seg.t0, seg.t1());
        while hi - lo > self.cfg.event_tol.max(4.0 * f64::EPSILON * hi.abs()) {
            let mid = 0.5 * (lo + hi);
            let g = self.segment_event_value(j, seg, mid);
            if g == 0.0 {
                return mid;
            }
            if sgn(g) == from_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Integrate over `span = (t0, t1)` with `t1 > t0`.
    pub fn run(&self, ic: &InitialConditions, span: (f64, f64)) -> Result<Solution> {
        self.cfg.validate()?;
        let (t0, t_end) = span;
        if !(t0.is_finite() && t_end.is_finite() && t_end >= t0) {
            return Err(Error::invalid(format!("integration span must satisfy t0 <= t1, got [{t0}, {t_end}]")));
        }
        let dim = ic.dim();
        let n = 2 * dim;
        let rhs = Rhs { params: self.params, pot: self.pot, dim };
        let start = ic.phase_state(t0, &self.params);
        let e0 = hamiltonian(&self.params, &self.pot, &start)?;
        let mut traj = Trajectory::new(Sample { state: start, energy: e0 });
        let mut events: Vec<EventRecord> = Vec::new();
        if t_end == t0 {
            return Ok(Solution { trajectory: traj, events });
        }

        let (q_scale, p_scale) = self.scales(&start, e0);
        let mut atol = [0.0; STATE_LEN];
        atol[..dim].fill(TOL_FRACTION * self.cfg.abs_tol * q_scale);
        atol[dim..n].fill(TOL_FRACTION * self.cfg.abs_tol * p_scale);
        let tol = Tolerance { atol, rtol: (TOL_FRACTION * self.cfg.rel_tol).max(MIN_REL_TOL), n };
        let span_len = t_end - t0;
        let h_max = self.cfg.max_step.unwrap_or(span_len).min(span_len);
        let kink_order = self.kink_orders(dim);

        let mut y: Y = [0.0; STATE_LEN];
        y[..dim].copy_from_slice(start.q.as_slice());
        y[dim..n].copy_from_slice(start.p.as_slice());
        let mut t = t0;
        let mut k1 = rhs.eval(t, &y)?;

        let n_ev = self.n_events(dim);
        let mut tracker = EventTracker { last_sign: vec![0.0; n_ev] };
        for j in 0..n_ev {
            let s = start;
            tracker.last_sign[j] = sgn(self.event_value(j, dim, &|| s, &y));
        }

        let mut h = match self.cfg.initial_step {
            Some(h) => h.min(h_max),
            None => self.initial_step(&rhs, t, &y, &k1, &tol, h_max)?,
        };
        let mut fac_old: f64 = 1e-4;
        let mut last_rejected = false;
        let mut steps = 0usize;

        loop {
            if steps >= self.cfg.max_steps {
                return Err(Error::MaxStepsExceeded { max_steps: self.cfg.max_steps, t });
            }
            steps += 1;

            let p_norm = y[dim..n].iter().map(|x| x * x).sum::<f64>().sqrt();
            let mut h_cap = h_max;
            if p_norm < TURNING_CAP_P * p_scale {
                h_cap = h_cap.min((TURNING_CAP_FRACTION * span_len).max(kink_floor(t)));
            }
            h = h.min(h_cap);
            // Stretch the step rather than leave a sliver before `t_end`.
            let last = t + 1.01 * h >= t_end;
            if last {
                h = t_end - t;
            }
            if t + 0.1 * h == t {
                return Err(Error::StepSizeUnderflow { t, h, state: rhs.unpack(t, &y) });
            }
            let t_new = if last { t_end } else { t + h };

            let full = dopri_step(&rhs, t, &y, &k1, t_new, &tol)?;
            let order = kink_order(&y, &full.y);
            // Steps through a non-smooth point of the right-hand side are
            // re-done as two half steps and their error is estimated by
            // Richardson extrapolation on the `h^γ` local error law.
            let (pieces, err, err_order) = match order {
                Some(gamma) if full.err.is_finite() => {
                    let t_mid = t + 0.5 * (t_new - t);
                    let first = dopri_step(&rhs, t, &y, &k1, t_mid, &tol)?;
                    let second = dopri_step(&rhs, t_mid, &first.y, &first.k_last, t_new, &tol)?;
                    let ratio = 2f64.powf(1.0 - gamma);
                    let diff = tol.norm(&y, &second.y, |i| second.y[i] - full.y[i]);
                    let err = (diff * ratio / (1.0 - ratio)).max(first.err).max(second.err) / KINK_TOL_FRACTION;
                    (vec![(t, first), (t_mid, second)], err, gamma)
                }
                _ => {
                    let err = full.err;
                    (vec![(t, full)], err, 5.0)
                }
            };

            if !err.is_finite() {
                h *= FAC_MIN;
                last_rejected = true;
                traj.rejected_steps += 1;
                continue;
            }

            let at_floor = err_order < 5.0 && (t_new - t) <= kink_floor(t_new);
            if err <= 1.0 || at_floor {
                let mut h_new = if err_order < 5.0 {
                    // Past the non-smooth point: restart the controller from
                    // the embedded estimate of the second half step.
                    let (t_last, tail) = &pieces[pieces.len() - 1];
                    let hh = t_new - t_last;
                    fac_old = 1e-4;
                    hh / (tail.err.max(1e-10).powf(0.2) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN)
                } else {
                    let fac11 = err.powf(0.2 - PI_BETA * 0.75);
                    let fac = (fac11 / fac_old.powf(PI_BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                    fac_old = err.max(1e-4);
                    h / fac
                };
                if last_rejected {
                    h_new = h_new.min(h);
                }
                last_rejected = false;

                let count = pieces.len();
                for (idx, (ts, piece)) in pieces.into_iter().enumerate() {
                    let te = if idx + 1 == count { t_new } else { ts + 0.5 * (t_new - t) };
                    let seg = DenseSegment { t0: ts, h: te - ts, dim, coeffs: piece.coeffs };
                    let state_new = rhs.unpack(te, &piece.y);
                    let energy = hamiltonian(&self.params, &self.pot, &state_new)?;
                    self.record_events(&seg, &piece.y, &state_new, &mut tracker, &mut events);
                    traj.push(seg, Sample { state: state_new, energy });
                    y = piece.y;
                    k1 = piece.k_last;
                }
                traj.accepted_steps += 1;
                t = t_new;

                if last {
                    break;
                }
                if let Some(stop) = &self.stop {
                    if stop(&events, &traj) {
                        break;
                    }
                }
                h = h_new;
            } else {
                let exponent = if err_order < 5.0 { 1.0 / err_order } else { 0.2 - PI_BETA * 0.75 };
                h /= (err.powf(exponent) / SAFETY).min(1.0 / FAC_MIN);
                if err_order < 5.0 {
                    // Land on the floor rather than underflow below it.
                    h = h.max(0.5 * kink_floor(t));
                }
                last_rejected = true;
                traj.rejected_steps += 1;
            }
        }
        Ok(Solution { trajectory: traj, events })
    }

    /// Append the events whose functions change sign over `seg`.
    fn record_events(&self, seg: &DenseSegment, y_new: &Y, state_new: &PhaseState, tracker: &mut EventTracker, events: &mut Vec<EventRecord>) {
        let dim = seg.dim;
        let mut found = Vec::new();
        for j in 0..tracker.last_sign.len() {
            let g = self.event_value(j, dim, &|| *state_new, y_new);
            let s_new = sgn(g);
            let s_old = tracker.last_sign[j];
            if s_new != 0.0 {
                if s_old != 0.0 && s_old != s_new {
                    let (kind, component, direction) = self.event_meta(j, dim);
                    if direction.accepts(s_old, s_new) {
                        let te = self.locate(j, seg, s_old);
                        found.push(EventRecord { kind, component, time: te, state: seg.eval(te) });
                    }
                }
                tracker.last_sign[j] = s_new;
            }
        }
        found.sort_by(|a, b| a.time.total_cmp(&b.time));
        events.extend(found);
    }

    /// For one-dimensional motion, a detector returning the local error order
    /// `γ` of steps that touch or approach `p = 0` (order `α`) or `q = 0`
    /// (order `β`) where the right-hand side is not smooth.
    fn kink_orders(&self, dim: usize) -> impl Fn(&Y, &Y) -> Option<f64> {
        let alpha = self.params.alpha();
        let beta = self.pot.degree();
        let p_kink = dim == 1 && alpha < 2.0;
        let q_kink = dim == 1 && beta != 2.0 && self.pot.strength() != 0.0;
        // A step counts when the kink lies inside it or within one step
        // length of either end, where high derivatives already blow up.
        let crosses = |a: f64, b: f64| a.abs().min(b.abs()) <= (b - a).abs();
        move |y0: &Y, y1: &Y| {
            let mut order: Option<f64> = None;
            if p_kink && crosses(y0[1], y1[1]) {
                order = Some(alpha);
            }
            if q_kink && crosses(y0[0], y1[0]) {
                order = Some(order.map_or(beta, |o| o.min(beta)));
            }
            order.map(|o| o.max(MIN_KINK_ORDER))
        }
    }

    fn scales(&self, start: &PhaseState, e0: f64) -> (f64, f64) {
        let e = e0.abs();
        let mut p_scale = start.p.norm();
        let mut q_scale = start.q.norm();
        if e > 0.0 {
            p_scale = p_scale.max((e / self.params.d_alpha()).powf(1.0 / self.params.alpha()));
            let s = self.pot.strength().abs();
            if s > 0.0 {
                let len = (e / s).powf(1.0 / self.pot.degree());
                if len.is_finite() {
                    q_scale = q_scale.max(len);
                }
            }
        }
        let floor = |x: f64| if x > 0.0 && x.is_finite() { x } else { 1.0 };
        (floor(q_scale), floor(p_scale))
    }

    fn initial_step(&self, rhs: &Rhs, t: f64, y: &Y, f0: &Y, tol: &Tolerance, h_max: f64) -> Result<f64> {
        let n = tol.n;
        let sk = |i: usize| tol.atol[i] + tol.rtol * y[i].abs();
        let rms = |v: &dyn Fn(usize) -> f64| ((0..n).map(|i| v(i).powi(2)).sum::<f64>() / n as f64).sqrt();
        let dnf = rms(&|i| f0[i] / sk(i));
        let dny = rms(&|i| y[i] / sk(i));
        let mut h = if dnf <= 1e-5 || dny <= 1e-5 { 1e-6 } else { 0.01 * dny / dnf };
        h = h.min(h_max);
        let y1 = combo(y, h, &[(1.0, f0)], n);
        let f1 = rhs.eval(t + h, &y1)?;
        let der2 = rms(&|i| (f1[i] - f0[i]) / sk(i)) / h;
        let der12 = der2.abs().max(dnf);
        let h1 = if der12 <= 1e-15 { (h * 1e-3).max(1e-6) } else { (0.01 / der12).powf(0.2) };
        // Next to a non-smooth point the derivative estimate can push the
        // trial step below the resolution of `t`.
        let h_min = 16.0 * f64::EPSILON * t.abs();
        Ok((100.0 * h).min(h1).max(h_min).min(h_max))
    }
}

/// Integrate `ic` over `span` with built-in events and no early stop.
pub fn integrate(
    params: &FractionalParams,
    pot: &PowerLawPotential,
    ic: &InitialConditions,
    span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Solution> {
    if pot.degree() <= 1.0 && pot.strength() != 0.0 && ic.q0.norm() == 0.0 {
        return Err(Error::domain("initial position at the singular origin of a degree <= 1 potential"));
    }
    Integrator::new(params, pot, *cfg).run(ic, span)
}

/// Characteristic time `|q|/|q̇|` of an oscillator at energy `E`.
pub(crate) fn oscillator_time_scale(params: &FractionalParams, pot: &PowerLawPotential, energy: f64) -> Result<f64> {
    let q_turn = turning_point(pot, energy)?;
    let p_max = (energy / params.d_alpha()).powf(1.0 / params.alpha());
    let v_max = params.alpha() * params.d_alpha() * p_max.powf(params.alpha() - 1.0);
    Ok(q_turn / v_max)
}

/// Period measured by integration: launch from the turning point at rest and
/// return the time at which the trajectory has passed through the four
/// quarter-period landmarks (origin, opposite turning point, origin, and the
/// starting turning point again).
pub fn measure_period(params: &FractionalParams, pot: &PowerLawPotential, energy: f64, cfg: &IntegratorConfig) -> Result<f64> {
    pot.require_oscillator()?;
    if !(energy > 0.0) {
        return Err(Error::invalid(format!("oscillator energy must be positive, got {energy}")));
    }
    let q_turn = turning_point(pot, energy)?;
    let horizon = 100.0 * oscillator_time_scale(params, pot, energy)?;
    let ic = InitialConditions::with_momentum(Vector::scalar(q_turn), Vector::scalar(0.0))?;
    let sol = Integrator::new(params, pot, *cfg).stop_after(EventKind::TurningPoint, 2).run(&ic, (0.0, horizon))?;
    let landmarks: Vec<&EventRecord> = sol.events.iter().collect();
    if landmarks.len() < 4 {
        return Err(Error::NoConvergence(format!(
            "only {} quarter-period landmarks found within t = {horizon}",
            landmarks.len()
        )));
    }
    Ok(landmarks[3].time)
}
