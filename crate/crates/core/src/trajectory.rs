//! Integrated trajectories with continuous (dense) output.

use crate::model::PhaseState;
use crate::vector::{Vector, MAX_DIM};

/// Length of the packed ODE state `(q, p)`.
pub(crate) const STATE_LEN: usize = 2 * MAX_DIM;

/// One accepted sample: the state and the Hamiltonian evaluated there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub state: PhaseState,
    pub energy: f64,
}

/// Interpolation data for one accepted step `[t0, t0 + h]`.
///
/// The state is packed as `(q₁..q_d, p₁..p_d)`. With `θ = (t − t0)/h`
/// the interpolant is `c₀ + θ(c₁ + (1−θ)(c₂ + θ(c₃ + (1−θ)c₄)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    pub(crate) dim: usize,
    pub(crate) coeffs: [[f64; STATE_LEN]; 5],
}

impl DenseSegment {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub(crate) fn component(&self, theta: f64, i: usize) -> f64 {
        let c = &self.coeffs;
        let t1 = 1.0 - theta;
        c[0][i] + theta * (c[1][i] + t1 * (c[2][i] + theta * (c[3][i] + t1 * c[4][i])))
    }

    /// Derivative of the interpolant with respect to `θ`.
    fn component_slope(&self, theta: f64, i: usize) -> f64 {
        let c = &self.coeffs;
        let t1 = 1.0 - theta;
        let a = c[3][i] + t1 * c[4][i];
        let b = c[2][i] + theta * a;
        let db = a - theta * c[4][i];
        let cc = c[1][i] + t1 * b;
        let dc = t1 * db - b;
        cc + theta * dc
    }

    /// Time derivatives `(q̇, ṗ)` of the interpolant at `t`.
    pub fn eval_derivative(&self, t: f64) -> (Vector, Vector) {
        let mut qdot = Vector::zeros(self.dim);
        let mut pdot = Vector::zeros(self.dim);
        if self.h == 0.0 {
            return (qdot, pdot);
        }
        let theta = (t - self.t0) / self.h;
        for i in 0..self.dim {
            qdot[i] = self.component_slope(theta, i) / self.h;
            pdot[i] = self.component_slope(theta, self.dim + i) / self.h;
        }
        (qdot, pdot)
    }

    pub fn eval(&self, t: f64) -> PhaseState {
        let theta = if self.h == 0.0 { 0.0 } else { (t - self.t0) / self.h };
        let mut q = Vector::zeros(self.dim);
        let mut p = Vector::zeros(self.dim);
        for i in 0..self.dim {
            q[i] = self.component(theta, i);
            p[i] = self.component(theta, self.dim + i);
        }
        PhaseState { t, q, p }
    }

    /// The same segment under `t → time_factor·t`, `q → length_factor·q`,
    /// `p → momentum_factor·p`.
    pub(crate) fn scaled(&self, time_factor: f64, length_factor: f64, momentum_factor: f64) -> Self {
        let mut out = *self;
        out.t0 *= time_factor;
        out.h *= time_factor;
        for row in &mut out.coeffs {
            for (i, c) in row.iter_mut().enumerate().take(2 * self.dim) {
                *c *= if i < self.dim { length_factor } else { momentum_factor };
            }
        }
        out
    }
}

/// Ordered samples of an integration together with its dense output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<Sample>,
    segments: Vec<DenseSegment>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub(crate) fn new(first: Sample) -> Self {
        Self { samples: vec![first], segments: Vec::new(), accepted_steps: 0, rejected_steps: 0 }
    }

    pub(crate) fn push(&mut self, segment: DenseSegment, sample: Sample) {
        debug_assert!(sample.state.t > self.t_end());
        self.segments.push(segment);
        self.samples.push(sample);
    }

    pub(crate) fn from_parts(samples: Vec<Sample>, segments: Vec<DenseSegment>, accepted: usize, rejected: usize) -> Self {
        Self { samples, segments, accepted_steps: accepted, rejected_steps: rejected }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn segments(&self) -> &[DenseSegment] {
        &self.segments
    }

    pub fn dim(&self) -> usize {
        self.samples[0].state.dim()
    }

    pub fn t_start(&self) -> f64 {
        self.samples[0].state.t
    }

    pub fn t_end(&self) -> f64 {
        self.samples[self.samples.len() - 1].state.t
    }

    pub fn initial(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }

    /// Dense-output state at `t`, or `None` outside `[t_start, t_end]`.
    pub fn state_at(&self, t: f64) -> Option<PhaseState> {
        if t < self.t_start() || t > self.t_end() {
            return None;
        }
        if self.segments.is_empty() || t == self.t_start() {
            let mut s = self.samples[0].state;
            s.t = t;
            return Some(s);
        }
        let idx = self.segments.partition_point(|s| s.t1() < t).min(self.segments.len() - 1);
        let seg = &self.segments[idx];
        // The last sample is reproduced exactly rather than through the polynomial.
        if t == seg.t1() {
            return Some(self.samples[idx + 1].state);
        }
        Some(seg.eval(t))
    }

    /// `|H(t) − H(t₀)| / |H(t₀)|` at sample `i`.
    pub fn energy_drift(&self, i: usize) -> f64 {
        let e0 = self.samples[0].energy;
        let d = (self.samples[i].energy - e0).abs();
        if e0 == 0.0 {
            d
        } else {
            d / e0.abs()
        }
    }

    pub fn max_energy_drift(&self) -> f64 {
        (0..self.samples.len()).map(|i| self.energy_drift(i)).fold(0.0, f64::max)
    }

    /// Minimum and maximum of `|q|` over the samples.
    pub fn radius_range(&self) -> (f64, f64) {
        self.samples.iter().map(|s| s.state.q.norm()).fold((f64::INFINITY, 0.0), |(lo, hi), r| (lo.min(r), hi.max(r)))
    }
}
