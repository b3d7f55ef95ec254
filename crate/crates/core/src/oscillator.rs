//! The fractional 1D oscillator `H = D_α |p|^α + g² |q|^β`, `1 < α, β ≤ 2`.
//!
//! With `E` the energy and `K = E^(1/α+1/β−1) / (αβ D_α^(1/α) (g²)^(1/β))`,
//!
//! * the period is `T = 4 K B(1/β, 1/α)`;
//! * the time of flight from the origin to `q ∈ [0, q_turn]` is
//!   `t + δ = K B_x(1/β, 1/α)` with `x = g² q^β / E`.
//!
//! The phase convention is `q = 0`, moving in the positive direction, at
//! `t = −δ`. The full oscillation is built from the quarter-period segment by
//! reflection: even about the turning points and odd about the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::{measure_period, IntegratorConfig};
use crate::model::{turning_point, FractionalParams, PowerLawPotential};
use crate::quadrature::{self, QuadTolerance};
use crate::specfun;

/// A fractional oscillator at a fixed energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSpec {
    pub params: FractionalParams,
    pub pot: PowerLawPotential,
    pub energy: f64,
}

/// The period computed three ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    /// Closed form through the complete Beta function.
    pub closed_form: f64,
    /// Direct quadrature of the Beta integral.
    pub quadrature: f64,
    /// Measured from an integrated trajectory.
    pub ode_measured: Option<f64>,
    /// Largest `|Tᵢ − Tⱼ| / T_closed` over the available values.
    pub max_pairwise_rel_diff: f64,
}

impl PeriodReport {
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.max_pairwise_rel_diff <= tol
    }
}

impl OscillatorSpec {
    pub fn new(params: FractionalParams, pot: PowerLawPotential, energy: f64) -> Result<Self> {
        pot.require_oscillator()?;
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::invalid(format!("oscillator energy must be positive, got {energy}")));
        }
        Ok(Self { params, pot, energy })
    }

    /// Shorthand for `(α, D_α, g², β, E)`.
    pub fn from_values(alpha: f64, d_alpha: f64, g2: f64, beta: f64, energy: f64) -> Result<Self> {
        Self::new(FractionalParams::new(alpha, d_alpha)?, PowerLawPotential::oscillator(g2, beta)?, energy)
    }

    pub fn with_energy(&self, energy: f64) -> Result<Self> {
        Self::new(self.params, self.pot, energy)
    }

    fn alpha(&self) -> f64 {
        self.params.alpha()
    }

    fn beta(&self) -> f64 {
        self.pot.degree()
    }

    /// Exponent of the energy dependence of the period, `1/α + 1/β − 1`.
    pub fn energy_exponent(&self) -> f64 {
        1.0 / self.alpha() + 1.0 / self.beta() - 1.0
    }

    /// Common prefactor `K` of the period and time-of-flight formulas.
    pub fn time_prefactor(&self) -> f64 {
        let (a, b) = (self.alpha(), self.beta());
        self.energy.powf(self.energy_exponent())
            / (a * b * self.params.d_alpha().powf(1.0 / a) * self.pot.strength().powf(1.0 / b))
    }

    /// Beta-function parameters `(1/β, 1/α)`.
    fn beta_params(&self) -> (f64, f64) {
        (1.0 / self.beta(), 1.0 / self.alpha())
    }

    pub fn turning_point(&self) -> f64 {
        turning_point(&self.pot, self.energy).expect("validated oscillator")
    }

    /// `T = 4 K B(1/β, 1/α)`.
    pub fn period(&self) -> f64 {
        let (a, b) = self.beta_params();
        4.0 * self.time_prefactor() * specfun::beta(a, b).expect("positive Beta parameters")
    }

    /// The period with the Beta integral evaluated by adaptive quadrature.
    pub fn period_quadrature(&self) -> Result<f64> {
        let (a, b) = self.beta_params();
        let integral = quadrature::beta_integral(a, b, 1.0, QuadTolerance::new(0.0, 1e-14))?;
        Ok(4.0 * self.time_prefactor() * integral)
    }

    /// Period measured by integrating Hamilton's equations.
    pub fn measure_period(&self, cfg: &IntegratorConfig) -> Result<f64> {
        measure_period(&self.params, &self.pot, self.energy, cfg)
    }

    /// All three period routes. The ODE route runs only when `cfg` is given.
    pub fn period_report(&self, cfg: Option<&IntegratorConfig>) -> Result<PeriodReport> {
        let closed_form = self.period();
        let quadrature = self.period_quadrature()?;
        let ode_measured = cfg.map(|c| self.measure_period(c)).transpose()?;
        let mut values = vec![closed_form, quadrature];
        values.extend(ode_measured);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(PeriodReport { closed_form, quadrature, ode_measured, max_pairwise_rel_diff: (hi - lo) / closed_form })
    }

    /// Time of flight `t + δ` from the origin to `q ∈ [0, q_turn]`.
    pub fn hj_time_of_flight(&self, q: f64) -> Result<f64> {
        let q_turn = self.turning_point();
        if !(q >= 0.0 && q <= q_turn * (1.0 + 1e-12)) {
            return Err(Error::domain(format!("time of flight needs 0 <= q <= q_turn = {q_turn}, got {q}")));
        }
        let x = (q / q_turn).min(1.0).powf(self.beta());
        let (a, b) = self.beta_params();
        Ok(self.time_prefactor() * specfun::inc_beta(a, b, x)?)
    }

    /// Time of flight via the hypergeometric form,
    /// `t + δ = E^(1/α−1) / (α D_α^(1/α)) · q · F(1/β, 1−1/α; 1/β+1; g² q^β / E)`.
    pub fn hj_time_of_flight_hypergeometric(&self, q: f64) -> Result<f64> {
        let q_turn = self.turning_point();
        if !(q >= 0.0 && q <= q_turn * (1.0 + 1e-12)) {
            return Err(Error::domain(format!("time of flight needs 0 <= q <= q_turn = {q_turn}, got {q}")));
        }
        let (a, d) = (self.alpha(), self.params.d_alpha());
        let x = (q / q_turn).min(1.0).powf(self.beta());
        let mu = 1.0 / self.beta();
        let f = specfun::hyp2f1(mu, 1.0 - 1.0 / a, mu + 1.0, x)?;
        Ok(self.energy.powf(1.0 / a - 1.0) / (a * d.powf(1.0 / a)) * q * f)
    }

    /// Inverse of [`hj_time_of_flight`](Self::hj_time_of_flight) on `[0, T/4]`.
    pub fn hj_position(&self, t: f64) -> Result<f64> {
        let (a, b) = self.beta_params();
        let k = self.time_prefactor();
        let full = specfun::beta(a, b)?;
        let quarter = k * full;
        if !(t >= 0.0 && t <= quarter * (1.0 + 1e-12)) {
            return Err(Error::domain(format!("hj_position needs 0 <= t <= T/4 = {quarter}, got {t}")));
        }
        let target = (t / k).min(full);
        let x = specfun::inv_inc_beta(a, b, target)?;
        Ok(self.turning_point() * x.powf(1.0 / self.beta()))
    }

    /// `q(t)` over all times, with `q = 0` ascending at `t = −δ`.
    pub fn hj_trajectory(&self, t: f64, delta: f64) -> f64 {
        let period = self.period();
        let quarter = 0.25 * period;
        let tau = (t + delta).rem_euclid(period);
        let pos = |s: f64| self.hj_position(s.clamp(0.0, quarter)).expect("argument clamped to the quarter period");
        if tau <= quarter {
            pos(tau)
        } else if tau <= 2.0 * quarter {
            pos(2.0 * quarter - tau)
        } else if tau <= 3.0 * quarter {
            -pos(tau - 2.0 * quarter)
        } else {
            -pos(period - tau)
        }
    }

    /// Energy level `n` of the fractional quantum oscillator,
    /// `(πħβ D^(1/α) g^(2/β) / (2 B(1/β, 1/α + 1)))^(αβ/(α+β)) (n + ½)^(αβ/(α+β))`.
    ///
    /// Independent of the classical energy stored in `self`.
    pub fn quantum_level(&self, hbar: f64, n: u32) -> Result<f64> {
        if !(hbar > 0.0) {
            return Err(Error::invalid(format!("hbar must be positive, got {hbar}")));
        }
        let (a, b) = (self.alpha(), self.beta());
        let base = std::f64::consts::PI * hbar * b * self.params.d_alpha().powf(1.0 / a) * self.pot.strength().powf(1.0 / b)
            / (2.0 * specfun::beta(1.0 / b, 1.0 / a + 1.0)?);
        let exponent = a * b / (a + b);
        Ok(base.powf(exponent) * (f64::from(n) + 0.5).powf(exponent))
    }
}

/// Classical harmonic oscillator solution `q = √(2E/(mω²)) sin ω(t+δ)` with `ω = √(2/m) g`.
pub fn classical_limit_solution(energy: f64, mass: f64, g: f64, delta: f64, t: f64) -> Result<f64> {
    if !(energy > 0.0 && mass > 0.0 && g > 0.0) {
        return Err(Error::invalid(format!("classical solution needs E, m, g > 0 (E = {energy}, m = {mass}, g = {g})")));
    }
    let omega = (2.0 / mass).sqrt() * g;
    let amplitude = (2.0 * energy / (mass * omega * omega)).sqrt();
    Ok(amplitude * (omega * (t + delta)).sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn classical(energy: f64) -> OscillatorSpec {
        OscillatorSpec::from_values(2.0, 0.5, 1.0, 2.0, energy).unwrap()
    }

    #[test]
    fn validation() {
        assert!(OscillatorSpec::from_values(1.5, 1.0, 1.0, 2.0, 0.0).is_err());
        assert!(OscillatorSpec::from_values(1.5, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(OscillatorSpec::from_values(1.5, 1.0, 0.0, 2.0, 1.0).is_err());
        assert!(OscillatorSpec::from_values(1.0, 1.0, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn classical_period() {
        let s = classical(1.0);
        assert_relative_eq!(s.period(), PI * 2f64.sqrt(), max_relative = 1e-14);
        assert_eq!(s.energy_exponent(), 0.0);
        assert_eq!(s.period(), classical(10.0).period());
        assert_relative_eq!(s.period_quadrature().unwrap(), PI * 2f64.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn fractional_period_frozen_value() {
        // mpmath: 4/(1.5·2) · B(1/2, 2/3) = 3.449479412306387379938...
        let s = OscillatorSpec::from_values(1.5, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(s.period(), 3.449_479_412_306_387, max_relative = 1e-13);
        assert_relative_eq!(s.period_quadrature().unwrap(), 3.449_479_412_306_387, max_relative = 1e-13);
    }

    #[test]
    fn time_of_flight_endpoints() {
        let s = OscillatorSpec::from_values(1.75, 0.8, 1.3, 1.5, 2.0).unwrap();
        assert_eq!(s.hj_time_of_flight(0.0).unwrap(), 0.0);
        assert_relative_eq!(s.hj_time_of_flight(s.turning_point()).unwrap(), s.period() / 4.0, max_relative = 1e-14);
        assert!(s.hj_time_of_flight(-0.1).is_err());
        assert!(s.hj_time_of_flight(1.01 * s.turning_point()).is_err());
    }

    #[test]
    fn classical_time_of_flight_is_arcsin() {
        let s = classical(1.0);
        let q = 0.7f64.sin();
        assert_relative_eq!(s.hj_time_of_flight(q).unwrap(), 0.7 / 2f64.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(s.hj_time_of_flight_hypergeometric(q).unwrap(), 0.7 / 2f64.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn position_endpoints_and_classical_limit() {
        let s = OscillatorSpec::from_values(1.2, 1.0, 1.0, 1.2, 1.0).unwrap();
        assert_eq!(s.hj_position(0.0).unwrap(), 0.0);
        assert_relative_eq!(s.hj_position(s.period() / 4.0).unwrap(), s.turning_point(), max_relative = 1e-14);
        assert!(s.hj_position(s.period()).is_err());

        let c = classical(3.0);
        for k in 0..=20 {
            let t = k as f64 / 20.0 * c.period() / 4.0;
            let exact = classical_limit_solution(3.0, 1.0, 1.0, 0.0, t).unwrap();
            assert!((c.hj_position(t).unwrap() - exact).abs() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn full_period_extension() {
        let c = classical(1.0);
        let t_half = c.period() / 2.0;
        assert!(c.hj_trajectory(t_half, 0.0).abs() < 1e-12);
        for k in 0..50 {
            let t = -3.0 + 0.37 * k as f64;
            let exact = classical_limit_solution(1.0, 1.0, 1.0, 0.25, t).unwrap();
            assert!((c.hj_trajectory(t, 0.25) - exact).abs() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn quantum_levels_classical_limit() {
        let c = classical(1.0);
        assert_relative_eq!(c.quantum_level(1.0, 0).unwrap(), 2f64.sqrt() / 2.0, max_relative = 1e-14);
        let gaps: Vec<f64> = (0..6).map(|n| c.quantum_level(1.0, n + 1).unwrap() - c.quantum_level(1.0, n).unwrap()).collect();
        for g in &gaps {
            assert_relative_eq!(*g, gaps[0], max_relative = 1e-12);
        }
        let f = OscillatorSpec::from_values(1.5, 1.0, 1.0, 1.5, 1.0).unwrap();
        let gaps: Vec<f64> = (0..6).map(|n| f.quantum_level(1.0, n + 1).unwrap() - f.quantum_level(1.0, n).unwrap()).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(c.quantum_level(0.0, 1).is_err());
    }

    #[test]
    fn classical_solution_examples() {
        assert_eq!(classical_limit_solution(1.0, 1.0, 1.0, 0.5, -0.5).unwrap(), 0.0);
        // ω = √2, amplitude 1: the peak is reached at ωt = π/2.
        let peak = classical_limit_solution(1.0, 1.0, 1.0, 0.0, PI / (2.0 * 2f64.sqrt())).unwrap();
        assert_relative_eq!(peak, 1.0, max_relative = 1e-15);
        let amp = classical_limit_solution(2.0, 3.0, 0.5, 0.0, PI / (2.0 * (2.0f64 / 3.0).sqrt() * 0.5)).unwrap();
        let q_turn = turning_point(&PowerLawPotential::oscillator(0.25, 2.0).unwrap(), 2.0).unwrap();
        assert_relative_eq!(amp, q_turn, max_relative = 1e-14);
        assert!(classical_limit_solution(0.0, 1.0, 1.0, 0.0, 0.0).is_err());
    }
}
