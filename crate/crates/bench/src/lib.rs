//! Fixtures shared by the criterion targets.

use fracmech::{InitialConditions, OscillatorSpec, Vector};

/// Exponent pairs from smooth to strongly non-Lipschitz.
pub const EXPONENTS: [(f64, f64); 4] = [(2.0, 2.0), (1.5, 2.0), (1.75, 1.5), (1.1, 1.1)];

/// Unit-scale oscillator at energy 1.
pub fn oscillator(alpha: f64, beta: f64) -> OscillatorSpec {
    OscillatorSpec::from_values(alpha, 1.0, 1.0, beta, 1.0).expect("valid exponents")
}

/// Launch from the turning point at rest.
pub fn at_turning_point(spec: &OscillatorSpec) -> InitialConditions {
    InitialConditions::with_momentum(Vector::scalar(spec.turning_point()), Vector::scalar(0.0)).expect("scalar state")
}
