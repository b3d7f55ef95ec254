//! Fractional classical mechanics.
//!
//! The kinetic energy of a particle is `D_α |p|^α` with `1 < α ≤ 2` instead of
//! `p²/2m`. This crate evaluates the resulting Hamiltonian and Lagrangian,
//! integrates Hamilton's equations with an adaptive Dormand-Prince 5(4)
//! stepper, computes the period of the fractional oscillator
//! `H = D_α|p|^α + g²|q|^β` in closed form and by quadrature, inverts the
//! Hamilton-Jacobi time of flight into `q(t)`, and checks the mechanical
//! similarity laws (including `T^α ∝ l^(2α−1)` for `1/r` potentials).
//!
//! All quantities are plain `f64` in whatever consistent unit system the caller
//! uses (the CGS mapping is `[D_α] = erg^(1−α)·cm^α·s^(−α)`).

// `!(x > 0.0)` is used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod integrate;
pub mod model;
pub mod oscillator;
pub mod quadrature;
pub mod similarity;
pub mod specfun;
pub mod trajectory;
pub mod vector;

pub use error::{Error, Result};
pub use integrate::{
    integrate, measure_period, Direction, EventKind, EventRecord, IntegratorConfig, Integrator,
    Solution,
};
pub use model::{
    action, action_of_path, euler_lagrange_residual, free_particle_trajectory, hamilton_rhs,
    hamiltonian, lagrangian, momentum_from_velocity, poisson_bracket, total_time_derivative,
    turning_point, velocity_from_momentum, ActionEstimate, DiffStep, FractionalParams,
    InitialConditions, InitialMotion, PhaseState, PowerLawPotential,
};
pub use oscillator::{OscillatorSpec, PeriodReport};
pub use similarity::SimilarityExponents;
pub use trajectory::{DenseSegment, Sample, Trajectory};
pub use vector::Vector;
