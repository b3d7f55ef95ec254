use fracmech::similarity::*;
use fracmech::*;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn oscillator(alpha: f64, beta: f64) -> (FractionalParams, PowerLawPotential) {
    (FractionalParams::new(alpha, 1.0).unwrap(), PowerLawPotential::oscillator(1.0, beta).unwrap())
}

fn planar(x: [f64; 2]) -> Vector {
    Vector::new(&x).unwrap()
}

/// Largest mismatch between each sample of `traj` and a tight re-integration
/// of the Hamilton equations from the sample before it, in units of the
/// trajectory's own position and momentum ranges.
fn step_defect(params: &FractionalParams, pot: &PowerLawPotential, traj: &Trajectory) -> f64 {
    let tight = IntegratorConfig::with_tolerances(1e-13, 1e-15);
    let q_scale = traj.samples().iter().map(|s| s.state.q.norm()).fold(0.0, f64::max);
    let p_scale = traj.samples().iter().map(|s| s.state.p.norm()).fold(0.0, f64::max);
    traj.samples()
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].state, w[1].state);
            let ic = InitialConditions::with_momentum(a.q, a.p).unwrap();
            let end = integrate(params, pot, &ic, (a.t, b.t), &tight).unwrap().trajectory.last().state;
            ((end.q - b.q).norm() / q_scale).max((end.p - b.p).norm() / p_scale)
        })
        .fold(0.0, f64::max)
}

#[test]
fn scaled_trajectories_solve_hamilton_equations() {
    let cfg = IntegratorConfig::default();
    for (alpha, beta) in [(1.5, 1.5), (1.1, 2.0), (2.0, 1.25), (1.75, 1.9), (1.1, 1.1)] {
        let (params, pot) = oscillator(alpha, beta);
        let ic = InitialConditions::with_momentum(Vector::scalar(0.8), Vector::scalar(0.2)).unwrap();
        let sol = integrate(&params, &pot, &ic, (0.0, 6.0), &cfg).unwrap();
        for rho in [0.5, 2.0, 5.0] {
            let scaled = scale_trajectory(&sol.trajectory, rho, alpha, beta).unwrap();
            let defect = step_defect(&params, &pot, &scaled);
            assert!(defect < 10.0 * cfg.rel_tol, "alpha {alpha} beta {beta} rho {rho}: defect {defect:e}");
        }
    }
}

#[test]
fn wrong_exponents_break_the_equations() {
    // Guard: the defect check must notice a mismatched time scaling.
    let cfg = IntegratorConfig::default();
    let (params, pot) = oscillator(1.5, 1.5);
    let ic = InitialConditions::with_momentum(Vector::scalar(0.8), Vector::scalar(0.2)).unwrap();
    let sol = integrate(&params, &pot, &ic, (0.0, 6.0), &cfg).unwrap();
    let mismatched = scale_trajectory(&sol.trajectory, 2.0, 1.5, 2.0).unwrap();
    assert!(step_defect(&params, &pot, &mismatched) > 1e-3);
}

#[test]
fn classical_scaled_dense_output_residual() {
    let cfg = IntegratorConfig::default();
    let params = FractionalParams::classical(1.0).unwrap();
    let pot = PowerLawPotential::oscillator(1.0, 2.0).unwrap();
    let ic = InitialConditions::with_momentum(Vector::scalar(0.8), Vector::scalar(0.2)).unwrap();
    let sol = integrate(&params, &pot, &ic, (0.0, 6.0), &cfg).unwrap();
    for rho in [0.5, 2.0, 5.0] {
        let scaled = scale_trajectory(&sol.trajectory, rho, 2.0, 2.0).unwrap();
        // Period unchanged, amplitude scaled.
        assert_eq!(scaled.t_end(), sol.trajectory.t_end());
        let (v_scale, f_scale) = scaled.samples().iter().fold((0.0f64, 0.0f64), |(v, f), s| {
            let (qdot, pdot) = hamilton_rhs(&params, &pot, &s.state).unwrap();
            (v.max(qdot.norm()), f.max(pdot.norm()))
        });
        for seg in scaled.segments() {
            for k in 0..=4 {
                let t = seg.t0 + seg.h * k as f64 / 4.0;
                let (dq, dp) = seg.eval_derivative(t);
                let (qdot, pdot) = hamilton_rhs(&params, &pot, &seg.eval(t)).unwrap();
                let r = ((dq - qdot).norm() / v_scale).max((dp - pdot).norm() / f_scale);
                assert!(r < 10.0 * cfg.rel_tol, "rho {rho} t {t}: residual {r:e}");
            }
        }
    }
}

#[test]
fn scaled_samples_match_direct_integration() {
    let cfg = IntegratorConfig::default();
    for (alpha, beta) in [(1.5, 1.5), (1.25, 2.0)] {
        let (params, pot) = oscillator(alpha, beta);
        let ic = InitialConditions::with_momentum(Vector::scalar(0.5), Vector::scalar(0.4)).unwrap();
        let sol = integrate(&params, &pot, &ic, (0.0, 4.0), &cfg).unwrap();
        let scaled = scale_trajectory(&sol.trajectory, 3.0, alpha, beta).unwrap();
        let direct = integrate(&params, &pot, &scale_initial_conditions(&ic, 3.0, alpha, beta).unwrap(), (0.0, scaled.t_end()), &cfg)
            .unwrap()
            .trajectory;
        for s in scaled.samples() {
            let d = direct.state_at(s.state.t).unwrap();
            assert!((d.q[0] - s.state.q[0]).abs() < 1e-7 * 3.0, "t {}", s.state.t);
            assert!(rel(s.energy, hamiltonian(&params, &pot, &s.state).unwrap()) < 1e-12);
        }
    }
}

#[test]
fn exponent_examples() {
    assert_eq!(exponents(2.0, 2.0).unwrap().time_vs_length, 0.0);
    assert_eq!(exponents(2.0, -1.0).unwrap().time_vs_length, 1.5);
    assert_eq!(exponents(2.0, 1.0).unwrap().time_vs_length, 0.5);
    let e = exponents(1.5, 2.0).unwrap();
    assert!((e.momentum_vs_length() - 2.0 / 1.5).abs() < 1e-15);
    assert!(exponents(1.0, 2.0).is_err());
    assert!(exponents(1.5, 0.0).is_err());
    for alpha in [1.1, 1.25, 1.5, 1.75, 2.0] {
        assert!((exponents(alpha, -1.0).unwrap().time_vs_length - (2.0 - 1.0 / alpha)).abs() < 1e-15);
    }
}

#[test]
fn kepler_gamma_examples() {
    assert_eq!(kepler_gamma(2.0).unwrap(), 1.0);
    assert_eq!(kepler_gamma(1.5).unwrap(), 1.5);
    assert!(kepler_gamma(0.9).is_err());
}

#[test]
fn verify_scaling_examples() {
    let cfg = IntegratorConfig::default();
    let at_rest = |q: f64| InitialConditions::with_velocity(Vector::scalar(q), Vector::scalar(0.0)).unwrap();

    let classical = FractionalParams::classical(1.0).unwrap();
    let field = PowerLawPotential::new(1.0, 1.0).unwrap();
    let rows = verify_scaling(&classical, &field, &at_rest(1.0), &[1.0, 4.0], Landmark::FirstTurningOrOrigin, 100.0, &cfg).unwrap();
    assert_eq!(rows[0].measured_ratio, 1.0);
    assert!((rows[1].measured_ratio - 2.0).abs() < 1e-8);

    let (params, pot) = oscillator(1.5, 2.0);
    let rows = verify_scaling(&params, &pot, &at_rest(1.0), &[2.0], Landmark::FirstTurningOrOrigin, 100.0, &cfg).unwrap();
    assert!(rel(rows[0].measured_ratio, 2f64.powf(1.0 / 3.0)) < 1e-5);
    assert_eq!(rows[0].predicted_ratio, 2f64.powf(1.0 - 2.0 + 2.0 / 1.5));

    let attractive = PowerLawPotential::new(-1.0, -1.0).unwrap();
    let rows = verify_scaling(&classical, &attractive, &at_rest(1.0), &[2.0], Landmark::RadiusFraction(0.5), 100.0, &cfg).unwrap();
    assert!(rel(rows[0].measured_ratio, 2f64.powf(1.5)) < 1e-6);
}

#[test]
fn fitted_exponents_recover_prediction() {
    let cfg = IntegratorConfig::default();
    let rhos = [1.0, 2.0, 4.0, 8.0];
    let at_rest = |q: f64| InitialConditions::with_velocity(Vector::scalar(q), Vector::scalar(0.0)).unwrap();
    for alpha in [1.1, 1.5, 2.0] {
        let params = FractionalParams::new(alpha, 1.0).unwrap();
        let mut cases = vec![
            (PowerLawPotential::new(1.0, 1.0).unwrap(), at_rest(1.0), Landmark::FirstTurningOrOrigin),
            (PowerLawPotential::new(-1.0, -1.0).unwrap(), at_rest(1.0), Landmark::RadiusFraction(0.5)),
            (PowerLawPotential::new(1.0, -1.0).unwrap(), at_rest(1.0), Landmark::RadiusFraction(2.0)),
        ];
        for beta in [1.25, 1.5, 2.0] {
            cases.push((PowerLawPotential::oscillator(1.0, beta).unwrap(), at_rest(1.0), Landmark::FirstTurningOrOrigin));
        }
        for (pot, ic, landmark) in cases {
            let rows = verify_scaling(&params, &pot, &ic, &rhos, landmark, 1e3, &cfg).unwrap();
            let ratios: Vec<f64> = rows.iter().map(|r| r.measured_ratio).collect();
            let fit = log_log_fit(&rhos, &ratios).unwrap();
            let predicted = exponents(alpha, pot.degree()).unwrap().time_vs_length;
            assert!((fit.slope - predicted).abs() < 1e-3, "alpha {alpha} beta {}: slope {}", pot.degree(), fit.slope);
        }
    }
}

#[test]
fn kepler_examples() {
    let cfg = IntegratorConfig::default();
    let attractive = PowerLawPotential::new(-1.0, -1.0).unwrap();
    let classical = FractionalParams::classical(1.0).unwrap();

    let circular = InitialConditions::with_momentum(planar([1.0, 0.0]), planar([0.0, 1.0])).unwrap();
    let report = fractional_kepler_check(&classical, &attractive, &circular, &[1.0, 4.0], &cfg).unwrap();
    assert_eq!(report.rows[0].measured_ratio, 1.0);
    assert!(rel(report.rows[1].measured_ratio, 8.0) < 1e-7);

    // Classical ellipse: E = 0.32 − 1, semi-major axis k / 2|E|, T = 2π a^(3/2).
    let report = fractional_kepler_check(&classical, &attractive, &default_orbit(), &[1.0, 2.0, 4.0, 8.0], &cfg).unwrap();
    assert_eq!(report.landmark, OrbitLandmark::Perihelion);
    let a: f64 = 1.0 / (2.0 * 0.68);
    assert!(rel(report.base_period, std::f64::consts::TAU * a.powf(1.5)) < 1e-8);
    assert!((report.fit.unwrap().slope - 1.5).abs() < 1e-6);

    let fractional = FractionalParams::new(1.5, 1.0).unwrap();
    let report = fractional_kepler_check(&fractional, &attractive, &default_orbit(), &[2.0], &cfg).unwrap();
    assert!(rel(report.rows[0].measured_ratio, 2f64.powf(4.0 / 3.0)) < 1e-4);
    assert_eq!(report.predicted_slope, 2.0 - 1.0 / 1.5);
}

#[test]
fn kepler_rejections() {
    let cfg = IntegratorConfig::default();
    let classical = FractionalParams::classical(1.0).unwrap();
    let attractive = PowerLawPotential::new(-1.0, -1.0).unwrap();
    let escape = InitialConditions::with_momentum(planar([1.0, 0.0]), planar([0.0, 1.5])).unwrap();
    assert!(matches!(fractional_kepler_check(&classical, &attractive, &escape, &[1.0], &cfg), Err(Error::Unsuitable(_))));
    assert!(fractional_kepler_check(&classical, &attractive, &default_orbit(), &[], &cfg).is_err());
    let line = InitialConditions::with_momentum(Vector::scalar(1.0), Vector::scalar(0.0)).unwrap();
    assert!(fractional_kepler_check(&classical, &attractive, &line, &[1.0], &cfg).is_err());
    let oscillator = PowerLawPotential::oscillator(1.0, 2.0).unwrap();
    assert!(fractional_kepler_check(&classical, &oscillator, &default_orbit(), &[1.0], &cfg).is_err());
}

fn alpha_strategy() -> impl Strategy<Value = f64> {
    1.01f64..=2.0
}

fn degree_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![-3.0f64..-0.1, 0.1f64..4.0]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn time_exponent_factorizes_through_energy(alpha in alpha_strategy(), beta in degree_strategy()) {
        let e = exponents(alpha, beta).unwrap();
        prop_assert!((e.time_vs_length - e.time_vs_energy * e.energy_vs_length).abs() < 1e-12);
    }

    #[test]
    fn energy_and_length_forms_agree(alpha in alpha_strategy(), beta in degree_strategy(), rho in 0.1f64..10.0) {
        let e = exponents(alpha, beta).unwrap();
        let energy_ratio = rho.powf(beta);
        let via_energy = energy_ratio.powf(e.time_vs_energy);
        let via_length = rho.powf(e.time_vs_length);
        prop_assert!(rel(via_energy, via_length) < 1e-12);
    }

    #[test]
    fn kepler_gamma_restores_third_law(alpha in alpha_strategy()) {
        let gamma = kepler_gamma(alpha).unwrap();
        prop_assert!((exponents(alpha, -gamma).unwrap().time_vs_length - 1.5).abs() < 1e-12);
    }

    #[test]
    fn scaled_initial_energy_ratio(
        alpha in alpha_strategy(),
        beta in degree_strategy(),
        strength in prop_oneof![-2.0f64..-0.1, 0.1f64..2.0],
        rho in 0.1f64..10.0,
        q in (0.2f64..2.0, -2.0f64..2.0),
        v in (-2.0f64..2.0, -2.0f64..2.0),
    ) {
        let params = FractionalParams::new(alpha, 0.7).unwrap();
        let pot = PowerLawPotential::new(strength, beta).unwrap();
        let ic = InitialConditions::with_velocity(planar([q.0, q.1]), planar([v.0, v.1])).unwrap();
        let e0 = hamiltonian(&params, &pot, &ic.phase_state(0.0, &params)).unwrap();
        prop_assume!(e0.abs() > 1e-3);
        let scaled = scale_initial_conditions(&ic, rho, alpha, beta).unwrap();
        let e = hamiltonian(&params, &pot, &scaled.phase_state(0.0, &params)).unwrap();
        prop_assert!(rel(e / e0, rho.powf(beta)) < 1e-10);
    }
}
