use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fracmech::similarity::{default_orbit, fractional_kepler_check};
use fracmech::specfun::{inc_beta, inv_inc_beta};
use fracmech::{integrate, FractionalParams, IntegratorConfig, PowerLawPotential};
use fracmech_bench::{at_turning_point, oscillator, EXPONENTS};

fn special_functions(c: &mut Criterion) {
    let mut g = c.benchmark_group("specfun");
    for (a, b) in [(0.5, 0.5), (1.0 / 1.1, 1.0 / 1.75), (0.5, 1.0)] {
        let id = format!("{a:.3}/{b:.3}");
        g.bench_with_input(BenchmarkId::new("inc_beta", &id), &(a, b), |bench, &(a, b)| {
            bench.iter(|| inc_beta(black_box(a), black_box(b), black_box(0.37)).unwrap())
        });
        let target = 0.4 * inc_beta(a, b, 1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("inv_inc_beta", &id), &(a, b), |bench, &(a, b)| {
            bench.iter(|| inv_inc_beta(black_box(a), black_box(b), black_box(target)).unwrap())
        });
    }
    g.finish();
}

fn periods(c: &mut Criterion) {
    let cfg = IntegratorConfig::default();
    let mut g = c.benchmark_group("period");
    for (alpha, beta) in EXPONENTS {
        let spec = oscillator(alpha, beta);
        let id = format!("{alpha}/{beta}");
        g.bench_with_input(BenchmarkId::new("closed_form", &id), &spec, |b, s| b.iter(|| black_box(s).period()));
        g.bench_with_input(BenchmarkId::new("quadrature", &id), &spec, |b, s| {
            b.iter(|| black_box(s).period_quadrature().unwrap())
        });
        g.bench_with_input(BenchmarkId::new("measured", &id), &spec, |b, s| {
            b.iter(|| black_box(s).measure_period(&cfg).unwrap())
        });
    }
    g.finish();
}

fn trajectories(c: &mut Criterion) {
    let cfg = IntegratorConfig::default();
    let mut g = c.benchmark_group("integrate");
    g.sample_size(20);
    for (alpha, beta) in EXPONENTS {
        let spec = oscillator(alpha, beta);
        let ic = at_turning_point(&spec);
        let span = (0.0, 10.0 * spec.period());
        g.bench_function(BenchmarkId::new("ten_periods", format!("{alpha}/{beta}")), |b| {
            b.iter(|| integrate(&spec.params, &spec.pot, black_box(&ic), span, &cfg).unwrap())
        });
    }
    let params = FractionalParams::new(1.5, 1.0).unwrap();
    let pot = PowerLawPotential::new(-1.0, -1.0).unwrap();
    let orbit = default_orbit();
    g.bench_function("kepler_check", |b| {
        b.iter(|| fractional_kepler_check(&params, &pot, black_box(&orbit), &[1.0, 2.0, 4.0, 8.0], &cfg).unwrap())
    });
    g.finish();
}

criterion_group!(benches, special_functions, periods, trajectories);
criterion_main!(benches);
