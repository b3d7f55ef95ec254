//! Special functions: log-gamma, complete and incomplete Beta, the inverse of
//! the incomplete Beta function, and the Gauss hypergeometric function on the
//! family `F(μ, 1−ν; μ+1; x)` that the oscillator time of flight needs.
//!
//! The incomplete Beta function here is *not* regularized:
//! `B_x(a, b) = ∫₀^x y^(a−1) (1−y)^(b−1) dy`.

#![allow(clippy::excessive_precision)] // published Lanczos coefficients, kept verbatim

use crate::error::{Error, Result};

const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;
const CF_MAX_ITER: usize = 10_000;

/// Below this argument the incomplete Beta function is summed as a power series.
const SERIES_CUTOFF: f64 = 0.1;

/// `ln Γ(x)` for `x > 0` (Lanczos approximation, g = 671/128).
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x keeps the Lanczos sum in its most accurate range.
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    Ok(tmp + (SQRT_2PI * ser / x).ln())
}

fn check_ab(a: f64, b: f64) -> Result<()> {
    if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("Beta parameters must be positive and finite (a = {a}, b = {b})")))
    }
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    check_ab(a, b)?;
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

/// Complete Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    Ok(ln_beta(a, b)?.exp())
}

/// Validated arguments of the incomplete Beta function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaArgs {
    pub a: f64,
    pub b: f64,
    pub x: f64,
}

impl BetaArgs {
    pub fn new(a: f64, b: f64, x: f64) -> Result<Self> {
        check_ab(a, b)?;
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(format!("incomplete Beta needs 0 <= x <= 1, got {x}")));
        }
        Ok(Self { a, b, x })
    }

    /// `B_x(a, b)`.
    pub fn inc_beta(&self) -> f64 {
        let BetaArgs { a, b, x } = *self;
        if x == 0.0 {
            return 0.0;
        }
        let full = || ln_beta(a, b).expect("parameters validated").exp();
        if x == 1.0 {
            return full();
        }
        if x > (a + 1.0) / (a + b + 2.0) {
            let rest = BetaArgs { a: b, b: a, x: 1.0 - x };
            return full() - rest.lower_tail();
        }
        self.lower_tail()
    }

    /// `B_x(a, b)` without the symmetry switch; accurate for `x ≤ (a+1)/(a+b+2)`.
    fn lower_tail(&self) -> f64 {
        let BetaArgs { a, b, x } = *self;
        if x < SERIES_CUTOFF {
            (a * x.ln()).exp() * power_series(a, b, x)
        } else {
            (a * x.ln() + b * (-x).ln_1p()).exp() / a * continued_fraction(a, b, x)
        }
    }
}

/// `Σ (1−b)_n x^n / (n! (a+n))`, so that `B_x(a,b) = x^a · Σ`.
fn power_series(a: f64, b: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0 / a;
    for n in 1..CF_MAX_ITER {
        let nf = n as f64;
        term *= (nf - b) * x / nf;
        let add = term / (a + nf);
        sum += add;
        if add.abs() <= CF_EPS * sum.abs() {
            break;
        }
    }
    sum
}

/// Modified Lentz evaluation of the incomplete Beta continued fraction.
fn continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let guard = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };

    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// `B_x(a, b) = ∫₀^x y^(a−1)(1−y)^(b−1) dy`.
pub fn inc_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    Ok(BetaArgs::new(a, b, x)?.inc_beta())
}

/// The `x ∈ [0, 1]` with `B_x(a, b) = target`.
///
/// Safeguarded Newton iteration: every step keeps a bracket, and any Newton
/// step leaving it (the derivative is unbounded at an endpoint when a or b is
/// below one) falls back to bisection.
pub fn inv_inc_beta(a: f64, b: f64, target: f64) -> Result<f64> {
    let total = beta(a, b)?;
    let slack = 4.0 * f64::EPSILON * total;
    if !(target >= -slack && target <= total + slack) {
        return Err(Error::domain(format!(
            "inv_inc_beta target {target} outside [0, B(a,b) = {total}]"
        )));
    }
    if target <= 0.0 {
        return Ok(0.0);
    }
    if target >= total {
        return Ok(1.0);
    }
    let tol = 1e-14 * total;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    // Leading-order inversion of whichever tail the target sits in.
    let mut x = if target < 0.5 * total {
        (a * target).powf(1.0 / a)
    } else {
        1.0 - (b * (total - target)).powf(1.0 / b)
    };
    if !(x > 0.0 && x < 1.0) {
        x = 0.5;
    }
    for _ in 0..400 {
        let f = BetaArgs { a, b, x }.inc_beta() - target;
        if f.abs() <= tol {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            // A few representable points remain; near x = 1 with b < 1 the
            // function can move by more than the tolerance per ulp, so take
            // the best of them.
            return Ok(closest_in_bracket(a, b, target, lo, hi));
        }
        let slope = ((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p()).exp();
        let newton = x - f / slope;
        x = if slope.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NoConvergence(format!("inv_inc_beta(a = {a}, b = {b}, target = {target})")))
}

/// Representable `x` in `[lo, hi]` whose `B_x(a, b)` is nearest `target`.
fn closest_in_bracket(a: f64, b: f64, target: f64, lo: f64, hi: f64) -> f64 {
    let miss = |x: f64| (BetaArgs { a, b, x }.inc_beta() - target).abs();
    let mut best = (lo, miss(lo));
    let mut x = lo;
    while x < hi {
        x = x.next_up();
        let m = miss(x);
        if m < best.1 {
            best = (x, m);
        }
    }
    best.0
}

/// Gauss hypergeometric function on the family `F(μ, 1−ν; μ+1; x)`.
///
/// The arguments mirror the general signature `F(a, b; c; x)`: pass `a = μ`,
/// `b = 1 − ν` and `c = μ + 1`. Any other combination is rejected. Evaluated
/// through `F = μ B_x(μ, ν) / x^μ`.
pub fn hyp2f1(mu: f64, one_minus_nu: f64, mu_plus_1: f64, x: f64) -> Result<f64> {
    let nu = 1.0 - one_minus_nu;
    if (mu_plus_1 - (mu + 1.0)).abs() > 8.0 * f64::EPSILON * (mu + 1.0) {
        return Err(Error::domain(format!(
            "hyp2f1 is implemented only for c = a + 1 (a = {mu}, c = {mu_plus_1})"
        )));
    }
    check_ab(mu, nu)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("hyp2f1 needs 0 <= x <= 1, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < SERIES_CUTOFF {
        return Ok(mu * power_series(mu, nu, x));
    }
    if x <= (mu + 1.0) / (mu + nu + 2.0) {
        return Ok((nu * (-x).ln_1p()).exp() * continued_fraction(mu, nu, x));
    }
    let bx = BetaArgs { a: mu, b: nu, x }.inc_beta();
    Ok(mu * bx / (mu * x.ln()).exp())
}
