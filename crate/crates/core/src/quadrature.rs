//! Adaptive Gauss-Kronrod (7/15 point) quadrature.
//!
//! Used for the action functional, for the quadrature route to the oscillator
//! period, and as the independent oracle that the special functions are
//! checked against.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of a quadrature: value and an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        Self { abs: 1e-300, rel: 1e-13, max_intervals: 2000 }
    }
}

impl QuadTolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, ..Self::default() }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

/// One 15-point Kronrod panel on `[a, b]`; returns `(kronrod, |kronrod − gauss|)`.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let s = f(centre - dx) + f(centre + dx);
        kronrod += w * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive quadrature: repeatedly bisects the panel with the
/// largest error estimate until the summed estimate meets `tol`.
///
/// Returns `Err(QuadratureTolerance)` when the interval budget runs out.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: QuadTolerance) -> Result<Quad> {
    let q = integrate_best_effort(&f, a, b, tol);
    if q.error <= tol.target(q.value) {
        Ok(q)
    } else {
        Err(Error::QuadratureTolerance { tol: tol.target(q.value), estimate: q.error })
    }
}

/// Like [`integrate`] but always returns the best estimate reached.
pub fn integrate_best_effort<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: QuadTolerance) -> Quad {
    if a == b {
        return Quad { value: 0.0, error: 0.0, evaluations: 0 };
    }
    let (value, error) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut evaluations = 15;
    while total_err > tol.target(total) && heap.len() < tol.max_intervals {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Panel cannot be split further in floating point.
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // Re-sum to shed the drift of the running updates.
    let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Quad { value, error, evaluations }
}

/// `∫₀^x y^(a−1) (1−y)^(b−1) dy` by adaptive quadrature.
///
/// Endpoint singularities are removed by substitution: `y = u^(1/a)` near 0
/// when `a < 1`, and `1 − y = v^(1/b)` near 1 when `b < 1`. Evaluated without
/// any Gamma-function machinery so it can serve as an oracle for it.
pub fn beta_integral(a: f64, b: f64, x: f64, tol: QuadTolerance) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("beta_integral needs a, b > 0 and x in [0, 1] (a = {a}, b = {b}, x = {x})")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let split = x.min(0.5);
    let lower = if a < 1.0 {
        let f = |u: f64| (1.0 - u.powf(1.0 / a)).powf(b - 1.0) / a;
        integrate(f, 0.0, split.powf(a), tol)?
    } else {
        let f = |y: f64| y.powf(a - 1.0) * (1.0 - y).powf(b - 1.0);
        integrate(f, 0.0, split, tol)?
    };
    if x <= 0.5 {
        return Ok(lower.value);
    }
    // Upper part in w = 1 − y over [1 − x, 1/2].
    let w_lo = 1.0 - x;
    let upper = if b < 1.0 {
        let f = |v: f64| (1.0 - v.powf(1.0 / b)).powf(a - 1.0) / b;
        integrate(f, w_lo.powf(b), 0.5f64.powf(b), tol)?
    } else {
        let f = |w: f64| (1.0 - w).powf(a - 1.0) * w.powf(b - 1.0);
        integrate(f, w_lo, 0.5, tol)?
    };
    Ok(lower.value + upper.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact_on_one_panel() {
        let (v, _) = gk15(&|x: f64| x.powi(5) - 2.0 * x * x, 0.0, 2.0);
        assert!((v - (64.0 / 6.0 - 16.0 / 3.0)).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_kink() {
        let q = integrate(|x: f64| x.abs().powf(1.1), -1.0, 2.0, QuadTolerance::new(0.0, 1e-13)).unwrap();
        let exact = (1.0 + 2f64.powf(2.1)) / 2.1;
        assert!((q.value - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn beta_integral_half_half_is_pi() {
        let v = beta_integral(0.5, 0.5, 1.0, QuadTolerance::default()).unwrap();
        assert!((v - PI).abs() < 1e-13);
        let h = beta_integral(0.5, 0.5, 0.5, QuadTolerance::default()).unwrap();
        assert!((h - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn empty_interval() {
        let q = integrate(|x| x, 1.0, 1.0, QuadTolerance::default()).unwrap();
        assert_eq!(q.value, 0.0);
    }
}
