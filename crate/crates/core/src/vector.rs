//! Small fixed-capacity vectors for 1–3 dimensional phase space, plus the
//! guarded power helpers used throughout the mechanics.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported configuration-space dimension.
pub const MAX_DIM: usize = 3;

/// A position, velocity or momentum vector with 1 to 3 components.
#[derive(Clone, Copy, PartialEq)]
pub struct Vector {
    dim: usize,
    c: [f64; MAX_DIM],
}

impl Vector {
    pub fn new(components: &[f64]) -> Result<Self> {
        if components.is_empty() || components.len() > MAX_DIM {
            return Err(Error::invalid(format!(
                "vector dimension must be 1..={MAX_DIM}, got {}",
                components.len()
            )));
        }
        let mut c = [0.0; MAX_DIM];
        c[..components.len()].copy_from_slice(components);
        Ok(Self { dim: components.len(), c })
    }

    /// Panics if `dim` is not in `1..=3`.
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "vector dimension {dim} out of range");
        Self { dim, c: [0.0; MAX_DIM] }
    }

    pub fn scalar(x: f64) -> Self {
        Self { dim: 1, c: [x, 0.0, 0.0] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c[..self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.as_slice().iter().copied()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.iter().zip(other.iter()).map(|(a, b)| a * b).sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        match self.dim {
            1 => self.c[0].abs(),
            2 => self.c[0].hypot(self.c[1]),
            _ => self.c[0].hypot(self.c[1]).hypot(self.c[2]),
        }
    }

    /// `v/|v|`, or the zero vector when `v = 0` (sgn(0) := 0).
    pub fn unit_or_zero(&self) -> Vector {
        let n = self.norm();
        if n == 0.0 {
            Vector::zeros(self.dim)
        } else {
            *self * (1.0 / n)
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vector {
        let mut out = *self;
        for x in &mut out.c[..self.dim] {
            *x = f(*x);
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(f64::is_finite)
    }

    /// z-component of the cross product for planar vectors; 0 in 1D.
    pub fn cross_z(&self, other: &Vector) -> f64 {
        if self.dim < 2 {
            return 0.0;
        }
        self.c[0] * other.c[1] - self.c[1] * other.c[0]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        let d = self.dim;
        &mut self.c[..d][i]
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(mut self, rhs: Vector) -> Vector {
        self += rhs;
        self
    }
}

impl AddAssign for Vector {
    fn add_assign(&mut self, rhs: Vector) {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            self.c[i] += rhs.c[i];
        }
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(mut self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            self.c[i] -= rhs.c[i];
        }
        self
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, k: f64) -> Vector {
        self.map(|x| x * k)
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.map(|x| -x)
    }
}

impl serde::Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Vector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Vector::new(&v).map_err(serde::de::Error::custom)
    }
}

/// `|x|^k` with `0^k` defined as 0 for `k > 0`, 1 for `k = 0` and +∞ for `k < 0`.
pub fn abs_pow(x: f64, k: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        if k > 0.0 {
            0.0
        } else if k == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a.powf(k)
    }
}

/// Sign function with sgn(0) = 0.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
