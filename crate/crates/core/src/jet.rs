//! Truncated Taylor series arithmetic.
//!
//! A [`Series`] holds the Taylor coefficients `c[j] = f^(j)(x0) / j!` of a
//! function around a base point, truncated at a fixed order. Arithmetic and
//! the elementary functions propagate the truncation exactly, so evaluating a
//! closed-form expression on `Series::variable(x0, n)` yields the first `n`
//! derivatives of that expression at `x0` without finite differencing.
//!
//! The capacity is fixed so the type stays `Copy`; orders up to
//! [`MAX_ORDER`] are supported.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest supported truncation order.
pub const MAX_ORDER: usize = 7;
const CAP: usize = MAX_ORDER + 1;

#[derive(Clone, Copy, PartialEq)]
pub struct Series {
    c: [f64; CAP],
    len: usize,
}

impl std::fmt::Debug for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.coeffs()).finish()
    }
}

impl Series {
    fn zeros(order: usize) -> Self {
        assert!(order <= MAX_ORDER, "series order {order} exceeds {MAX_ORDER}");
        Self {
            c: [0.0; CAP],
            len: order + 1,
        }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.c[0] = value;
        s
    }

    /// The identity function expanded around `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.c[0] = x0;
        if order >= 1 {
            s.c[1] = 1.0;
        }
        s
    }

    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        assert!(!coeffs.is_empty());
        let mut s = Self::zeros(coeffs.len() - 1);
        s.c[..coeffs.len()].copy_from_slice(coeffs);
        s
    }

    /// Builds a series from a derivative tower `[f, f', f'', ...]`.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        assert!(!derivs.is_empty());
        let mut s = Self::zeros(derivs.len() - 1);
        let mut fact = 1.0;
        for (j, d) in derivs.iter().enumerate() {
            if j > 0 {
                fact *= j as f64;
            }
            s.c[j] = d / fact;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.len - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c[..self.len]
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `j`-th derivative at the base point; zero beyond the truncation order.
    pub fn derivative(&self, j: usize) -> f64 {
        if j >= self.len {
            return 0.0;
        }
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        self.c[j] * fact
    }

    pub fn derivatives(&self) -> Vec<f64> {
        (0..self.len).map(|j| self.derivative(j)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|v| v.is_finite())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        let mut s = Self::zeros(order);
        s.c[..=order].copy_from_slice(&self.c[..=order]);
        s
    }

    /// Term-wise derivative; the order drops by one (order 0 stays order 0).
    pub fn diff(&self) -> Self {
        if self.len == 1 {
            return Self::constant(0.0, 0);
        }
        let mut s = Self::zeros(self.len - 2);
        for j in 1..self.len {
            s.c[j - 1] = j as f64 * self.c[j];
        }
        s
    }

    /// Antiderivative with constant term `c0`; the order grows by one up to the cap.
    pub fn integrate(&self, c0: f64) -> Self {
        let order = (self.order() + 1).min(MAX_ORDER);
        let mut s = Self::zeros(order);
        s.c[0] = c0;
        for j in 1..=order {
            s.c[j] = self.c[j - 1] / j as f64;
        }
        s
    }

    /// Evaluates the truncated polynomial at offset `dx` from the base point.
    pub fn eval_offset(&self, dx: f64) -> f64 {
        self.coeffs().iter().rev().fold(0.0, |acc, c| acc * dx + c)
    }

    fn binary_len(&self, other: &Self) -> usize {
        self.len.min(other.len)
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    pub fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut acc = Self::constant(1.0, self.order());
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    pub fn recip(&self) -> Self {
        Self::constant(1.0, self.order()) / *self
    }

    pub fn sqrt(&self) -> Self {
        let mut r = Self::zeros(self.order());
        r.c[0] = self.c[0].sqrt();
        for n in 1..self.len {
            let mut acc = self.c[n];
            for j in 1..n {
                acc -= r.c[j] * r.c[n - j];
            }
            r.c[n] = acc / (2.0 * r.c[0]);
        }
        r
    }

    pub fn exp(&self) -> Self {
        let mut e = Self::zeros(self.order());
        e.c[0] = self.c[0].exp();
        for n in 1..self.len {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += k as f64 * self.c[k] * e.c[n - k];
            }
            e.c[n] = acc / n as f64;
        }
        e
    }

    pub fn ln(&self) -> Self {
        let mut l = Self::zeros(self.order());
        l.c[0] = self.c[0].ln();
        for n in 1..self.len {
            let mut acc = 0.0;
            for k in 1..n {
                acc += k as f64 * l.c[k] * self.c[n - k];
            }
            l.c[n] = (self.c[n] - acc / n as f64) / self.c[0];
        }
        l
    }

    /// Simultaneous sine and cosine (or their hyperbolic versions when `sign = +1`).
    fn trig_pair(&self, sign: f64) -> (Self, Self) {
        let mut s = Self::zeros(self.order());
        let mut c = Self::zeros(self.order());
        if sign < 0.0 {
            s.c[0] = self.c[0].sin();
            c.c[0] = self.c[0].cos();
        } else {
            s.c[0] = self.c[0].sinh();
            c.c[0] = self.c[0].cosh();
        }
        for n in 1..self.len {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for k in 1..=n {
                let kx = k as f64 * self.c[k];
                ds += kx * c.c[n - k];
                dc += kx * s.c[n - k];
            }
            s.c[n] = ds / n as f64;
            c.c[n] = sign * dc / n as f64;
        }
        (s, c)
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        self.trig_pair(-1.0)
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Self {
        let (s, c) = self.sin_cos();
        s / c
    }

    pub fn cot(&self) -> Self {
        let (s, c) = self.sin_cos();
        c / s
    }

    pub fn sec(&self) -> Self {
        self.cos().recip()
    }

    pub fn csc(&self) -> Self {
        self.sin().recip()
    }

    pub fn sinh_cosh(&self) -> (Self, Self) {
        self.trig_pair(1.0)
    }

    pub fn sinh(&self) -> Self {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Self {
        self.sinh_cosh().1
    }

    pub fn coth(&self) -> Self {
        let (s, c) = self.sinh_cosh();
        c / s
    }

    /// Integrates `f'` from a known base value.
    fn from_derivative_series(value: f64, deriv: Self, order: usize) -> Self {
        deriv.integrate(value).truncate(order)
    }

    pub fn acos(&self) -> Self {
        let order = self.order();
        if order == 0 {
            return Self::constant(self.c[0].acos(), 0);
        }
        let one = Self::constant(1.0, order);
        let d = -(self.diff() / (one - self.square()).sqrt().truncate(order - 1));
        Self::from_derivative_series(self.c[0].acos(), d, order)
    }

    pub fn asin(&self) -> Self {
        let order = self.order();
        if order == 0 {
            return Self::constant(self.c[0].asin(), 0);
        }
        let one = Self::constant(1.0, order);
        let d = self.diff() / (one - self.square()).sqrt().truncate(order - 1);
        Self::from_derivative_series(self.c[0].asin(), d, order)
    }

    pub fn atan(&self) -> Self {
        let order = self.order();
        if order == 0 {
            return Self::constant(self.c[0].atan(), 0);
        }
        let one = Self::constant(1.0, order);
        let d = self.diff() / (one + self.square()).truncate(order - 1);
        Self::from_derivative_series(self.c[0].atan(), d, order)
    }

    pub fn asinh(&self) -> Self {
        let order = self.order();
        if order == 0 {
            return Self::constant(self.c[0].asinh(), 0);
        }
        let one = Self::constant(1.0, order);
        let d = self.diff() / (one + self.square()).sqrt().truncate(order - 1);
        Self::from_derivative_series(self.c[0].asinh(), d, order)
    }

    pub fn acosh(&self) -> Self {
        let order = self.order();
        if order == 0 {
            return Self::constant(self.c[0].acosh(), 0);
        }
        let one = Self::constant(1.0, order);
        let d = self.diff() / (self.square() - one).sqrt().truncate(order - 1);
        Self::from_derivative_series(self.c[0].acosh(), d, order)
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        let mut s = Series::zeros(self.binary_len(&rhs) - 1);
        for j in 0..s.len {
            s.c[j] = self.c[j] + rhs.c[j];
        }
        s
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        let mut s = Series::zeros(self.binary_len(&rhs) - 1);
        for j in 0..s.len {
            s.c[j] = self.c[j] - rhs.c[j];
        }
        s
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        let mut s = Series::zeros(self.binary_len(&rhs) - 1);
        for n in 0..s.len {
            let mut acc = 0.0;
            for j in 0..=n {
                acc += self.c[j] * rhs.c[n - j];
            }
            s.c[n] = acc;
        }
        s
    }
}

impl Div for Series {
    type Output = Series;
    fn div(self, rhs: Series) -> Series {
        let mut q = Series::zeros(self.binary_len(&rhs) - 1);
        for n in 0..q.len {
            let mut acc = self.c[n];
            for j in 1..=n {
                acc -= rhs.c[j] * q.c[n - j];
            }
            q.c[n] = acc / rhs.c[0];
        }
        q
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(mut self) -> Series {
        for j in 0..self.len {
            self.c[j] = -self.c[j];
        }
        self
    }
}

impl Add<f64> for Series {
    type Output = Series;
    fn add(mut self, rhs: f64) -> Series {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Series {
    type Output = Series;
    fn sub(mut self, rhs: f64) -> Series {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Series {
    type Output = Series;
    fn mul(mut self, rhs: f64) -> Series {
        for j in 0..self.len {
            self.c[j] *= rhs;
        }
        self
    }
}

impl Div<f64> for Series {
    type Output = Series;
    fn div(self, rhs: f64) -> Series {
        self * (1.0 / rhs)
    }
}

impl Add<Series> for f64 {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        rhs + self
    }
}

impl Sub<Series> for f64 {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        -rhs + self
    }
}

impl Mul<Series> for f64 {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        rhs * self
    }
}

impl Div<Series> for f64 {
    type Output = Series;
    fn div(self, rhs: Series) -> Series {
        Series::constant(self, rhs.order()) / rhs
    }
}
