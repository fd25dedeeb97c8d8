//! Polynomial interpolation through sampled values.
//!
//! Two routes: an exact solve of the Vandermonde system over the rationals
//! (the float samples are converted losslessly, so the only error left is in
//! the data), and an ordinary floating LU solve used as a cross-check.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GeometryError, Result};

fn to_rational(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| GeometryError::InvalidInput(format!("cannot fit non-finite sample {v}")))
}

fn check(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(GeometryError::InvalidInput("fit needs matching, non-empty samples".into()));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(GeometryError::InvalidInput("interpolation nodes must be distinct".into()));
    }
    Ok(())
}

/// Exact coefficients (ascending powers) of the interpolant through (xs, ys).
pub fn vandermonde_exact(xs: &[f64], ys: &[f64]) -> Result<Vec<BigRational>> {
    check(xs, ys)?;
    let n = xs.len();
    let xr: Vec<BigRational> = xs.iter().map(|x| to_rational(*x)).collect::<Result<_>>()?;
    let mut a: Vec<Vec<BigRational>> = xr
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let mut row = Vec::with_capacity(n + 1);
            let mut p = BigRational::one();
            for _ in 0..n {
                row.push(p.clone());
                p *= x;
            }
            row.push(to_rational(*y)?);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    for col in 0..n {
        let pivot = (col..n)
            .find(|r| !a[*r][col].is_zero())
            .ok_or_else(|| GeometryError::Numerical("singular Vandermonde system".into()))?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..=n {
                    let t = &f * &a[col][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    // Scale to keep the integer division within range before converting.
    let (n, d) = (q.numer(), q.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            let shift = d.bits().saturating_sub(900) as usize;
            let scaled = BigRational::new(n >> shift, d >> shift);
            scaled.numer().to_f64().unwrap_or(f64::NAN) / scaled.denom().to_f64().unwrap_or(f64::NAN)
        }
    }
}

/// Coefficients (ascending) from the exact route, rounded to f64.
pub fn fit_exact(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    Ok(vandermonde_exact(xs, ys)?.iter().map(rational_to_f64).collect())
}

/// Coefficients (ascending) from a floating LU solve.
pub fn fit_float(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    check(xs, ys)?;
    let n = xs.len();
    let v = DMatrix::from_fn(n, n, |i, j| xs[i].powi(j as i32));
    let b = DVector::from_column_slice(ys);
    let sol = v
        .lu()
        .solve(&b)
        .ok_or_else(|| GeometryError::Numerical("singular Vandermonde system".into()))?;
    Ok(sol.iter().copied().collect())
}

/// Horner evaluation of ascending coefficients.
pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Exact evaluation, used to confirm the interpolant reproduces its data.
pub fn eval_exact(coeffs: &[BigRational], x: f64) -> Result<BigRational> {
    let x = to_rational(x)?;
    Ok(coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c))
}

/// Real roots of a x^2 + b x + c with a != 0, ascending; a double root is reported once.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-b / (2.0 * a)];
    }
    // Numerically stable pair.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut r = vec![q / a, c / q];
    r.sort_by(f64::total_cmp);
    r
}

/// Exact discriminant b^2 - 4ac from the rational values of the inputs.
pub fn discriminant_sign(a: f64, b: f64, c: f64) -> Result<i8> {
    let (a, b, c) = (to_rational(a)?, to_rational(b)?, to_rational(c)?);
    let d = &b * &b - BigRational::from_integer(BigInt::from(4)) * a * c;
    Ok(if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn recovers_integer_polynomial_exactly() {
        let p = [-1.0, 0.0, 3.0, -2.0, 0.5];
        let xs: Vec<f64> = (0..5).map(|i| i as f64 * 0.25 - 0.5).collect();
        let ys: Vec<f64> = xs.iter().map(|x| eval(&p, *x)).collect();
        let exact = vandermonde_exact(&xs, &ys).unwrap();
        for (i, x) in xs.iter().enumerate() {
            assert_eq!(eval_exact(&exact, *x).unwrap(), to_rational(ys[i]).unwrap());
        }
        for (a, b) in fit_exact(&xs, &ys).unwrap().iter().zip(p) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn quadratic_cases() {
        // -2x^2 + x - 2C^2 with C = 0.3, 0.25, 0.
        assert!(quadratic_roots(-2.0, 1.0, -0.18).is_empty());
        assert_eq!(discriminant_sign(-2.0, 1.0, -0.18).unwrap(), -1);
        assert_eq!(quadratic_roots(-2.0, 1.0, -0.125), vec![0.25]);
        assert_eq!(discriminant_sign(-2.0, 1.0, -0.125).unwrap(), 0);
        assert_eq!(quadratic_roots(-2.0, 1.0, 0.0), vec![0.0, 0.5]);
    }

    #[test]
    fn rejects_repeated_nodes() {
        assert!(fit_exact(&[0.1, 0.1], &[1.0, 2.0]).is_err());
        assert!(fit_float(&[0.1], &[f64::NAN]).is_ok());
        assert!(fit_exact(&[0.1], &[f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn routes_agree(coeffs in prop::collection::vec(-3.0f64..3.0, 1..8)) {
            let n = coeffs.len();
            let xs: Vec<f64> = (0..n).map(|i| 0.1 + 0.8 * i as f64 / n as f64).collect();
            let ys: Vec<f64> = xs.iter().map(|x| eval(&coeffs, *x)).collect();
            let e = fit_exact(&xs, &ys).unwrap();
            let f = fit_float(&xs, &ys).unwrap();
            for i in 0..n {
                prop_assert!((e[i] - coeffs[i]).abs() < 1e-6);
                prop_assert!((e[i] - f[i]).abs() < 1e-6);
            }
            assert_relative_eq!(eval(&e, 0.37), eval(&coeffs, 0.37), epsilon = 1e-9);
        }
    }
}
