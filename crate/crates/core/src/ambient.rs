//! The product space L^m(c) x R.
//!
//! Points and vectors live in the standard embedding: the space-form factor
//! sits in R^{m+1} (Euclidean for c = 0, 1 and Minkowski with signature
//! (-, +, ..., +) for c = -1) and the last coordinate is the height `t`.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientSpace {
    c: i32,
    m: usize,
}

impl AmbientSpace {
    pub fn new(c: i32, m: usize) -> Result<Self> {
        if !(-1..=1).contains(&c) {
            return Err(GeometryError::InvalidInput(format!("curvature sign c={c} not in {{-1,0,1}}")));
        }
        if m < 2 {
            return Err(GeometryError::InvalidInput(format!("dimension m={m} must be at least 2")));
        }
        Ok(Self { c, m })
    }

    pub fn c(&self) -> i32 {
        self.c
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn cf(&self) -> f64 {
        self.c as f64
    }

    fn mf(&self) -> f64 {
        self.m as f64
    }

    /// Signature of horizontal coordinate `i` in the embedding.
    pub fn horizontal_sign(&self, i: usize) -> f64 {
        if self.c == -1 && i == 0 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn inner(&self, x: &AmbientVector, y: &AmbientVector) -> f64 {
        let h: f64 = x
            .horizontal
            .iter()
            .zip(&y.horizontal)
            .enumerate()
            .map(|(i, (a, b))| self.horizontal_sign(i) * a * b)
            .sum();
        h + x.vertical * y.vertical
    }

    /// Ric(xi, xi) for a unit normal making angle alpha with the vertical.
    pub fn ricci_normal(&self, alpha: f64) -> f64 {
        self.cf() * (self.mf() - 1.0) * alpha.sin().powi(2)
    }

    /// Coefficient of T in the tangential part of Ric(xi).
    pub fn ricci_tangent_coefficient(&self, alpha: f64) -> f64 {
        -self.cf() * (self.mf() - 1.0) * alpha.cos()
    }

    /// R(X, Y)Z of the product metric.
    pub fn curvature_tensor(&self, x: &AmbientVector, y: &AmbientVector, z: &AmbientVector) -> AmbientVector {
        let dim = x.horizontal.len();
        let mut out = AmbientVector::zero(dim);
        if self.c == 0 {
            return out;
        }
        let yz = self.inner(y, z);
        let xz = self.inner(x, z);
        let (xt, yt, zt) = (x.vertical, y.vertical, z.vertical);
        let cx = yz - yt * zt;
        let cy = -xz + xt * zt;
        let ct = xz * yt - yz * xt;
        for i in 0..dim {
            out.horizontal[i] = cx * x.horizontal[i] + cy * y.horizontal[i];
        }
        out.vertical = cx * xt + cy * yt + ct;
        out.scale(self.cf())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientVector {
    pub horizontal: Vec<f64>,
    pub vertical: f64,
}

impl AmbientVector {
    pub fn new(horizontal: Vec<f64>, vertical: f64) -> Self {
        Self { horizontal, vertical }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            horizontal: vec![0.0; dim],
            vertical: 0.0,
        }
    }

    /// The unit vertical field.
    pub fn dt(dim: usize) -> Self {
        Self {
            horizontal: vec![0.0; dim],
            vertical: 1.0,
        }
    }

    pub fn scale(mut self, a: f64) -> Self {
        self.horizontal.iter_mut().for_each(|v| *v *= a);
        self.vertical *= a;
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            horizontal: self.horizontal.iter().zip(&other.horizontal).map(|(a, b)| a + b).collect(),
            vertical: self.vertical + other.vertical,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.clone().scale(-1.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.horizontal.iter().fold(self.vertical.abs(), |m, v| m.max(v.abs()))
    }
}

/// Splitting of the vertical field along a hypersurface: d_t = T + cos(alpha) xi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalDecomposition {
    pub cos_alpha: f64,
    pub tangent_norm: f64,
}

impl NormalDecomposition {
    pub fn from_cos_alpha(cos_alpha: f64) -> Self {
        Self {
            cos_alpha,
            tangent_norm: (1.0 - cos_alpha * cos_alpha).max(0.0).sqrt(),
        }
    }

    pub fn from_angle(alpha: f64) -> Self {
        Self {
            cos_alpha: alpha.cos(),
            tangent_norm: alpha.sin().abs(),
        }
    }

    pub fn identity_defect(&self) -> f64 {
        self.cos_alpha.powi(2) + self.tangent_norm.powi(2) - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn space(c: i32, m: usize) -> AmbientSpace {
        AmbientSpace::new(c, m).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(AmbientSpace::new(2, 3).is_err());
        assert!(AmbientSpace::new(1, 1).is_err());
    }

    #[test]
    fn ricci_values() {
        assert_abs_diff_eq!(space(1, 2).ricci_normal(FRAC_PI_2), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(space(-1, 3).ricci_normal(0.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(space(1, 5).ricci_normal(FRAC_PI_2), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(space(1, 2).ricci_tangent_coefficient(FRAC_PI_2), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(space(1, 4).ricci_tangent_coefficient(0.0), -3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(space(-1, 3).ricci_tangent_coefficient(PI), -2.0, epsilon = 1e-15);
    }

    #[test]
    fn flat_and_degenerate_curvature() {
        let x = AmbientVector::new(vec![0.0, 1.0, 0.3], 0.2);
        let y = AmbientVector::new(vec![0.0, -0.4, 1.0], 0.7);
        let z = AmbientVector::new(vec![0.0, 0.5, 0.5], -1.0);
        assert_eq!(space(0, 2).curvature_tensor(&x, &y, &z).max_abs(), 0.0);
        assert!(space(1, 2).curvature_tensor(&x, &x, &z).max_abs() < 1e-15);
    }

    #[test]
    fn orthonormal_horizontal_triple() {
        // Z = Y, all horizontal and orthonormal: only <Y,Z>X survives.
        let s = space(1, 3);
        let x = AmbientVector::new(vec![0.0, 1.0, 0.0, 0.0], 0.0);
        let y = AmbientVector::new(vec![0.0, 0.0, 1.0, 0.0], 0.0);
        let r = s.curvature_tensor(&x, &y, &y);
        assert!(r.sub(&x).max_abs() < 1e-15);
    }

    // Brute-force expansion of the six terms, written term by term.
    fn six_terms(s: &AmbientSpace, x: &AmbientVector, y: &AmbientVector, z: &AmbientVector) -> AmbientVector {
        let dim = x.horizontal.len();
        let dt = AmbientVector::dt(dim);
        let ip = |a: &AmbientVector, b: &AmbientVector| s.inner(a, b);
        let t1 = x.clone().scale(ip(y, z));
        let t2 = y.clone().scale(-ip(x, z));
        let t3 = x.clone().scale(-ip(y, &dt) * ip(z, &dt));
        let t4 = y.clone().scale(ip(x, &dt) * ip(z, &dt));
        let t5 = dt.clone().scale(ip(x, z) * ip(y, &dt));
        let t6 = dt.clone().scale(-ip(y, z) * ip(x, &dt));
        t1.add(&t2).add(&t3).add(&t4).add(&t5).add(&t6).scale(s.c() as f64)
    }

    fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> AmbientVector {
        AmbientVector::new((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect(), rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn matches_term_by_term_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for c in [-1, 0, 1] {
            let s = space(c, 4);
            for _ in 0..50 {
                let x = random_vector(&mut rng, 5);
                let y = random_vector(&mut rng, 5);
                let z = random_vector(&mut rng, 5);
                let d = s.curvature_tensor(&x, &y, &z).sub(&six_terms(&s, &x, &y, &z));
                assert!(d.max_abs() < 1e-14);
            }
        }
    }

    // Orthonormal frame of T_p(L x R) at p = e_0: xi first, then Gram-Schmidt.
    fn frame_with_normal(s: &AmbientSpace, xi: &AmbientVector) -> Vec<AmbientVector> {
        let dim = s.m() + 1;
        let mut basis: Vec<AmbientVector> = (1..dim)
            .map(|i| {
                let mut h = vec![0.0; dim];
                h[i] = 1.0;
                AmbientVector::new(h, 0.0)
            })
            .collect();
        basis.push(AmbientVector::dt(dim));
        let mut out = vec![xi.clone()];
        for b in basis {
            let mut v = b;
            for e in &out {
                let p = s.inner(&v, e);
                v = v.sub(&e.clone().scale(p));
            }
            let n = s.inner(&v, &v);
            if n > 1e-10 {
                out.push(v.scale(1.0 / n.sqrt()));
            }
        }
        out.remove(0);
        out
    }

    fn random_unit_normal(rng: &mut ChaCha8Rng, s: &AmbientSpace) -> AmbientVector {
        let dim = s.m() + 1;
        let mut h: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        h[0] = 0.0;
        let v = AmbientVector::new(h, rng.gen_range(-1.0..1.0));
        let n = s.inner(&v, &v).sqrt();
        v.scale(1.0 / n)
    }

    #[test]
    fn ricci_contractions_over_random_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for c in [-1, 0, 1] {
            for m in 2..=6 {
                let s = space(c, m);
                for _ in 0..20 {
                    let xi = random_unit_normal(&mut rng, &s);
                    let frame = frame_with_normal(&s, &xi);
                    assert_eq!(frame.len(), m);
                    let cos_alpha = xi.vertical;
                    let alpha = cos_alpha.acos();
                    let dt = AmbientVector::dt(m + 1);
                    let ric: f64 = frame.iter().map(|e| s.inner(&s.curvature_tensor(e, &xi, &xi), e)).sum();
                    assert_abs_diff_eq!(ric, s.ricci_normal(alpha), epsilon = 1e-13);
                    // Tangential Ricci: compare <Ric(xi), e_k> with coefficient * <T, e_k>.
                    let t = dt.sub(&xi.clone().scale(cos_alpha));
                    for ek in &frame {
                        let lhs: f64 = frame.iter().map(|e| s.inner(&s.curvature_tensor(e, &xi, ek), e)).sum();
                        let rhs = s.ricci_tangent_coefficient(alpha) * s.inner(&t, ek);
                        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn decomposition_defect() {
        let d = NormalDecomposition::from_cos_alpha(0.3);
        assert_abs_diff_eq!(d.identity_defect(), 0.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn antisymmetric(c in -1i32..=1, v in prop::collection::vec(-2.0f64..2.0, 12)) {
            let s = space(c, 2);
            let x = AmbientVector::new(v[0..3].to_vec(), v[3]);
            let y = AmbientVector::new(v[4..7].to_vec(), v[7]);
            let z = AmbientVector::new(v[8..11].to_vec(), v[11]);
            let sum = s.curvature_tensor(&x, &y, &z).add(&s.curvature_tensor(&y, &x, &z));
            prop_assert!(sum.max_abs() < 1e-13);
        }

        #[test]
        fn ricci_normalization(c in -1i32..=1, m in 2usize..10, alpha in -7.0f64..7.0) {
            let s = space(c, m);
            let lhs = s.ricci_normal(alpha) + (c as f64) * (m as f64 - 1.0) * alpha.cos().powi(2);
            prop_assert!((lhs - (c as f64) * (m as f64 - 1.0)).abs() < 1e-12);
        }
    }
}
