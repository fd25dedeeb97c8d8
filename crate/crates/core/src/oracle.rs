//! Finite-difference geometry of explicit immersions.
//!
//! Everything here is computed from the immersion map alone: tangent vectors,
//! the unit normal (generalized cross product), both fundamental forms, the
//! shape operator, and divergence-form Laplace-Beltrami. Nothing is borrowed
//! from the closed-form curvature code so the two can be compared honestly.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::ambient::NormalDecomposition;
use crate::error::{GeometryError, Result};
use crate::profiles::{RotationKind, RotationProfile};

pub const DEFAULT_STEP: f64 = 1e-3;

type MapFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type ChartFn<'a> = &'a dyn Fn(&[f64]) -> f64;

/// Which sign of the cross-product normal is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalConvention {
    /// The unit normal with negative vertical component (rotation hypersurfaces).
    VerticalDown,
    /// The profile tangent turned by a quarter in the (radial, vertical) plane:
    /// (k', h') becomes (-h', k') (rotation surfaces).
    ProfileQuarterTurn,
}

#[derive(Clone)]
pub struct ImmersionSampler {
    map: MapFn,
    /// Chart dimension m; the target is R^{m+2}.
    dim: usize,
    c: i32,
    pub step: f64,
    pub richardson: bool,
    pub convention: NormalConvention,
}

impl std::fmt::Debug for ImmersionSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImmersionSampler")
            .field("dim", &self.dim)
            .field("c", &self.c)
            .field("step", &self.step)
            .field("richardson", &self.richardson)
            .field("convention", &self.convention)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalForms {
    pub first: DMatrix<f64>,
    pub second: DMatrix<f64>,
    /// Coordinate tangent vectors in R^{m+2}.
    pub frame: Vec<DVector<f64>>,
    pub normal: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCurvatures {
    /// Ascending.
    pub principal: Vec<f64>,
    pub mean: f64,
    pub norm_a_sq: f64,
    /// Intrinsic curvature, surfaces only.
    pub gauss: Option<f64>,
    pub cos_alpha: f64,
}

fn hyperspherical(v: &[f64]) -> Vec<f64> {
    // Orthogonal chart of S^{n} from n angles.
    let mut out = Vec::with_capacity(v.len() + 1);
    let mut prod = 1.0;
    for a in v {
        out.push(prod * a.cos());
        prod *= a.sin();
    }
    out.push(prod);
    out
}

impl ImmersionSampler {
    pub fn new(
        map: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        dim: usize,
        c: i32,
        step: f64,
        convention: NormalConvention,
    ) -> Result<Self> {
        if !(1e-6..=1e-2).contains(&step) {
            return Err(GeometryError::InvalidInput(format!("finite-difference step {step} outside [1e-6, 1e-2]")));
        }
        if c != 1 && c != -1 {
            return Err(GeometryError::InvalidInput("the oracle models c = 1 (sphere) or c = -1 (hyperboloid)".into()));
        }
        if dim < 2 {
            return Err(GeometryError::InvalidInput("chart dimension >= 2 required".into()));
        }
        Ok(Self {
            map: Arc::new(map),
            dim,
            c,
            step,
            richardson: true,
            convention,
        })
    }

    /// (cos s, phi(v) sin s, h(s)) in R^{m+1} x R; chart (s, v_1, ..., v_{m-1}).
    pub fn rotation_hypersurface(m: usize, height: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::new(
            move |x: &[f64]| {
                let (s, v) = (x[0], &x[1..]);
                let mut p = vec![s.cos()];
                p.extend(hyperspherical(v).into_iter().map(|q| q * s.sin()));
                p.push(height(s));
                p
            },
            m,
            1,
            DEFAULT_STEP,
            NormalConvention::VerticalDown,
        )
    }

    /// (sin k, cos k cos t, cos k sin t, h) in S^2 x R, or
    /// (cosh k, sinh k cos t, sinh k sin t, h) in H^2 x R; chart (r, t).
    pub fn rotation_surface(
        c: i32,
        radial: impl Fn(f64) -> f64 + Send + Sync + 'static,
        height: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(
            move |x: &[f64]| {
                let (k, th) = (radial(x[0]), x[1]);
                if c == 1 {
                    vec![k.sin(), k.cos() * th.cos(), k.cos() * th.sin(), height(x[0])]
                } else {
                    vec![k.cosh(), k.sinh() * th.cos(), k.sinh() * th.sin(), height(x[0])]
                }
            },
            2,
            c,
            DEFAULT_STEP,
            NormalConvention::ProfileQuarterTurn,
        )
    }

    /// Sampler for a rotation profile; values only are taken from the profile.
    pub fn from_profile(profile: &RotationProfile, m: usize, reference: f64) -> Result<Self> {
        let p = profile.clone();
        let height = move |t: f64| match p.height_value(t) {
            Some(h) => h,
            None => p.height_between(reference, t).unwrap_or(f64::NAN),
        };
        match profile.kind {
            RotationKind::SphereHypersurface => Self::rotation_hypersurface(m, height),
            kind => {
                let q = profile.clone();
                let radial = move |t: f64| q.primary(t, 0).map(|s| s.value()).unwrap_or(f64::NAN);
                Self::rotation_surface(kind.c(), radial, height)
            }
        }
    }

    pub fn with_step(mut self, step: f64) -> Result<Self> {
        if !(1e-6..=1e-2).contains(&step) {
            return Err(GeometryError::InvalidInput(format!("finite-difference step {step} outside [1e-6, 1e-2]")));
        }
        self.step = step;
        Ok(self)
    }

    /// Plain central differences, O(step^2).
    pub fn plain(mut self) -> Self {
        self.richardson = false;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self) -> i32 {
        self.c
    }

    fn eval(&self, x: &[f64]) -> Result<DVector<f64>> {
        let p = (self.map)(x);
        if p.len() != self.dim + 2 || p.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::Domain {
                what: "immersion not defined",
                value: x[0],
            });
        }
        Ok(DVector::from_vec(p))
    }

    fn sign(&self, i: usize) -> f64 {
        if self.c == -1 && i == 0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Ambient inner product of R^{m+2} (Minkowski on the first slot for c = -1).
    pub fn inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.iter().zip(b.iter()).enumerate().map(|(i, (x, y))| self.sign(i) * x * y).sum()
    }

    /// Inner product restricted to the horizontal factor.
    fn inner_horizontal(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        let n = self.dim + 1;
        (0..n).map(|i| self.sign(i) * a[i] * b[i]).sum()
    }

    fn shifted(x: &[f64], i: usize, d: f64) -> Vec<f64> {
        let mut y = x.to_vec();
        y[i] += d;
        y
    }

    fn forms_with(&self, x: &[f64], h: f64) -> Result<FundamentalForms> {
        let m = self.dim;
        if x.len() != m {
            return Err(GeometryError::InvalidInput(format!("chart point needs {m} coordinates")));
        }
        let p0 = self.eval(x)?;
        let mut frame = Vec::with_capacity(m);
        let mut plus = Vec::with_capacity(m);
        let mut minus = Vec::with_capacity(m);
        for i in 0..m {
            let a = self.eval(&Self::shifted(x, i, h))?;
            let b = self.eval(&Self::shifted(x, i, -h))?;
            frame.push((&a - &b) / (2.0 * h));
            plus.push(a);
            minus.push(b);
        }
        let mut dd = vec![vec![DVector::zeros(m + 2); m]; m];
        for i in 0..m {
            dd[i][i] = (&plus[i] - 2.0 * &p0 + &minus[i]) / (h * h);
            for j in (i + 1)..m {
                let mut y = x.to_vec();
                let mut corner = |si: f64, sj: f64| -> Result<DVector<f64>> {
                    y.copy_from_slice(x);
                    y[i] += si * h;
                    y[j] += sj * h;
                    self.eval(&y)
                };
                let v = (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?) / (4.0 * h * h);
                dd[i][j] = v.clone();
                dd[j][i] = v;
            }
        }
        let first = DMatrix::from_fn(m, m, |i, j| self.inner(&frame[i], &frame[j]));
        let eig = first.clone().symmetric_eigen();
        let floor = (10.0 * self.step).powi(2);
        if eig.eigenvalues.iter().any(|l| *l < floor) {
            return Err(GeometryError::Singularity {
                what: "chart degenerates near point",
                at: x[0],
            });
        }
        let normal = self.normal(&p0, &frame)?;
        let second = DMatrix::from_fn(m, m, |i, j| self.inner(&dd[i][j], &normal));
        Ok(FundamentalForms { first, second, frame, normal })
    }

    /// Unit normal orthogonal to the position of the first factor and to the frame.
    fn normal(&self, p: &DVector<f64>, frame: &[DVector<f64>]) -> Result<DVector<f64>> {
        let n = self.dim + 2;
        let mut position = p.clone();
        position[n - 1] = 0.0;
        // Rows: horizontal position, then frame; the cofactor expansion along an
        // appended row gives w with w . e = det[rows; e].
        let mut rows = DMatrix::zeros(n - 1, n);
        rows.row_mut(0).copy_from(&position.transpose());
        for (i, f) in frame.iter().enumerate() {
            rows.row_mut(i + 1).copy_from(&f.transpose());
        }
        let mut w = DVector::zeros(n);
        for a in 0..n {
            let minor = rows.clone().remove_column(a);
            let sgn = if (n - 1 + a).is_multiple_of(2) { 1.0 } else { -1.0 };
            // Raise the index so <w, e>_ambient = det[rows; e].
            w[a] = self.sign(a) * sgn * minor.determinant();
        }
        let norm_sq = self.inner(&w, &w);
        if !(norm_sq > 0.0) {
            return Err(GeometryError::Numerical("degenerate normal".into()));
        }
        let mut xi = w / norm_sq.sqrt();
        let flip = match self.convention {
            NormalConvention::VerticalDown => xi[n - 1] > 0.0,
            NormalConvention::ProfileQuarterTurn => {
                // Quarter turn of the profile tangent: the radial component of xi
                // against the radial component of the r-tangent must have the
                // orientation of (k', h') -> (-h', k').
                let radial = self.radial_direction(p);
                let (tk, th) = (self.inner(&frame[0], &radial), frame[0][n - 1]);
                let (nk, nh) = (self.inner(&xi, &radial), xi[n - 1]);
                tk * nh - th * nk < 0.0
            }
        };
        if flip {
            xi = -xi;
        }
        Ok(xi)
    }

    /// Unit vector of increasing distance from the axis point, tangent to the first factor.
    fn radial_direction(&self, p: &DVector<f64>) -> DVector<f64> {
        // d/dk of (sin k, cos k v) is (cos k, -sin k v); of (cosh k, sinh k v) is (sinh k, cosh k v).
        let n = self.dim + 2;
        let x0 = p[0];
        let rest = (1..n - 1).map(|i| p[i] * p[i]).sum::<f64>().sqrt();
        let mut d = DVector::zeros(n);
        if self.c == 1 {
            d[0] = rest;
            for i in 1..n - 1 {
                d[i] = -x0 * p[i] / rest;
            }
        } else {
            d[0] = rest;
            for i in 1..n - 1 {
                d[i] = x0 * p[i] / rest;
            }
        }
        d
    }

    fn richardson_matrix(&self, coarse: DMatrix<f64>, fine: DMatrix<f64>) -> DMatrix<f64> {
        (fine * 4.0 - coarse) / 3.0
    }

    pub fn fundamental_forms(&self, x: &[f64]) -> Result<FundamentalForms> {
        let coarse = self.forms_with(x, self.step)?;
        if !self.richardson {
            return Ok(coarse);
        }
        let fine = self.forms_with(x, self.step / 2.0)?;
        Ok(FundamentalForms {
            first: self.richardson_matrix(coarse.first, fine.first.clone()),
            second: self.richardson_matrix(coarse.second, fine.second.clone()),
            frame: coarse
                .frame
                .iter()
                .zip(&fine.frame)
                .map(|(a, b)| (b * 4.0 - a) / 3.0)
                .collect(),
            normal: fine.normal,
        })
    }

    /// Shape operator matrix S = g^{-1} h in the coordinate basis.
    fn shape_operator(forms: &FundamentalForms) -> Result<DMatrix<f64>> {
        let inv = forms
            .first
            .clone()
            .try_inverse()
            .ok_or_else(|| GeometryError::Numerical("first form not invertible".into()))?;
        Ok(inv * &forms.second)
    }

    pub fn curvatures(&self, x: &[f64]) -> Result<OracleCurvatures> {
        let forms = self.fundamental_forms(x)?;
        let chol = forms
            .first
            .clone()
            .cholesky()
            .ok_or_else(|| GeometryError::Numerical("first form not positive definite".into()))?;
        let l_inv = chol
            .l()
            .try_inverse()
            .ok_or_else(|| GeometryError::Numerical("singular Cholesky factor".into()))?;
        let sym = &l_inv * &forms.second * l_inv.transpose();
        let sym = (&sym + sym.transpose()) * 0.5;
        let mut principal: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
        principal.sort_by(f64::total_cmp);
        let m = self.dim as f64;
        let mean = principal.iter().sum::<f64>() / m;
        let norm_a_sq = principal.iter().map(|l| l * l).sum();
        let gauss = if self.dim == 2 {
            let g_h = DMatrix::from_fn(2, 2, |i, j| self.inner_horizontal(&forms.frame[i], &forms.frame[j]));
            let ambient = self.c as f64 * g_h.determinant() / forms.first.determinant();
            Some(forms.second.determinant() / forms.first.determinant() + ambient)
        } else {
            None
        };
        Ok(OracleCurvatures {
            principal,
            mean,
            norm_a_sq,
            gauss,
            cos_alpha: forms.normal[self.dim + 1],
        })
    }

    pub fn mean_curvature(&self, x: &[f64]) -> Result<f64> {
        Ok(self.curvatures(x)?.mean)
    }

    /// cos(alpha) = <d/dt, xi> and |T| from the numerically computed normal.
    pub fn angle_and_t(&self, x: &[f64]) -> Result<NormalDecomposition> {
        let forms = self.fundamental_forms(x)?;
        Ok(NormalDecomposition::from_cos_alpha(forms.normal[self.dim + 1].clamp(-1.0, 1.0)))
    }

    fn cos_alpha_at(&self, x: &[f64]) -> Result<f64> {
        Ok(self.fundamental_forms(x)?.normal[self.dim + 1])
    }

    fn laplace_beltrami_with(&self, f: ChartFn<'_>, x: &[f64], h: f64) -> Result<f64> {
        let m = self.dim;
        // V^i = sqrt|g| g^{ij} d_j f, then divergence.
        let flux = |y: &[f64]| -> Result<Vec<f64>> {
            let forms = self.forms_with(y, h)?;
            let det = forms.first.determinant();
            let inv = forms
                .first
                .clone()
                .try_inverse()
                .ok_or_else(|| GeometryError::Numerical("first form not invertible".into()))?;
            let grad: Vec<f64> = (0..m)
                .map(|j| (f(&Self::shifted(y, j, h)) - f(&Self::shifted(y, j, -h))) / (2.0 * h))
                .collect();
            Ok((0..m).map(|i| det.sqrt() * (0..m).map(|j| inv[(i, j)] * grad[j]).sum::<f64>()).collect())
        };
        let det0 = self.forms_with(x, h)?.first.determinant();
        let mut div = 0.0;
        for i in 0..m {
            let a = flux(&Self::shifted(x, i, h))?;
            let b = flux(&Self::shifted(x, i, -h))?;
            div += (a[i] - b[i]) / (2.0 * h);
        }
        let out = div / det0.sqrt();
        if !out.is_finite() {
            return Err(GeometryError::Numerical("Laplace-Beltrami not finite".into()));
        }
        Ok(out)
    }

    /// Divergence-form Laplace-Beltrami of a chart function.
    pub fn laplace_beltrami(&self, f: ChartFn<'_>, x: &[f64]) -> Result<f64> {
        let coarse = self.laplace_beltrami_with(f, x, self.step)?;
        if !self.richardson {
            return Ok(coarse);
        }
        let fine = self.laplace_beltrami_with(f, x, self.step / 2.0)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    /// Height coordinate of the immersion as a chart function.
    pub fn height_function(&self) -> impl Fn(&[f64]) -> f64 + '_ {
        move |x: &[f64]| (self.map)(x)[self.dim + 1]
    }

    /// Delta(height) - m cos(alpha) H.
    pub fn height_identity_defect(&self, x: &[f64]) -> Result<f64> {
        let lap = self.laplace_beltrami(&self.height_function(), x)?;
        let curv = self.curvatures(x)?;
        Ok(lap - self.dim as f64 * curv.cos_alpha * curv.mean)
    }

    /// max_i |d_i cos(alpha) + <A d_i, T>|.
    pub fn angle_derivative_defect(&self, x: &[f64]) -> Result<f64> {
        let forms = self.fundamental_forms(x)?;
        let m = self.dim;
        let shape = Self::shape_operator(&forms)?;
        // <d_k, T> = <d_k, d/dt> is the vertical component of the frame vector.
        let t_low: Vec<f64> = forms.frame.iter().map(|f| f[m + 1]).collect();
        let h = self.step;
        let mut worst: f64 = 0.0;
        for i in 0..m {
            let d = (self.cos_alpha_at(&Self::shifted(x, i, h))? - self.cos_alpha_at(&Self::shifted(x, i, -h))?) / (2.0 * h);
            let a_t: f64 = (0..m).map(|k| shape[(k, i)] * t_low[k]).sum();
            worst = worst.max((d + a_t).abs());
        }
        Ok(worst)
    }

    /// Largest component of (nabla_X A)Y - (nabla_Y A)X - c cos(alpha) (<Y,T> X - <X,T> Y)
    /// on coordinate fields, paired with coordinate fields.
    pub fn codazzi_defect(&self, x: &[f64]) -> Result<f64> {
        let m = self.dim;
        let h = self.step;
        let forms = self.fundamental_forms(x)?;
        let inv = forms
            .first
            .clone()
            .try_inverse()
            .ok_or_else(|| GeometryError::Numerical("first form not invertible".into()))?;
        // Christoffel symbols of the first kind from <d_i d_j f, d_l f>.
        let second_derivs = self.second_derivatives(x)?;
        let gamma1 = |i: usize, j: usize, l: usize| self.inner(&second_derivs[i][j], &forms.frame[l]);
        let gamma = |l: usize, i: usize, j: usize| (0..m).map(|q| inv[(l, q)] * gamma1(i, j, q)).sum::<f64>();
        let dh: Vec<DMatrix<f64>> = (0..m)
            .map(|i| -> Result<DMatrix<f64>> {
                let a = self.fundamental_forms(&Self::shifted(x, i, h))?.second;
                let b = self.fundamental_forms(&Self::shifted(x, i, -h))?.second;
                Ok((a - b) / (2.0 * h))
            })
            .collect::<Result<_>>()?;
        let hh = &forms.second;
        let g = &forms.first;
        let theta = forms.normal[m + 1];
        let t: Vec<f64> = forms.frame.iter().map(|f| f[m + 1]).collect();
        let c = self.c as f64;
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let nab_i = dh[i][(j, k)] - (0..m).map(|l| gamma(l, i, j) * hh[(l, k)] + gamma(l, i, k) * hh[(j, l)]).sum::<f64>();
                    let nab_j = dh[j][(i, k)] - (0..m).map(|l| gamma(l, j, i) * hh[(l, k)] + gamma(l, j, k) * hh[(i, l)]).sum::<f64>();
                    let rhs = c * theta * (t[j] * g[(i, k)] - t[i] * g[(j, k)]);
                    worst = worst.max((nab_i - nab_j - rhs).abs());
                }
            }
        }
        Ok(worst)
    }

    fn second_derivatives(&self, x: &[f64]) -> Result<Vec<Vec<DVector<f64>>>> {
        let m = self.dim;
        let h = self.step;
        let p0 = self.eval(x)?;
        let mut dd = vec![vec![DVector::zeros(m + 2); m]; m];
        for i in 0..m {
            for j in 0..m {
                dd[i][j] = if i == j {
                    (self.eval(&Self::shifted(x, i, h))? - 2.0 * &p0 + self.eval(&Self::shifted(x, i, -h))?) / (h * h)
                } else {
                    let e = |si: f64, sj: f64| {
                        let mut y = x.to_vec();
                        y[i] += si * h;
                        y[j] += sj * h;
                        self.eval(&y)
                    };
                    (e(1.0, 1.0)? - e(1.0, -1.0)? - e(-1.0, 1.0)? + e(-1.0, -1.0)?) / (4.0 * h * h)
                };
            }
        }
        Ok(dd)
    }

    /// Delta(cos alpha) + m <grad H, d/dt> + cos(alpha) (|A|^2 + Ric(xi, xi)).
    pub fn angle_laplacian_defect(&self, x: &[f64]) -> Result<f64> {
        let m = self.dim;
        let h = self.step;
        let theta_fn = |y: &[f64]| self.cos_alpha_at(y).unwrap_or(f64::NAN);
        let lap = self.laplace_beltrami(&theta_fn, x)?;
        let forms = self.fundamental_forms(x)?;
        let curv = self.curvatures(x)?;
        let inv = forms
            .first
            .clone()
            .try_inverse()
            .ok_or_else(|| GeometryError::Numerical("first form not invertible".into()))?;
        let dh: Vec<f64> = (0..m)
            .map(|i| Ok((self.mean_curvature(&Self::shifted(x, i, h))? - self.mean_curvature(&Self::shifted(x, i, -h))?) / (2.0 * h)))
            .collect::<Result<_>>()?;
        let t: Vec<f64> = forms.frame.iter().map(|f| f[m + 1]).collect();
        let grad_dot_t: f64 = (0..m).map(|i| (0..m).map(|j| inv[(i, j)] * dh[i] * t[j]).sum::<f64>()).sum();
        let xi_h = self.inner_horizontal(&forms.normal, &forms.normal);
        let ricci = self.c as f64 * (m as f64 - 1.0) * xi_h;
        let theta = forms.normal[m + 1];
        Ok(lap + m as f64 * grad_dot_t + theta * (curv.norm_a_sq + ricci))
    }
}
