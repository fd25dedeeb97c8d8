//! Biharmonicity residuals.
//!
//! Every function returns raw residuals (zero on biharmonic data). Where an
//! equation is written as `lhs = rhs` the residual is `rhs - lhs`.

use serde::{Deserialize, Serialize};

use crate::ambient::AmbientSpace;
use crate::error::{guard_nonzero, GeometryError, Result, SINGULAR_MARGIN};
use crate::jet::Series;
use crate::profiles::{ProfileJet, ProfileJet4, RotationKind};

/// Default absolute tolerance for residual checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub names: Vec<String>,
    pub values: Vec<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(names: &[&str], values: Vec<f64>, tolerance: f64) -> Self {
        assert_eq!(names.len(), values.len());
        let mut r = Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            values,
            tolerance,
            pass: false,
        };
        r.pass = r.max_abs() <= tolerance;
        r
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.max_abs() <= tolerance;
        self
    }
}

/// Pointwise data of a hypersurface whose shape operator has spectrum
/// (lambda, mu x (m-1)) with T along the lambda-direction e_1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypersurfaceJet {
    pub m: usize,
    pub c: i32,
    pub alpha: f64,
    pub alpha_d1: f64,
    pub alpha_d2: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "H_d1")]
    pub h_d1: f64,
    #[serde(rename = "H_d2")]
    pub h_d2: f64,
    pub lambda: f64,
    pub mu: f64,
    pub s: f64,
}

impl HypersurfaceJet {
    /// The jet of a rotation hypersurface in S^m x R at profile parameter `s`.
    /// Derivatives are taken along the unit field e_1 = -cos(alpha) d/ds.
    pub fn from_rotation(u: &ProfileJet, s: f64, m: usize) -> Result<Self> {
        if u.value.abs() > 1.0 {
            return Err(GeometryError::Domain {
                what: "|u| <= 1 required",
                value: u.value,
            });
        }
        let hj = rotation_mean_curvature_jet(u, s, m)?;
        let cos_a = -(1.0 - u.value * u.value).sqrt();
        Ok(Self {
            m,
            c: 1,
            alpha: (-u.value).atan2(cos_a),
            alpha_d1: u.d1,
            alpha_d2: -cos_a * u.d2,
            h: hj.value,
            h_d1: -cos_a * hj.d1,
            h_d2: (1.0 - u.value * u.value) * hj.d2 - u.value * u.d1 * hj.d1,
            lambda: u.d1,
            mu: u.value / s.tan(),
            s,
        })
    }

    pub fn norm_a_sq(&self) -> f64 {
        self.lambda * self.lambda + (self.m as f64 - 1.0) * self.mu * self.mu
    }

    pub fn mean_curvature_defect(&self) -> f64 {
        self.h - (self.lambda + (self.m as f64 - 1.0) * self.mu) / self.m as f64
    }

    /// Delta H = e_1 e_1 H + (m-1) cot(alpha) mu e_1 H.
    pub fn laplacian_h(&self) -> Result<f64> {
        let coupling = self.mu * self.h_d1;
        let sin_a = self.alpha.sin();
        let cross = if sin_a.abs() < SINGULAR_MARGIN {
            if coupling.abs() > SINGULAR_MARGIN * SINGULAR_MARGIN {
                return Err(GeometryError::Singularity {
                    what: "sin alpha = 0 with mu e_1(H) != 0",
                    at: self.s,
                });
            }
            0.0
        } else {
            (self.m as f64 - 1.0) * self.alpha.cos() / sin_a * coupling
        };
        Ok(self.h_d2 + cross)
    }
}

/// Delta H - H (|A|^2 - c (m-1) sin^2 alpha).
pub fn normal_residual(jet: &HypersurfaceJet) -> Result<f64> {
    let mf = jet.m as f64;
    let lap = jet.laplacian_h()?;
    Ok(lap - jet.h * (jet.norm_a_sq() - jet.c as f64 * (mf - 1.0) * jet.alpha.sin().powi(2)))
}

/// (m/2 H + lambda) e_1(H) + c (m-1) sin(alpha) cos(alpha) H.
pub fn tangential_residual(jet: &HypersurfaceJet) -> f64 {
    let mf = jet.m as f64;
    (mf / 2.0 * jet.h + jet.lambda) * jet.h_d1 + jet.c as f64 * (mf - 1.0) * jet.alpha.sin() * jet.alpha.cos() * jet.h
}

/// Both biharmonic equations for an arbitrary diagonal shape operator.
///
/// `spectrum` lists the principal curvatures, `grad_h` and `t_dir` are the
/// components of grad H and of T/|T| in the principal frame.
pub fn general_biharmonic_residuals(
    space: &AmbientSpace,
    alpha: f64,
    h: f64,
    laplacian_h: f64,
    spectrum: &[f64],
    grad_h: &[f64],
    t_dir: &[f64],
    tolerance: f64,
) -> Result<ResidualReport> {
    let m = space.m();
    if spectrum.len() != m || grad_h.len() != m || t_dir.len() != m {
        return Err(GeometryError::InvalidInput(format!("frame data must have {m} components")));
    }
    let mf = m as f64;
    let c = space.c() as f64;
    let norm_sq: f64 = spectrum.iter().map(|l| l * l).sum();
    let normal = laplacian_h - h * (norm_sq - c * (mf - 1.0) * alpha.sin().powi(2));
    let tangential = (0..m)
        .map(|i| {
            let comp = spectrum[i] * grad_h[i] + mf / 2.0 * h * grad_h[i] + c * (mf - 1.0) * alpha.cos() * h * alpha.sin() * t_dir[i];
            comp * comp
        })
        .sum::<f64>()
        .sqrt();
    Ok(ResidualReport::new(&["normal", "tangential"], vec![normal, tangential], tolerance))
}

/// Jet of H = (u' + (m-1) u cot s)/m up to H''; the `d3` slot is left at zero.
pub fn rotation_mean_curvature_jet(u: &ProfileJet, s: f64, m: usize) -> Result<ProfileJet> {
    guard_nonzero("sin s", s.sin(), s)?;
    let us = Series::from_derivatives(&[u.value, u.d1, u.d2, u.d3]);
    let x = Series::variable(s, 2);
    let h = (us.diff() + us.truncate(2) * x.cot() * (m as f64 - 1.0)) / m as f64;
    Ok(ProfileJet::new(s, h.derivative(0), h.derivative(1), h.derivative(2), 0.0))
}

fn check_h_jet(u: &ProfileJet, hj: &ProfileJet, s: f64, m: usize) -> Result<ProfileJet> {
    let expect = rotation_mean_curvature_jet(u, s, m)?;
    let mismatch = [expect.value - hj.value, expect.d1 - hj.d1, expect.d2 - hj.d2]
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()));
    let scale = 1.0 + expect.value.abs().max(expect.d1.abs()).max(expect.d2.abs());
    if !(mismatch <= 1e-9 * scale) {
        return Err(GeometryError::Consistency {
            what: "H jet differs from (u' + (m-1) u cot s)/m",
            mismatch,
        });
    }
    Ok(expect)
}

/// (3u' + (m-1) u cot s) H' + 2(m-1) u H.
pub fn rotation_residual_54(u: &ProfileJet, hj: &ProfileJet, s: f64, m: usize) -> Result<f64> {
    let hj = check_h_jet(u, hj, s, m)?;
    let mf = m as f64;
    let cot = 1.0 / s.tan();
    Ok((3.0 * u.d1 + (mf - 1.0) * u.value * cot) * hj.d1 + 2.0 * (mf - 1.0) * u.value * hj.value)
}

/// (1-u^2) H'' + ((m-1)(1-u^2) cot s - u u') H' + ((m-1) u^2 (1 - cot^2 s) - u'^2) H.
pub fn rotation_residual_55(u: &ProfileJet, hj: &ProfileJet, s: f64, m: usize) -> Result<f64> {
    if u.value.abs() > 1.0 + 1e-12 {
        return Err(GeometryError::Domain {
            what: "|u| <= 1 required",
            value: u.value,
        });
    }
    let hj = check_h_jet(u, hj, s, m)?;
    let mf = m as f64;
    let cot = 1.0 / s.tan();
    let w = 1.0 - u.value * u.value;
    Ok(w * hj.d2
        + ((mf - 1.0) * w * cot - u.value * u.d1) * hj.d1
        + ((mf - 1.0) * u.value * u.value * (1.0 - cot * cot) - u.d1 * u.d1) * hj.value)
}

/// Both rotation equations from a u-jet alone.
pub fn rotation_residuals(u: &ProfileJet, s: f64, m: usize, tolerance: f64) -> Result<ResidualReport> {
    let hj = rotation_mean_curvature_jet(u, s, m)?;
    let r54 = rotation_residual_54(u, &hj, s, m)?;
    let r55 = rotation_residual_55(u, &hj, s, m)?;
    Ok(ResidualReport::new(&["eq54", "eq55"], vec![r54, r55], tolerance))
}

/// Laplacian of a radial function on dr^2 + sigma(k(r))^2 dtheta^2.
///
/// `u` and `k` are series in r; the result has one order less than `u` minus one.
pub fn radial_laplacian(kind: RotationKind, u: &Series, k: &Series) -> Series {
    let order = u.order().saturating_sub(2);
    let up = u.diff();
    let upp = up.diff().truncate(order);
    let kt = k.truncate(order);
    let kp = k.diff().truncate(order);
    let log_sigma_slope = match kind {
        RotationKind::HyperbolicSurface => kp * kt.coth(),
        _ => -(kp * kt.tan()),
    };
    upp + log_sigma_slope * up.truncate(order)
}

fn surface_h_mean_times_kprime(kind: RotationKind, k: &Series, h: &Series) -> Series {
    // k'H = (h'' + h' k' (ln sigma)'(k)) / 2
    let order = h.order().saturating_sub(2);
    let hp = h.diff();
    let hpp = hp.diff().truncate(order);
    let kt = k.truncate(order);
    let kp = k.diff().truncate(order);
    let slope = match kind {
        RotationKind::HyperbolicSurface => kt.coth(),
        _ => -kt.tan(),
    };
    (hpp + hp.truncate(order) * kp * slope) * 0.5
}

fn surface_residuals(kind: RotationKind, k: &ProfileJet4, h: &ProfileJet, c_const: f64, tolerance: f64) -> Result<ResidualReport> {
    match kind {
        RotationKind::SphereSurface => guard_nonzero("cos k", k.value.cos(), k.s)?,
        RotationKind::HyperbolicSurface => guard_nonzero("sinh k", k.value.sinh(), k.s)?,
        RotationKind::SphereHypersurface => {
            return Err(GeometryError::InvalidInput("surface residuals need a surface kind".into()))
        }
    }
    let ks = k.as_series();
    let hs = Series::from_derivatives(&[h.value, h.d1, h.d2, h.d3]);
    let lap_k = radial_laplacian(kind, &ks, &ks);
    let bilap_k = radial_laplacian(kind, &lap_k, &ks.truncate(2)).value();
    let (kv, kp) = (k.value, k.d1);
    let bre1 = match kind {
        RotationKind::SphereSurface => {
            let t = kv.tan();
            let sec2 = 1.0 / kv.cos().powi(2);
            bilap_k + 2.0 * lap_k.value() + 2.0 * sec2 * t * kp * kp + (1.0 - t * t) * t
        }
        _ => {
            let ct = 1.0 / kv.tanh();
            bilap_k - 2.0 * lap_k.value() - 2.0 * ct * (ct * ct - 1.0) * kp * kp + (1.0 + ct * ct) * ct
        }
    };
    let kh = surface_h_mean_times_kprime(kind, &ks.truncate(3), &hs);
    let forcing = match kind {
        RotationKind::SphereSurface => c_const / kv.cos(),
        _ => c_const / kv.sinh(),
    };
    let bre2 = kh.derivative(1) - forcing;
    let arc = kp * kp + h.d1 * h.d1 - 1.0;
    Ok(ResidualReport::new(&["bre1", "bre2", "arc"], vec![bre1, bre2, arc], tolerance))
}

/// Fourth-order map equation, height equation and arclength defect for S^2 x R.
pub fn surface_bre_residuals(k: &ProfileJet4, h: &ProfileJet, c_const: f64, tolerance: f64) -> Result<ResidualReport> {
    surface_residuals(RotationKind::SphereSurface, k, h, c_const, tolerance)
}

/// The analogous system for H^2 x R.
pub fn surface_hyperbolic_residuals(k: &ProfileJet4, h: &ProfileJet, c_const: f64, tolerance: f64) -> Result<ResidualReport> {
    surface_residuals(RotationKind::HyperbolicSurface, k, h, c_const, tolerance)
}

pub fn surface_residuals_kind(kind: RotationKind, k: &ProfileJet4, h: &ProfileJet, c_const: f64, tolerance: f64) -> Result<ResidualReport> {
    surface_residuals(kind, k, h, c_const, tolerance)
}

/// Frame data of a surface with T = sin(alpha)(cos f e_1 + sin f e_2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFrameState {
    pub lambda1: f64,
    pub lambda2: f64,
    pub f: f64,
    pub alpha: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "e1H")]
    pub e1_h: f64,
    #[serde(rename = "e2H")]
    pub e2_h: f64,
    pub e1f: f64,
    pub e2f: f64,
    pub e1_lambda2: f64,
    pub e2_lambda1: f64,
}

impl SurfaceFrameState {
    pub fn mean_curvature_defect(&self) -> f64 {
        self.h - (self.lambda1 + self.lambda2) / 2.0
    }

    /// The state forced by lambda1 = 0, f = 0 and the first Bih2 equation (H != 0).
    pub fn constant_angle_branch(alpha: f64, lambda2: f64, c: i32) -> Self {
        let e1_h = -(c as f64) * alpha.sin() * alpha.cos();
        Self {
            lambda1: 0.0,
            lambda2,
            f: 0.0,
            alpha,
            h: lambda2 / 2.0,
            e1_h,
            e2_h: 0.0,
            e1f: 0.0,
            e2f: 0.0,
            e1_lambda2: 2.0 * e1_h,
            e2_lambda1: 0.0,
        }
    }
}

/// Frame equations of a constant angle surface: e_i(alpha) relations,
/// Codazzi and the tangential biharmonic equations.
pub fn constant_angle_frame_residuals(state: &SurfaceFrameState, c: i32, tolerance: f64) -> Result<ResidualReport> {
    let (sin_a, cos_a) = state.alpha.sin_cos();
    guard_nonzero("sin alpha", sin_a, state.alpha)?;
    let cot = cos_a / sin_a;
    let (sf, cf) = state.f.sin_cos();
    let cc = c as f64;
    let (l1, l2) = (state.lambda1, state.lambda2);
    let omega1 = state.e1f + l1 * cot * sf;
    let omega2 = state.e2f - l2 * cot * cf;
    // e_1(alpha) = e_2(alpha) = 0 for constant angle.
    let theta1 = l1 * cf;
    let theta2 = l2 * sf;
    let codazzi1 = (l2 - l1) * omega2 - cc * sin_a * cos_a * cf - state.e1_lambda2;
    let codazzi2 = (l2 - l1) * omega1 - cc * sin_a * cos_a * sf - state.e2_lambda1;
    let bih1 = (l1 + state.h) * state.e1_h + cc * sin_a * cos_a * cf * state.h;
    let bih2 = (l2 + state.h) * state.e2_h + cc * sin_a * cos_a * sf * state.h;
    Ok(ResidualReport::new(
        &["theta1", "theta2", "codazzi1", "codazzi2", "bih1", "bih2"],
        vec![theta1, theta2, codazzi1, codazzi2, bih1, bih2],
        tolerance,
    ))
}

/// Residuals of the constant-angle branch lambda1 = 0, f = 0 at (alpha, lambda2):
/// the six frame equations, the e_1-derivative of the Codazzi/Bih2
/// compatibility condition, and the normal biharmonic equation.
pub fn constant_angle_branch_residuals(alpha: f64, lambda2: f64, c: i32, tolerance: f64) -> Result<ResidualReport> {
    let state = SurfaceFrameState::constant_angle_branch(alpha, lambda2, c);
    let frame = constant_angle_frame_residuals(&state, c, tolerance)?;
    let (sin_a, cos_a) = alpha.sin_cos();
    let cc = c as f64;
    let cot = cos_a / sin_a;
    // e_1 of (c sin cos - lambda2^2 cot) with constant alpha and e_1(lambda2) from Bih2.
    let compat_d1 = -2.0 * lambda2 * state.e1_lambda2 * cot;
    // Delta H = -omega(e_2) e_1 H, since e_1 e_1 H = e_2 H = 0 on this branch.
    let omega2 = -lambda2 * cot;
    let lap_h = -omega2 * state.e1_h;
    let normal = lap_h - state.h * (lambda2 * lambda2 - cc * sin_a * sin_a);
    let mut names: Vec<&str> = frame.names.iter().map(|s| s.as_str()).collect();
    names.extend(["compat_d1", "normal"]);
    let mut values = frame.values.clone();
    values.extend([compat_d1, normal]);
    Ok(ResidualReport::new(&names, values, tolerance))
}

/// Totally umbilical m = 4 system with H = alpha'.
pub fn umbilic_m4_residuals(alpha: &ProfileJet, c: i32, tolerance: f64) -> Result<ResidualReport> {
    let a = alpha.value;
    let (sin_a, cos_a) = a.sin_cos();
    guard_nonzero("sin alpha", sin_a, alpha.s)?;
    let cc = c as f64;
    let (h, hp, hpp) = (alpha.d1, alpha.d2, alpha.d3);
    let sg = 2.0 * alpha.d2 + cc * (2.0 * a).sin();
    let tan = hp + cc * cos_a * sin_a;
    let norm = hpp + 3.0 * cos_a / sin_a * h * hp - 4.0 * h.powi(3) + 3.0 * cc * sin_a * sin_a * h;
    let comb = -h * (4.0 * cc * (2.0 * a).cos() + (2.0 * h).powi(2));
    Ok(ResidualReport::new(&["sg", "tan", "norm", "comb"], vec![sg, tan, norm, comb], tolerance))
}

/// d/ds[(phi')^2 + 4c cos(phi)] along the sine-Gordon flow.
pub fn umbilic_manifold_drift(phi: f64, phi_d1: f64, c: i32) -> f64 {
    -6.0 * c as f64 * phi_d1 * phi.sin()
}

/// Height identity Delta h - m theta H and the vertical biharmonic condition Delta(H theta).
pub fn vertical_identities(theta: f64, h: f64, m: usize, laplacian_height: f64, laplacian_h_theta: f64, tolerance: f64) -> ResidualReport {
    ResidualReport::new(
        &["height", "bih_height"],
        vec![laplacian_height - m as f64 * theta * h, laplacian_h_theta],
        tolerance,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{Family, RotationProfile};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn jet(m: usize, c: i32, alpha: f64, h: f64, lambda: f64, mu: f64) -> HypersurfaceJet {
        HypersurfaceJet {
            m,
            c,
            alpha,
            alpha_d1: 0.0,
            alpha_d2: 0.0,
            h,
            h_d1: 0.0,
            h_d2: 0.0,
            lambda,
            mu,
            s: 1.0,
        }
    }

    #[test]
    fn normal_residual_examples() {
        assert_abs_diff_eq!(normal_residual(&jet(2, 1, FRAC_PI_2, -0.5, 0.0, -1.0)).unwrap(), 0.0, epsilon = 1e-15);
        assert_eq!(normal_residual(&jet(3, 1, 0.7, 0.0, 0.0, 0.0)).unwrap(), 0.0);
        assert_abs_diff_eq!(normal_residual(&jet(2, 1, FRAC_PI_2, 1.0, 0.0, 2.0)).unwrap(), -3.0, epsilon = 1e-15);
        let mut j = jet(2, 1, 0.0, 1.0, 0.0, 1.0);
        j.h_d1 = 1.0;
        assert!(normal_residual(&j).is_err());
    }

    #[test]
    fn tangential_residual_examples() {
        assert_eq!(tangential_residual(&jet(3, 1, 0.4, 0.0, 2.0, 1.0)), 0.0);
        assert_abs_diff_eq!(tangential_residual(&jet(3, 1, FRAC_PI_2, 0.7, 2.0, 1.0)), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(tangential_residual(&jet(2, 1, FRAC_PI_4, 1.0, 5.0, 1.0)), 0.5, epsilon = 1e-15);
    }

    fn u_profile(family: Family) -> RotationProfile {
        RotationProfile::new(RotationKind::SphereHypersurface, family).unwrap()
    }

    #[test]
    fn rotation_residual_examples() {
        let zero = ProfileJet::constant(FRAC_PI_4, 0.0);
        let r = rotation_residuals(&zero, FRAC_PI_4, 3, 1e-12).unwrap();
        assert!(r.pass && r.max_abs() == 0.0);

        let neg = ProfileJet::constant(FRAC_PI_4, -1.0);
        let hj = rotation_mean_curvature_jet(&neg, FRAC_PI_4, 2).unwrap();
        assert_abs_diff_eq!(hj.value, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(hj.d1, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rotation_residual_54(&neg, &hj, FRAC_PI_4, 2).unwrap(), 0.0, epsilon = 1e-14);

        let bogus = ProfileJet::new(FRAC_PI_4, 0.3, 0.0, 0.0, 0.0);
        assert!(matches!(
            rotation_residual_54(&neg, &bogus, FRAC_PI_4, 2),
            Err(GeometryError::Consistency { .. })
        ));
    }

    #[test]
    fn semiparallel_jet_violates_both_equations() {
        let s = FRAC_PI_3;
        let u = u_profile(Family::SemiparallelCase3 { c_const: 1.0, branch: Default::default() }).u_jet(s).unwrap();
        let hj = rotation_mean_curvature_jet(&u, s, 3).unwrap();
        let r54 = rotation_residual_54(&u, &hj, s, 3).unwrap();
        // Frozen from an independent symbolic evaluation.
        assert_abs_diff_eq!(r54, 61.317, epsilon = 1e-3);
        // u = sqrt(5) > 1 here, so (55) is outside its domain.
        assert!(rotation_residual_55(&u, &hj, s, 3).is_err());
    }

    #[test]
    fn minimal_profile_null() {
        let p = u_profile(Family::MinimalU { u0: 0.4, m: 2 });
        for i in 0..=20 {
            let s = FRAC_PI_4 + i as f64 * FRAC_PI_2 / 20.0;
            let r = rotation_residuals(&p.u_jet(s).unwrap(), s, 2, 1e-12).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    fn surface(kind: RotationKind, family: Family) -> RotationProfile {
        RotationProfile::new(kind, family).unwrap()
    }

    #[test]
    fn bre_examples() {
        let slice = surface(RotationKind::SphereSurface, Family::Slice { offset: 0.0 });
        for r in [0.1, 0.5, 1.2] {
            let rep = surface_bre_residuals(&slice.k_jet(r).unwrap(), &slice.h_jet(r).unwrap(), 0.0, 1e-12).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
        let cyl = surface(RotationKind::SphereSurface, Family::Cylinder { k0: FRAC_PI_4 });
        let rep = surface_bre_residuals(&cyl.k_jet(0.3).unwrap(), &cyl.h_jet(0.3).unwrap(), 0.0, 1e-12).unwrap();
        assert!(rep.pass, "{rep:?}");
        let cyl = surface(RotationKind::SphereSurface, Family::Cylinder { k0: FRAC_PI_6 });
        let rep = surface_bre_residuals(&cyl.k_jet(0.3).unwrap(), &cyl.h_jet(0.3).unwrap(), 0.0, 1e-12).unwrap();
        assert_abs_diff_eq!(rep.get("bre1").unwrap(), (1.0 - 1.0 / 3.0) / 3f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(rep.get("bre1").unwrap(), 0.3849, epsilon = 1e-4);
        let k = ProfileJet4::new(0.0, FRAC_PI_2, 0.0, 0.0, 0.0, 0.0);
        assert!(surface_bre_residuals(&k, &ProfileJet::constant(0.0, 0.0), 0.0, 1e-8).is_err());
    }

    #[test]
    fn hyperbolic_examples() {
        for k0 in [0.2, 0.8, 1.5, 3.0] {
            let cyl = surface(RotationKind::HyperbolicSurface, Family::Cylinder { k0 });
            let rep = surface_hyperbolic_residuals(&cyl.k_jet(0.0).unwrap(), &cyl.h_jet(0.0).unwrap(), 0.0, 1e-8).unwrap();
            let ct = 1.0 / k0.tanh();
            assert_abs_diff_eq!(rep.get("bre1").unwrap(), (1.0 + ct * ct) * ct, epsilon = 1e-12);
            assert!(rep.get("bre1").unwrap() > 0.0);
        }
        let k = ProfileJet4::new(0.0, 0.5, 0.6, 0.0, 0.0, 0.0);
        let h = ProfileJet::new(0.0, 0.0, 0.8, 0.0, 0.0);
        let rep = surface_hyperbolic_residuals(&k, &h, 0.0, 1e-8).unwrap();
        assert_abs_diff_eq!(rep.get("arc").unwrap(), 0.0, epsilon = 1e-15);
        let k = ProfileJet4::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        assert!(surface_hyperbolic_residuals(&k, &h, 0.0, 1e-8).is_err());
    }

    // Frozen closed form of bre1 * cos^3 k sin^7 k on cos k = A r + B (x = cos k).
    fn flat_polynomial(a: f64, x: f64) -> f64 {
        let a2 = a * a;
        let a4 = a2 * a2;
        2.0 * x.powi(10) - 9.0 * x.powi(8) - 4.0 * (a2 - 4.0) * x.powi(6) - 2.0 * (8.0 * a4 - 5.0 * a2 + 7.0) * x.powi(4)
            + 2.0 * (a4 - 4.0 * a2 + 3.0) * x * x
            - a4
            + 2.0 * a2
            - 1.0
    }

    // Frozen closed form for sinh k = A r + B (y = sinh k), scaled by sinh^3 k cosh^7 k.
    fn hyperbolic_flat_polynomial(a: f64, y: f64) -> f64 {
        let a2 = a * a;
        let a4 = a2 * a2;
        2.0 * y.powi(10) + 9.0 * y.powi(8) + (16.0 - 4.0 * a2) * y.powi(6) + (14.0 - 10.0 * a2 + 16.0 * a4) * y.powi(4)
            + (6.0 - 8.0 * a2 + 2.0 * a4) * y * y
            + (1.0 - 2.0 * a2 + a4)
    }

    #[test]
    fn flat_family_bre_matches_frozen_polynomials() {
        for (a, b) in [(0.3, 0.4), (0.5, 0.2), (-0.4, 0.6)] {
            let p = surface(RotationKind::SphereSurface, Family::LinearCos { a, b });
            for r in [0.0, 0.1, 0.2] {
                let k = p.k_jet(r).unwrap();
                let rep = surface_bre_residuals(&k, &p.h_jet(r).unwrap(), 0.0, 1.0).unwrap();
                let x = k.value.cos();
                let scaled = rep.get("bre1").unwrap() * x.powi(3) * k.value.sin().powi(7);
                assert_abs_diff_eq!(scaled, flat_polynomial(a, x), epsilon = 1e-11);
            }
            let p = surface(RotationKind::HyperbolicSurface, Family::LinearSinh { a, b: b + 0.5 });
            for r in [0.0, 0.1, 0.2] {
                let k = p.k_jet(r).unwrap();
                let rep = surface_hyperbolic_residuals(&k, &p.h_jet(r).unwrap(), 0.0, 1.0).unwrap();
                let y = k.value.sinh();
                let scaled = rep.get("bre1").unwrap() * y.powi(3) * k.value.cosh().powi(7);
                assert_abs_diff_eq!(scaled, hyperbolic_flat_polynomial(a, y), epsilon = 1e-10);
            }
        }
        // A = 1 with cos k = 1 reduces the coefficient sum to -15.
        assert_abs_diff_eq!(flat_polynomial(1.0, 1.0), -15.0, epsilon = 1e-14);
    }

    #[test]
    fn harmonic_k_reduces_bre1() {
        // k' = C / cos k makes Delta k vanish; bre1 keeps only the algebraic terms.
        let c = 0.2;
        let k0 = 0.4;
        let order = 4;
        // Picard iteration for k' = C sec k.
        let mut k = Series::constant(k0, 0);
        for _ in 0..=order {
            k = (k.sec() * c).integrate(k0).truncate(order);
        }
        let jet = ProfileJet4::from_series(0.0, &k);
        let hp = (1.0 - jet.d1 * jet.d1).sqrt();
        let h = ProfileJet::new(0.0, 0.0, hp, 0.0, 0.0);
        let rep = surface_bre_residuals(&jet, &h, 0.0, 1.0).unwrap();
        let t = k0.tan();
        let expect = 2.0 / k0.cos().powi(2) * t * jet.d1 * jet.d1 + (1.0 - t * t) * t;
        assert_abs_diff_eq!(rep.get("bre1").unwrap(), expect, epsilon = 1e-12);
    }

    #[test]
    fn frame_examples() {
        let cyl = SurfaceFrameState {
            lambda1: 0.0,
            lambda2: 1.0,
            f: 0.0,
            alpha: FRAC_PI_2,
            h: 0.5,
            e1_h: 0.0,
            e2_h: 0.0,
            e1f: 0.0,
            e2f: 0.0,
            e1_lambda2: 0.0,
            e2_lambda1: 0.0,
        };
        assert!(constant_angle_frame_residuals(&cyl, 1, 1e-12).unwrap().pass);
        let minimal = SurfaceFrameState {
            lambda2: 0.0,
            h: 0.0,
            alpha: FRAC_PI_3,
            ..cyl
        };
        let rep = constant_angle_frame_residuals(&minimal, 1, 1e-12).unwrap();
        assert_abs_diff_eq!(rep.get("codazzi1").unwrap(), -(3f64).sqrt() / 4.0, epsilon = 1e-15);
        let tilted = SurfaceFrameState { alpha: 0.9, f: 0.3, lambda1: 0.0, lambda2: 0.0, h: 0.0, ..cyl };
        assert!(constant_angle_frame_residuals(&tilted, 0, 1e-12).unwrap().pass);
        assert!(constant_angle_frame_residuals(&SurfaceFrameState { alpha: 0.0, ..cyl }, 1, 1e-8).is_err());
    }

    #[test]
    fn constant_angle_branch_values() {
        let cyl = constant_angle_branch_residuals(FRAC_PI_2, 1.0, 1, 1e-12).unwrap();
        assert!(cyl.pass, "{cyl:?}");
        let a = FRAC_PI_3;
        let rep = constant_angle_branch_residuals(a, 3f64.sqrt() / 2.0, 1, 1e-12).unwrap();
        assert_abs_diff_eq!(rep.get("codazzi1").unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.get("normal").unwrap(), -(3f64).sqrt() / 8.0, epsilon = 1e-15);
        assert!(!constant_angle_branch_residuals(FRAC_PI_2, 1.0, -1, 1e-8).unwrap().pass);
    }

    #[test]
    fn umbilic_examples() {
        let still = ProfileJet::new(0.0, FRAC_PI_4, 0.0, -0.5, 0.0);
        let rep = umbilic_m4_residuals(&still, 1, 1e-12).unwrap();
        assert_eq!(rep.get("comb").unwrap(), 0.0);
        assert!(rep.get("sg").unwrap().abs() < 1e-15);
        let phi = 2.0 * std::f64::consts::FRAC_PI_3;
        assert_abs_diff_eq!(umbilic_manifold_drift(FRAC_PI_2, 2.0, 1), -12.0, epsilon = 1e-14);
        assert_abs_diff_eq!(umbilic_manifold_drift(phi, 2f64.sqrt(), 1), -7.348, epsilon = 1e-3);
        assert!(umbilic_m4_residuals(&ProfileJet::constant(0.0, 0.0), 1, 1e-8).is_err());
    }

    #[test]
    fn vertical_identity_examples() {
        assert!(vertical_identities(0.0, -0.5, 2, 0.0, 0.0, 1e-12).pass);
        assert!(vertical_identities(1.0, 0.0, 2, 0.0, 0.0, 1e-12).pass);
        let r = vertical_identities(0.5, 0.2, 2, 0.2, 0.3, 1e-8);
        assert!(r.get("height").unwrap().abs() < 1e-15 && !r.pass);
    }

    #[test]
    fn report_pass_semantics() {
        let r = ResidualReport::new(&["a", "b"], vec![1e-9, -2e-9], 1e-8);
        assert!(r.pass);
        assert!(!r.clone().with_tolerance(1e-9).pass);
        assert!(!ResidualReport::new(&["a"], vec![f64::NAN], 1.0).pass);
    }

    proptest! {
        #[test]
        fn eq55_is_the_normal_equation(a in -0.5f64..0.5, b in 0.5f64..3.0, slope in -0.6f64..0.6, s in 0.3f64..1.3, m in 2usize..7) {
            let p = u_profile(Family::HeightTrig { a, b, slope });
            let u = p.u_jet(s).unwrap();
            let hj = rotation_mean_curvature_jet(&u, s, m).unwrap();
            let j = HypersurfaceJet::from_rotation(&u, s, m).unwrap();
            prop_assume!(j.alpha.sin().abs() > 1e-3);
            prop_assert!(j.mean_curvature_defect().abs() < 1e-12);
            let n = normal_residual(&j).unwrap();
            let e55 = rotation_residual_55(&u, &hj, s, m).unwrap();
            prop_assert!((n - e55).abs() < 1e-9 * (1.0 + n.abs()), "{} vs {}", n, e55);
            let t = tangential_residual(&j);
            let e54 = rotation_residual_54(&u, &hj, s, m).unwrap();
            prop_assert!((e54 + 2.0 * t / j.alpha.cos()).abs() < 1e-9 * (1.0 + e54.abs()));
        }

        #[test]
        fn umbilic_identity_on_flow_jets(a0 in 0.2f64..2.9, da in -1.5f64..1.5, c in prop::sample::select(vec![-1, 1])) {
            // Jets consistent with alpha'' = -(c/2) sin 2 alpha to third order.
            let cc = c as f64;
            let a2 = -cc / 2.0 * (2.0 * a0).sin();
            let a3 = -cc * (2.0 * a0).cos() * da;
            let rep = umbilic_m4_residuals(&ProfileJet::new(0.0, a0, da, a2, a3), c, 1e-10).unwrap();
            prop_assert!(rep.get("sg").unwrap().abs() < 1e-12);
            prop_assert!(rep.get("tan").unwrap().abs() < 1e-12);
            prop_assert!((rep.get("norm").unwrap() - rep.get("comb").unwrap()).abs() < 1e-10);
        }

        #[test]
        fn cylinder_flip_invariance(m in 2usize..9, c in 1i32..=1) {
            let space = AmbientSpace::new(c, m).unwrap();
            let mut spectrum = vec![1.0; m - 1];
            spectrum.push(0.0);
            let h = spectrum.iter().sum::<f64>() / m as f64;
            let zeros = vec![0.0; m];
            let mut t = vec![0.0; m];
            t[m - 1] = 1.0;
            let up = general_biharmonic_residuals(&space, FRAC_PI_2, h, 0.0, &spectrum, &zeros, &t, 1e-10).unwrap();
            let flipped: Vec<f64> = spectrum.iter().map(|l| -l).collect();
            let down = general_biharmonic_residuals(&space, FRAC_PI_2, -h, 0.0, &flipped, &zeros, &t, 1e-10).unwrap();
            prop_assert!(up.pass && down.pass);
            prop_assert!((up.values[0].abs() - down.values[0].abs()).abs() < 1e-15);
        }
    }
}
