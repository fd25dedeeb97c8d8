//! Rotation hypersurfaces and rotation surfaces described by profile functions.
//!
//! Hypersurfaces in S^m x R use the chart f(s, v) = (cos s, phi(v) sin s, h(s))
//! with profile u = -sin(alpha) = -h'/sqrt(1 + h'^2). Surfaces in S^2 x R and
//! H^2 x R use an arclength profile (k(r), h(r)) with k'^2 + h'^2 = 1.

use std::f64::consts::FRAC_PI_2;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{guard_nonzero, GeometryError, Result};
use crate::jet::Series;

/// Value and first three derivatives of a profile function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileJet {
    pub s: f64,
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl ProfileJet {
    pub fn new(s: f64, value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self { s, value, d1, d2, d3 }
    }

    pub fn constant(s: f64, value: f64) -> Self {
        Self::new(s, value, 0.0, 0.0, 0.0)
    }

    pub fn from_series(s: f64, series: &Series) -> Self {
        Self::new(s, series.derivative(0), series.derivative(1), series.derivative(2), series.derivative(3))
    }

    pub fn is_finite(&self) -> bool {
        [self.s, self.value, self.d1, self.d2, self.d3].iter().all(|v| v.is_finite())
    }
}

/// A jet carrying four derivatives, needed by the fourth-order surface equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileJet4 {
    pub s: f64,
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

impl ProfileJet4 {
    pub fn new(s: f64, value: f64, d1: f64, d2: f64, d3: f64, d4: f64) -> Self {
        Self { s, value, d1, d2, d3, d4 }
    }

    pub fn from_series(s: f64, series: &Series) -> Self {
        Self::new(
            s,
            series.derivative(0),
            series.derivative(1),
            series.derivative(2),
            series.derivative(3),
            series.derivative(4),
        )
    }

    pub fn truncated(&self) -> ProfileJet {
        ProfileJet::new(self.s, self.value, self.d1, self.d2, self.d3)
    }

    pub fn as_series(&self) -> Series {
        Series::from_derivatives(&[self.value, self.d1, self.d2, self.d3, self.d4])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationKind {
    SphereHypersurface,
    SphereSurface,
    HyperbolicSurface,
}

impl RotationKind {
    pub fn is_surface(&self) -> bool {
        !matches!(self, RotationKind::SphereHypersurface)
    }

    /// Curvature sign of the space-form factor.
    pub fn c(&self) -> i32 {
        match self {
            RotationKind::HyperbolicSurface => -1,
            _ => 1,
        }
    }
}

impl FromStr for RotationKind {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere_hypersurface" => Ok(Self::SphereHypersurface),
            "sphere_surface" => Ok(Self::SphereSurface),
            "hyperbolic_surface" => Ok(Self::HyperbolicSurface),
            other => Err(GeometryError::InvalidInput(format!("unknown profile kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpectrum {
    pub lambda: f64,
    pub mu: f64,
    pub mu_multiplicity: usize,
}

impl ShapeSpectrum {
    pub fn norm_sq(&self) -> f64 {
        self.lambda * self.lambda + self.mu_multiplicity as f64 * self.mu * self.mu
    }

    pub fn mean_curvature(&self) -> f64 {
        (self.lambda + self.mu_multiplicity as f64 * self.mu) / (self.mu_multiplicity as f64 + 1.0)
    }
}

/// Built-in profile families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    /// u = 0, or k = r + offset with constant height.
    Slice {
        #[serde(default)]
        offset: f64,
    },
    ConstantU {
        value: f64,
    },
    /// u = amplitude * sin s.
    SineProfile {
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// u = +-sqrt(1 + C sec^2 s).
    SemiparallelCase3 {
        #[serde(rename = "C")]
        c_const: f64,
        #[serde(default)]
        branch: Branch,
    },
    /// u = u0 / sin^{m-1} s.
    MinimalU {
        u0: f64,
        m: usize,
    },
    /// h(s) = a sin(b s) + slope * s.
    HeightTrig {
        a: f64,
        b: f64,
        #[serde(default)]
        slope: f64,
    },
    /// k = k0, h = r.
    Cylinder {
        k0: f64,
    },
    /// k = k0 + r cos(angle), h = r sin(angle).
    Tilted {
        angle: f64,
        #[serde(default)]
        k0: f64,
    },
    /// cos k = A r + B.
    LinearCos {
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: f64,
    },
    /// sinh k = A r + B.
    LinearSinh {
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: f64,
    },
    /// k = k0 + R sin(r/R + phase), h = h0 - R cos(r/R + phase).
    CircleArc {
        k0: f64,
        #[serde(default)]
        h0: f64,
        radius: f64,
        phase: f64,
    },
    /// Cubic-spline interpolated samples; never used for certification.
    Sampled {
        t: Vec<f64>,
        primary: Vec<f64>,
        #[serde(default)]
        height: Option<Vec<f64>>,
    },
}

fn one() -> f64 {
    1.0
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Slice { .. } => "slice",
            Family::ConstantU { .. } => "constant-u",
            Family::SineProfile { .. } => "sine-profile",
            Family::SemiparallelCase3 { .. } => "semiparallel-case3",
            Family::MinimalU { .. } => "minimal-u",
            Family::HeightTrig { .. } => "height-trig",
            Family::Cylinder { .. } => "cylinder",
            Family::Tilted { .. } => "tilted",
            Family::LinearCos { .. } => "linear-cos",
            Family::LinearSinh { .. } => "linear-sinh",
            Family::CircleArc { .. } => "circle-arc",
            Family::Sampled { .. } => "sampled",
        }
    }

    fn supports(&self, kind: RotationKind) -> bool {
        use RotationKind::*;
        match self {
            Family::Slice { .. } | Family::Sampled { .. } => true,
            Family::ConstantU { .. }
            | Family::SineProfile { .. }
            | Family::SemiparallelCase3 { .. }
            | Family::MinimalU { .. }
            | Family::HeightTrig { .. } => kind == SphereHypersurface,
            Family::Cylinder { .. } | Family::Tilted { .. } | Family::CircleArc { .. } => kind.is_surface(),
            Family::LinearCos { .. } => kind == SphereSurface,
            Family::LinearSinh { .. } => kind == HyperbolicSurface,
        }
    }

    /// Parses `name:key=value,key=value`, e.g. `semiparallel:C=1`.
    pub fn parse_shorthand(text: &str) -> Result<Self> {
        let (name, params) = text.split_once(':').unwrap_or((text, ""));
        let canonical = match name {
            "semiparallel" => "semiparallel-case3",
            "sine" => "sine-profile",
            "minimal" => "minimal-u",
            "flat" => "linear-cos",
            other => other,
        };
        let mut obj = serde_json::Map::new();
        obj.insert("family".into(), canonical.into());
        for pair in params.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| GeometryError::InvalidInput(format!("malformed profile parameter '{pair}'")))?;
            let value = if let Ok(x) = v.parse::<f64>() {
                if k == "m" {
                    serde_json::Value::from(x as u64)
                } else {
                    serde_json::Value::from(x)
                }
            } else {
                serde_json::Value::from(v)
            };
            obj.insert(k.to_string(), value);
        }
        serde_json::from_value(serde_json::Value::Object(obj))
            .map_err(|e| GeometryError::InvalidInput(format!("profile '{text}': {e}")))
    }
}

/// A profile bound to the geometry it describes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationProfile {
    pub kind: RotationKind,
    #[serde(rename = "expr")]
    pub family: Family,
}

impl RotationProfile {
    pub fn new(kind: RotationKind, family: Family) -> Result<Self> {
        if !family.supports(kind) {
            return Err(GeometryError::InvalidInput(format!(
                "family '{}' does not describe a {:?} profile",
                family.name(),
                kind
            )));
        }
        if let Family::Sampled { t, primary, height } = &family {
            let ok_len = t.len() >= 4 && primary.len() == t.len() && height.as_ref().is_none_or(|h| h.len() == t.len());
            if !ok_len || t.windows(2).any(|w| w[1] <= w[0]) {
                return Err(GeometryError::InvalidInput("sampled table needs >= 4 increasing samples of equal length".into()));
            }
            if kind.is_surface() && height.is_none() {
                return Err(GeometryError::InvalidInput("sampled surface profile needs a height column".into()));
            }
        }
        Ok(Self { kind, family })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(text).map_err(|e| GeometryError::InvalidInput(format!("profile scenario: {e}")))?;
        Self::new(raw.kind, raw.family)
    }

    pub fn is_interpolated(&self) -> bool {
        matches!(self.family, Family::Sampled { .. })
    }

    /// Taylor series of u (hypersurfaces) or k (surfaces) at `t`.
    pub fn primary(&self, t: f64, order: usize) -> Result<Series> {
        let x = Series::variable(t, order);
        let out = match &self.family {
            Family::Slice { offset } => {
                if self.kind.is_surface() {
                    x + *offset
                } else {
                    Series::constant(0.0, order)
                }
            }
            Family::ConstantU { value } => Series::constant(*value, order),
            Family::SineProfile { amplitude } => x.sin() * *amplitude,
            Family::SemiparallelCase3 { c_const, branch } => {
                guard_nonzero("sin s", t.sin(), t)?;
                guard_nonzero("cos s", t.cos(), t)?;
                let inside = 1.0 + *c_const / t.cos().powi(2);
                if inside <= crate::error::SINGULAR_MARGIN {
                    return Err(GeometryError::Domain {
                        what: "1 + C sec^2 s must be positive",
                        value: inside,
                    });
                }
                (x.sec().square() * *c_const + 1.0).sqrt() * branch.sign()
            }
            Family::MinimalU { u0, m } => {
                guard_nonzero("sin s", t.sin(), t)?;
                *u0 * x.sin().powi(1 - *m as i32)
            }
            Family::HeightTrig { .. } => {
                let hp = self.height_slope(t, order)?;
                -(hp / (hp.square() + 1.0).sqrt())
            }
            Family::Cylinder { k0 } => Series::constant(*k0, order),
            Family::Tilted { angle, k0 } => x * angle.cos() + *k0,
            Family::LinearCos { a, b } => {
                let y = x * *a + *b;
                if y.value().abs() >= 1.0 {
                    return Err(GeometryError::Domain {
                        what: "cos k = A r + B must lie in (-1, 1)",
                        value: y.value(),
                    });
                }
                y.acos()
            }
            Family::LinearSinh { a, b } => (x * *a + *b).asinh(),
            Family::CircleArc { k0, radius, phase, .. } => (x / *radius + *phase).sin() * *radius + *k0,
            Family::Sampled { t: ts, primary, .. } => spline_series(ts, primary, t, order)?,
        };
        self.check_primary(t, &out)?;
        Ok(out)
    }

    fn check_primary(&self, t: f64, series: &Series) -> Result<()> {
        if !series.is_finite() {
            return Err(GeometryError::Domain {
                what: "profile not finite",
                value: t,
            });
        }
        match self.kind {
            RotationKind::SphereHypersurface => Ok(()),
            RotationKind::SphereSurface => guard_nonzero("cos k", series.value().cos(), t),
            RotationKind::HyperbolicSurface => guard_nonzero("sinh k", series.value().sinh(), t),
        }
    }

    /// Taylor series of h' at `t`.
    pub fn height_slope(&self, t: f64, order: usize) -> Result<Series> {
        let x = Series::variable(t, order);
        let out = match &self.family {
            Family::HeightTrig { a, b, slope } => (x * *b).cos() * (*a * *b) + *slope,
            Family::Sampled { t: ts, height: Some(h), .. } => spline_series(ts, h, t, order + 1)?.diff(),
            _ if self.kind == RotationKind::SphereHypersurface => {
                let u = self.primary(t, order)?;
                if u.value().abs() >= 1.0 {
                    return Err(GeometryError::Domain {
                        what: "|u| < 1 required to recover the height",
                        value: u.value(),
                    });
                }
                -(u / (1.0 - u.square()).sqrt())
            }
            Family::Slice { .. } => Series::constant(0.0, order),
            Family::Cylinder { .. } => Series::constant(1.0, order),
            Family::Tilted { angle, .. } => Series::constant(angle.sin(), order),
            Family::CircleArc { radius, phase, .. } => (x / *radius + *phase).sin(),
            Family::LinearCos { .. } | Family::LinearSinh { .. } => {
                let kp = self.primary(t, order + 1)?.diff();
                let rest = 1.0 - kp.square();
                if rest.value() < 0.0 {
                    return Err(GeometryError::Domain {
                        what: "|k'| <= 1 required",
                        value: kp.value(),
                    });
                }
                rest.sqrt()
            }
            _ => unreachable!("family/kind checked at construction"),
        };
        if !out.is_finite() {
            return Err(GeometryError::Domain {
                what: "height slope not finite",
                value: t,
            });
        }
        Ok(out)
    }

    /// Closed-form height where one exists.
    pub fn height_value(&self, t: f64) -> Option<f64> {
        match &self.family {
            Family::HeightTrig { a, b, slope } => Some(a * (b * t).sin() + slope * t),
            Family::Slice { .. } if self.kind.is_surface() => Some(0.0),
            Family::Cylinder { .. } => Some(t),
            Family::Tilted { angle, .. } => Some(t * angle.sin()),
            Family::CircleArc { h0, radius, phase, .. } => Some(h0 - radius * (t / radius + phase).cos()),
            Family::Sampled { t: ts, height: Some(h), .. } => spline_series(ts, h, t, 0).ok().map(|s| s.value()),
            _ => None,
        }
    }

    /// h(t) - h(t0), by closed form or quadrature of h'.
    pub fn height_between(&self, t0: f64, t: f64) -> Result<f64> {
        if let (Some(a), Some(b)) = (self.height_value(t0), self.height_value(t)) {
            return Ok(b - a);
        }
        let failure = std::cell::RefCell::new(None);
        let out = quadrature::double_exponential::integrate(
            |x| match self.height_slope(x, 0) {
                Ok(s) => s.value(),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            },
            t0,
            t,
            1e-14,
        );
        match failure.into_inner() {
            Some(e) => Err(e),
            None if out.integral.is_finite() => Ok(out.integral),
            None => Err(GeometryError::Numerical("height quadrature failed".into())),
        }
    }

    /// Series of h at `t`; the constant term is the closed-form height or 0.
    pub fn height(&self, t: f64, order: usize) -> Result<Series> {
        let slope = self.height_slope(t, order.saturating_sub(1))?;
        Ok(slope.integrate(self.height_value(t).unwrap_or(0.0)).truncate(order))
    }

    pub fn u_jet(&self, s: f64) -> Result<ProfileJet> {
        self.expect_kind(false)?;
        Ok(ProfileJet::from_series(s, &self.primary(s, 3)?))
    }

    pub fn k_jet(&self, r: f64) -> Result<ProfileJet4> {
        self.expect_kind(true)?;
        Ok(ProfileJet4::from_series(r, &self.primary(r, 4)?))
    }

    pub fn h_jet(&self, r: f64) -> Result<ProfileJet> {
        Ok(ProfileJet::from_series(r, &self.height(r, 3)?))
    }

    fn expect_kind(&self, surface: bool) -> Result<()> {
        if self.kind.is_surface() != surface {
            return Err(GeometryError::InvalidInput(format!("operation not defined for {:?}", self.kind)));
        }
        Ok(())
    }

    /// Arclength defect k'^2 + h'^2 - 1 for surface kinds.
    pub fn arclength_defect(&self, r: f64) -> Result<f64> {
        self.expect_kind(true)?;
        let kp = self.primary(r, 1)?.derivative(1);
        let hp = self.height_slope(r, 0)?.value();
        Ok(kp * kp + hp * hp - 1.0)
    }
}

/// Natural cubic spline through the samples, expanded at `t` (order <= 3 is exact).
fn spline_series(ts: &[f64], ys: &[f64], t: f64, order: usize) -> Result<Series> {
    let n = ts.len();
    if t < ts[0] || t > ts[n - 1] {
        return Err(GeometryError::Domain {
            what: "outside sampled range",
            value: t,
        });
    }
    // Second derivatives M_i from the tridiagonal system with M_0 = M_{n-1} = 0.
    let mut m = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = ts[i] - ts[i - 1];
        let h1 = ts[i + 1] - ts[i];
        diag[i] = 2.0 * (h0 + h1);
        rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
    }
    for i in 2..n - 1 {
        let h0 = ts[i] - ts[i - 1];
        let w = h0 / diag[i - 1];
        diag[i] -= w * h0;
        rhs[i] -= w * rhs[i - 1];
    }
    for i in (1..n - 1).rev() {
        let h1 = ts[i + 1] - ts[i];
        m[i] = (rhs[i] - if i + 1 < n - 1 { h1 * m[i + 1] } else { 0.0 }) / diag[i];
    }
    let j = ts.partition_point(|&x| x <= t).clamp(1, n - 1) - 1;
    let h = ts[j + 1] - ts[j];
    let a = (ts[j + 1] - t) / h;
    let b = (t - ts[j]) / h;
    let value = a * ys[j] + b * ys[j + 1] + ((a.powi(3) - a) * m[j] + (b.powi(3) - b) * m[j + 1]) * h * h / 6.0;
    let d1 = (ys[j + 1] - ys[j]) / h - (3.0 * a * a - 1.0) * h * m[j] / 6.0 + (3.0 * b * b - 1.0) * h * m[j + 1] / 6.0;
    let d2 = a * m[j] + b * m[j + 1];
    let d3 = (m[j + 1] - m[j]) / h;
    let derivs = [value, d1, d2, d3, 0.0, 0.0, 0.0, 0.0];
    Ok(Series::from_derivatives(&derivs[..=order]))
}

/// Angle function alpha for a rotation hypersurface from its height jet (cos alpha = -1/sqrt(1+h'^2)).
pub fn angle_rotation_hypersurface(h: &ProfileJet) -> f64 {
    h.d1.atan2(-1.0)
}

/// Angle function alpha for an arclength surface profile (cos alpha = k', sin alpha = h').
pub fn angle_rotation_surface(k: &ProfileJet, h: &ProfileJet) -> Result<f64> {
    if k.d1.abs() > 1.0 + 1e-9 {
        return Err(GeometryError::Domain {
            what: "|k'| <= 1 required",
            value: k.d1,
        });
    }
    Ok(h.d1.atan2(k.d1.clamp(-1.0, 1.0)))
}

/// Dispatches on the profile kind; surface kinds need the k-jet.
pub fn angle_from_height(kind: RotationKind, h: &ProfileJet, k: Option<&ProfileJet>) -> Result<f64> {
    match kind {
        RotationKind::SphereHypersurface => Ok(angle_rotation_hypersurface(h)),
        _ => {
            let k = k.ok_or_else(|| GeometryError::InvalidInput("surface angle needs the k profile".into()))?;
            angle_rotation_surface(k, h)
        }
    }
}

pub fn shape_spectrum_sphere(u: &ProfileJet, s: f64, m: usize) -> Result<ShapeSpectrum> {
    guard_nonzero("sin s", s.sin(), s)?;
    Ok(ShapeSpectrum {
        lambda: u.d1,
        mu: u.value / s.tan(),
        mu_multiplicity: m - 1,
    })
}

pub fn mean_curvature_sphere(u: &ProfileJet, s: f64, m: usize) -> Result<f64> {
    guard_nonzero("sin s", s.sin(), s)?;
    Ok((u.d1 + (m as f64 - 1.0) * u.value / s.tan()) / m as f64)
}

/// Principal curvatures (profile direction, rotation direction) of a rotation surface.
pub fn surface_principal_curvatures(kind: RotationKind, k: &ProfileJet, h: &ProfileJet) -> Result<(f64, f64)> {
    let lambda1 = if k.d1.abs() >= crate::error::SINGULAR_MARGIN {
        h.d2 / k.d1
    } else if h.d2.abs() >= crate::error::SINGULAR_MARGIN {
        return Err(GeometryError::Singularity {
            what: "k' = 0 with h'' != 0",
            at: k.s,
        });
    } else {
        // Limit of h''/k' along an arclength curve; zero on cylinders.
        -h.d1 * k.d2
    };
    let lambda2 = match kind {
        RotationKind::SphereSurface => {
            guard_nonzero("cos k", k.value.cos(), k.s)?;
            -h.d1 * k.value.tan()
        }
        RotationKind::HyperbolicSurface => {
            guard_nonzero("sinh k", k.value.sinh(), k.s)?;
            h.d1 / k.value.tanh()
        }
        RotationKind::SphereHypersurface => {
            return Err(GeometryError::InvalidInput("surface curvatures need a surface kind".into()))
        }
    };
    Ok((lambda1, lambda2))
}

pub fn mean_curvature_surface_kind(kind: RotationKind, k: &ProfileJet, h: &ProfileJet) -> Result<f64> {
    let (l1, l2) = surface_principal_curvatures(kind, k, h)?;
    Ok((l1 + l2) / 2.0)
}

pub fn gauss_curvature_surface_kind(kind: RotationKind, k: &ProfileJet, h: &ProfileJet) -> Result<f64> {
    let (l1, l2) = surface_principal_curvatures(kind, k, h)?;
    Ok(l1 * l2 + kind.c() as f64 * k.d1 * k.d1)
}

/// Mean curvature of a rotation surface in S^2 x R.
pub fn mean_curvature_surface(k: &ProfileJet, h: &ProfileJet) -> Result<f64> {
    mean_curvature_surface_kind(RotationKind::SphereSurface, k, h)
}

/// Gauss curvature of a rotation surface in S^2 x R.
pub fn gauss_curvature_surface(k: &ProfileJet, h: &ProfileJet) -> Result<f64> {
    gauss_curvature_surface_kind(RotationKind::SphereSurface, k, h)
}

pub fn semiparallel_case3_profile(c_const: f64, s: f64) -> Result<ProfileJet> {
    let p = RotationProfile::new(
        RotationKind::SphereHypersurface,
        Family::SemiparallelCase3 {
            c_const,
            branch: Branch::Plus,
        },
    )?;
    p.u_jet(s)
}

/// The slice k = r through the origin of the profile plane, used by several checks.
pub fn slice_surface() -> RotationProfile {
    RotationProfile {
        kind: RotationKind::SphereSurface,
        family: Family::Slice { offset: 0.0 },
    }
}

/// The biharmonic vertical cylinder over the circle of radius 1/sqrt(2).
pub fn biharmonic_cylinder() -> RotationProfile {
    RotationProfile {
        kind: RotationKind::SphereSurface,
        family: Family::Cylinder { k0: FRAC_PI_2 / 2.0 },
    }
}
