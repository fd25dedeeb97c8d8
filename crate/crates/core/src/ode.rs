//! Adaptive integration of the reduced ODE systems.
//!
//! The stepper is the explicit Dormand-Prince 8(5,3) pair with Hairer's
//! coefficients and step-size controller. Guards stop the flow before a
//! singular locus: a step whose endpoint falls below a guard floor is halved
//! until the remaining gap is below [`EVENT_TOLERANCE`], and the guard zero is
//! then located by secant extrapolation from the last two samples.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::jet::Series;
use crate::profiles::{Branch, ProfileJet, ProfileJet4, RotationKind};
use crate::report::{fmt_f64, SCHEMA};
use crate::residual;

pub const EVENT_TOLERANCE: f64 = 1e-10;
pub const MIN_STEP: f64 = 1e-13;
pub const GUARD_MARGIN: f64 = 1e-8;
pub const DEFAULT_CEILING: f64 = 1e6;
/// Largest ratio between consecutive adaptive steps.
pub const MAX_GROWTH: f64 = 6.0;

type RhsFn = Box<dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync>;
type JetFn = Box<dyn Fn(&Series, &[Series]) -> Vec<Series> + Send + Sync>;
type GuardFn = Box<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
type MonitorFn = Box<dyn Fn(f64, &[f64]) -> Option<f64> + Send + Sync>;

pub struct Guard {
    pub name: String,
    /// The flow is singular once the guard drops below this value.
    pub floor: f64,
    f: GuardFn,
}

impl Guard {
    pub fn new(name: &str, floor: f64, f: impl Fn(f64, &[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            floor,
            f: Box::new(f),
        }
    }

    pub fn eval(&self, t: f64, y: &[f64]) -> f64 {
        (self.f)(t, y)
    }
}

/// A named quantity tracked along the flow; `None` where it is undefined.
pub struct Monitor {
    pub name: String,
    f: MonitorFn,
}

impl Monitor {
    pub fn new(name: &str, f: impl Fn(f64, &[f64]) -> Option<f64> + Send + Sync + 'static) -> Self {
        Self { name: name.into(), f: Box::new(f) }
    }

    pub fn eval(&self, t: f64, y: &[f64]) -> Option<f64> {
        (self.f)(t, y)
    }
}

pub struct OdeSystem {
    pub name: String,
    pub state_names: Vec<String>,
    rhs: RhsFn,
    jet: Option<JetFn>,
    pub guards: Vec<Guard>,
    pub monitors: Vec<Monitor>,
}

impl OdeSystem {
    pub fn new(name: &str, state_names: &[&str], rhs: impl Fn(f64, &[f64], &mut [f64]) + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            state_names: state_names.iter().map(|s| s.to_string()).collect(),
            rhs: Box::new(rhs),
            jet: None,
            guards: Vec::new(),
            monitors: Vec::new(),
        }
    }

    /// Builds a system from a right-hand side written over Taylor series, which
    /// also provides exact derivative jets of the flow.
    pub fn from_series(name: &str, state_names: &[&str], f: impl Fn(&Series, &[Series]) -> Vec<Series> + Send + Sync + 'static) -> Self {
        let f = std::sync::Arc::new(f);
        let g = f.clone();
        let rhs = move |t: f64, y: &[f64], dy: &mut [f64]| {
            let ys: Vec<Series> = y.iter().map(|v| Series::constant(*v, 0)).collect();
            for (d, s) in dy.iter_mut().zip(g(&Series::constant(t, 0), &ys)) {
                *d = s.value();
            }
        };
        let mut sys = Self::new(name, state_names, rhs);
        sys.jet = Some(Box::new(move |t, y| f(t, y)));
        sys
    }

    pub fn with_guard(mut self, guard: Guard) -> Self {
        self.guards.push(guard);
        self
    }

    pub fn with_monitor(mut self, monitor: Monitor) -> Self {
        self.monitors.push(monitor);
        self
    }

    pub fn dimension(&self) -> usize {
        self.state_names.len()
    }

    pub fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (self.rhs)(t, y, dy)
    }

    pub fn derivative(&self, t: f64, y: &[f64]) -> Vec<f64> {
        let mut dy = vec![0.0; y.len()];
        self.rhs(t, y, &mut dy);
        dy
    }

    /// Taylor jets of every state component through the point (t, y), by Picard iteration.
    pub fn flow_jet(&self, t: f64, y: &[f64], order: usize) -> Result<Vec<Series>> {
        let f = self
            .jet
            .as_ref()
            .ok_or_else(|| GeometryError::InvalidInput(format!("system '{}' has no series form", self.name)))?;
        let tv = Series::variable(t, order);
        let mut ys: Vec<Series> = y.iter().map(|v| Series::constant(*v, 0)).collect();
        for _ in 0..order {
            let dy = f(&tv, &ys);
            ys = dy.iter().zip(y).map(|(d, y0)| d.integrate(*y0).truncate(order)).collect();
        }
        if ys.iter().any(|s| !s.is_finite()) {
            return Err(GeometryError::Numerical("non-finite flow jet".into()));
        }
        Ok(ys)
    }

    fn min_guard_margin(&self, t: f64, y: &[f64]) -> Option<(usize, f64)> {
        self.guards
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let v = g.eval(t, y);
                (i, if v.is_nan() { f64::NEG_INFINITY } else { v - g.floor })
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub tolerances: Tolerances,
    pub monitor_ceiling: f64,
    pub max_steps: usize,
    pub initial_step: Option<f64>,
    pub max_step: Option<f64>,
    /// Constant step without error control.
    pub fixed_step: Option<f64>,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            monitor_ceiling: DEFAULT_CEILING,
            max_steps: 2_000_000,
            initial_step: None,
            max_step: None,
            fixed_step: None,
        }
    }
}

impl IntegrateOptions {
    pub fn with_tolerances(abs: f64, rel: f64) -> Self {
        Self {
            tolerances: Tolerances { abs, rel },
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    RangeEnd,
    Singularity,
    StepUnderflow,
    MonitorBlowup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
    pub monitors: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub system: String,
    pub state_names: Vec<String>,
    pub monitor_names: Vec<String>,
    pub samples: Vec<Sample>,
    pub termination: Termination,
    /// Guard or monitor responsible for an early stop.
    pub cause: Option<String>,
    /// Located parameter of the guard zero (singularity) or of the last sample.
    pub stop_parameter: f64,
    pub max_monitor: BTreeMap<String, f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub tolerances: Tolerances,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least the initial sample")
    }

    pub fn monitor_values(&self, name: &str) -> Vec<Option<f64>> {
        match self.monitor_names.iter().position(|n| n == name) {
            Some(i) => self.samples.iter().map(|s| s.monitors[i]).collect(),
            None => Vec::new(),
        }
    }

    /// Cubic Hermite interpolation between accepted samples.
    pub fn interpolate(&self, t: f64) -> Option<Vec<f64>> {
        let n = self.samples.len();
        let forward = n < 2 || self.samples[1].t > self.samples[0].t;
        let key = |s: &Sample| if forward { s.t } else { -s.t };
        let tk = if forward { t } else { -t };
        if n == 0 || tk < key(&self.samples[0]) || tk > key(&self.samples[n - 1]) {
            return None;
        }
        if n == 1 {
            return Some(self.samples[0].y.clone());
        }
        let j = self.samples.partition_point(|s| key(s) <= tk).clamp(1, n - 1) - 1;
        let (a, b) = (&self.samples[j], &self.samples[j + 1]);
        let h = b.t - a.t;
        let th = (t - a.t) / h;
        let h00 = (1.0 + 2.0 * th) * (1.0 - th).powi(2);
        let h10 = th * (1.0 - th).powi(2);
        let h01 = th * th * (3.0 - 2.0 * th);
        let h11 = th * th * (th - 1.0);
        Some(
            (0..a.y.len())
                .map(|i| h00 * a.y[i] + h10 * h * a.dy[i] + h01 * b.y[i] + h11 * h * b.dy[i])
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| GeometryError::Numerical(format!("csv: {e}"));
        let mut header = vec!["schema".to_string(), "parameter".to_string()];
        header.extend(self.state_names.iter().cloned());
        header.extend(self.monitor_names.iter().cloned());
        w.write_record(&header).map_err(io)?;
        for s in &self.samples {
            let mut row = vec![SCHEMA.to_string(), fmt_f64(s.t)];
            row.extend(s.y.iter().map(|v| fmt_f64(*v)));
            row.extend(s.monitors.iter().map(|m| m.map(fmt_f64).unwrap_or_default()));
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| GeometryError::Numerical(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn metadata(&self) -> RunMetadata {
        RunMetadata {
            schema: SCHEMA.into(),
            system: self.system.clone(),
            tolerances: self.tolerances,
            termination: self.termination,
            cause: self.cause.clone(),
            stop_parameter: self.stop_parameter,
            samples: self.samples.len(),
            accepted_steps: self.accepted_steps,
            rejected_steps: self.rejected_steps,
            max_monitor: self.max_monitor.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub schema: String,
    pub system: String,
    pub tolerances: Tolerances,
    pub termination: Termination,
    pub cause: Option<String>,
    pub stop_parameter: f64,
    pub samples: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub max_monitor: BTreeMap<String, f64>,
}

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.845_494_793_282_861E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.703_703_703_703_703_5E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.531_943_774_862_440_2E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.360_892_629_446_941_4;
const A95: f64 = -8.682_193_468_417_26E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.348_988_418_106_996E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.488_114_619_971_667_7;
const A105: f64 = -5.902_908_268_368_43E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.328_821_096_898_486E1;
const A109: f64 = -2.033_120_170_850_862_7E-2;
const A111: f64 = -9.371_424_300_859_873E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.149_787_010_746_927;
const A117: f64 = -1.852_006_565_999_696E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.046_764_471_898_219_6;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.053_449_546_673_725E1;
const A125: f64 = -2.000_872_058_224_862_5;
const A126: f64 = -1.795_893_186_311_88E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.858_998_277_135_023_5;
const A129: f64 = -8.872_856_933_530_63;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.801_203_960_010_585;
const B9: f64 = 3.111_643_669_578_199E-1;
const B10: f64 = -1.521_609_496_625_161E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;

const ER1: f64 = 1.312_004_499_419_488E-2;
const ER6: f64 = -1.225_156_446_376_204_4;
const ER7: f64 = -4.957_589_496_572_502E-1;
const ER8: f64 = 1.664_377_182_454_986_4;
const ER9: f64 = -3.503_288_487_499_736_6E-1;
const ER10: f64 = 3.341_791_187_130_175E-1;
const ER11: f64 = 8.192_320_648_511_571E-2;
const ER12: f64 = -2.235_530_786_388_629_4E-2;

struct Stepper<'a> {
    sys: &'a OdeSystem,
    k: [Vec<f64>; 12],
    tmp: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(sys: &'a OdeSystem) -> Self {
        let n = sys.dimension();
        Self {
            sys,
            k: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
        }
    }

    fn stage(&mut self, t: f64, y: &[f64], h: f64, coeffs: &[(usize, f64)], out: usize, c: f64) {
        for i in 0..y.len() {
            self.tmp[i] = y[i] + h * coeffs.iter().map(|(j, a)| a * self.k[*j][i]).sum::<f64>();
        }
        let (tmp, k) = (&self.tmp, &mut self.k);
        self.sys.rhs(t + c * h, tmp, &mut k[out]);
    }

    /// One step from (t, y) with k[0] = f(t, y) already set. Returns the new
    /// state and the scaled error (<= 1 means acceptable).
    fn step(&mut self, t: f64, y: &[f64], h: f64, tol: Tolerances) -> (Vec<f64>, f64) {
        let n = y.len();
        self.stage(t, y, h, &[(0, A21)], 1, C2);
        self.stage(t, y, h, &[(0, A31), (1, A32)], 2, C3);
        self.stage(t, y, h, &[(0, A41), (2, A43)], 3, C4);
        self.stage(t, y, h, &[(0, A51), (2, A53), (3, A54)], 4, C5);
        self.stage(t, y, h, &[(0, A61), (3, A64), (4, A65)], 5, C6);
        self.stage(t, y, h, &[(0, A71), (3, A74), (4, A75), (5, A76)], 6, C7);
        self.stage(t, y, h, &[(0, A81), (3, A84), (4, A85), (5, A86), (6, A87)], 7, C8);
        self.stage(t, y, h, &[(0, A91), (3, A94), (4, A95), (5, A96), (6, A97), (7, A98)], 8, C9);
        self.stage(t, y, h, &[(0, A101), (3, A104), (4, A105), (5, A106), (6, A107), (7, A108), (8, A109)], 9, C10);
        self.stage(
            t,
            y,
            h,
            &[(0, A111), (3, A114), (4, A115), (5, A116), (6, A117), (7, A118), (8, A119), (9, A1110)],
            10,
            C11,
        );
        self.stage(
            t,
            y,
            h,
            &[(0, A121), (3, A124), (4, A125), (5, A126), (6, A127), (7, A128), (8, A129), (9, A1210), (10, A1211)],
            11,
            1.0,
        );
        let k = &self.k;
        let mut y1 = vec![0.0; n];
        let mut err = 0.0;
        let mut err2 = 0.0;
        for i in 0..n {
            let incr = B1 * k[0][i] + B6 * k[5][i] + B7 * k[6][i] + B8 * k[7][i] + B9 * k[8][i] + B10 * k[9][i] + B11 * k[10][i] + B12 * k[11][i];
            y1[i] = y[i] + h * incr;
            let sk = tol.abs + tol.rel * y[i].abs().max(y1[i].abs());
            let e2 = incr - BHH1 * k[0][i] - BHH2 * k[8][i] - BHH3 * k[11][i];
            err2 += (e2 / sk).powi(2);
            let e = ER1 * k[0][i] + ER6 * k[5][i] + ER7 * k[6][i] + ER8 * k[7][i] + ER9 * k[8][i] + ER10 * k[9][i] + ER11 * k[10][i] + ER12 * k[11][i];
            err += (e / sk).powi(2);
        }
        let mut deno = err + 0.01 * err2;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h.abs() * err * (1.0 / (deno * n as f64)).sqrt();
        let err = if y1.iter().all(|v| v.is_finite()) && err.is_finite() { err } else { f64::INFINITY };
        (y1, err)
    }
}

fn secant_root(t0: f64, g0: f64, t1: f64, g1: f64) -> f64 {
    if (g1 - g0).abs() < f64::MIN_POSITIVE || !(g0 - g1).is_finite() {
        return t1;
    }
    t1 - g1 * (t1 - t0) / (g1 - g0)
}

/// Integrates `system` from `initial` at `range.0` towards `range.1`.
pub fn integrate(system: &OdeSystem, initial: &[f64], range: (f64, f64), options: &IntegrateOptions) -> Result<Trajectory> {
    let n = system.dimension();
    if initial.len() != n {
        return Err(GeometryError::InvalidInput(format!("initial state has {} components, system '{}' needs {n}", initial.len(), system.name)));
    }
    let (t0, t1) = range;
    if !(t0.is_finite() && t1.is_finite()) || t0 == t1 {
        return Err(GeometryError::InvalidInput("integration range must be finite and non-empty".into()));
    }
    let tol = options.tolerances;
    if !(tol.abs > 0.0 && tol.rel >= 0.0) {
        return Err(GeometryError::InvalidInput("tolerances must be positive".into()));
    }
    if let Some((gi, margin)) = system.min_guard_margin(t0, initial) {
        if margin < 0.0 {
            return Err(GeometryError::InvalidInput(format!(
                "initial state violates guard '{}' of system '{}'",
                system.guards[gi].name, system.name
            )));
        }
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let h_max = options.max_step.unwrap_or(span).abs().min(span);

    let monitor_names: Vec<String> = system.monitors.iter().map(|m| m.name.clone()).collect();
    let mut max_monitor: BTreeMap<String, f64> = monitor_names.iter().map(|n| (n.clone(), 0.0)).collect();
    let mut samples = Vec::new();
    let make_sample = |t: f64, y: Vec<f64>, dy: Vec<f64>, max_monitor: &mut BTreeMap<String, f64>| {
        let monitors: Vec<Option<f64>> = system.monitors.iter().map(|m| m.eval(t, &y)).collect();
        for (name, v) in monitor_names.iter().zip(&monitors) {
            if let Some(v) = v {
                let e = max_monitor.get_mut(name).unwrap();
                *e = if v.is_nan() { f64::NAN } else { e.max(v.abs()) };
            }
        }
        Sample { t, y, dy, monitors }
    };
    let blown = |s: &Sample| {
        s.monitors
            .iter()
            .position(|m| m.is_some_and(|v| !(v.abs() <= options.monitor_ceiling)))
    };

    let mut t = t0;
    let mut y = initial.to_vec();
    let mut stepper = Stepper::new(system);
    system.rhs(t, &y, &mut stepper.k[0]);
    let first = make_sample(t, y.clone(), stepper.k[0].clone(), &mut max_monitor);
    let first_blown = blown(&first);
    samples.push(first);

    let mut accepted = 0;
    let mut rejected = 0;
    let finish = |samples: Vec<Sample>, termination, cause: Option<String>, stop: f64, max_monitor, accepted, rejected| Trajectory {
        system: system.name.clone(),
        state_names: system.state_names.clone(),
        monitor_names: monitor_names.clone(),
        samples,
        termination,
        cause,
        stop_parameter: stop,
        max_monitor,
        accepted_steps: accepted,
        rejected_steps: rejected,
        tolerances: tol,
    };
    if let Some(i) = first_blown {
        return Ok(finish(samples, Termination::MonitorBlowup, Some(monitor_names[i].clone()), t0, max_monitor, 0, 0));
    }

    let mut h = match (options.fixed_step, options.initial_step) {
        (Some(hf), _) => hf.abs(),
        (None, Some(h0)) => h0.abs(),
        (None, None) => {
            let f_norm = stepper.k[0].iter().map(|v| v * v).sum::<f64>().sqrt();
            let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            let guess = if f_norm > 1e-12 { 0.01 * (y_norm.max(1e-3) / f_norm) } else { 1e-3 };
            guess.clamp(1e-6, 0.1)
        }
    }
    .min(h_max);
    let mut near_guard = false;

    for _ in 0..options.max_steps {
        let remaining = (t1 - t) * dir;
        if remaining <= 0.0 {
            break;
        }
        let last_step = h >= remaining;
        let h_try = if last_step { remaining } else { h };
        let (y1, err) = stepper.step(t, &y, dir * h_try, tol);
        let err = if options.fixed_step.is_some() && err.is_finite() { 0.0 } else { err };
        let t_new = if last_step { t1 } else { t + dir * h_try };

        if err > 1.0 {
            rejected += 1;
            if options.fixed_step.is_some() {
                return Err(GeometryError::Numerical("fixed-step integration produced non-finite values".into()));
            }
            let fac11 = err.powf(0.125);
            h = if err.is_finite() { h_try / (1.0f64 / 0.333).min(fac11 / 0.9) } else { h_try / 4.0 };
            if h < MIN_STEP {
                let stop = t;
                return Ok(finish(samples, Termination::StepUnderflow, None, stop, max_monitor, accepted, rejected));
            }
            continue;
        }

        if let Some((gi, margin)) = system.min_guard_margin(t_new, &y1) {
            if margin < 0.0 {
                if h_try <= EVENT_TOLERANCE || options.fixed_step.is_some() {
                    let g = &system.guards[gi];
                    let last = samples.last().unwrap();
                    let stop = if samples.len() >= 2 {
                        let prev = &samples[samples.len() - 2];
                        secant_root(prev.t, g.eval(prev.t, &prev.y), last.t, g.eval(last.t, &last.y))
                    } else {
                        secant_root(last.t, g.eval(last.t, &last.y), t_new, g.eval(t_new, &y1))
                    };
                    return Ok(finish(samples, Termination::Singularity, Some(g.name.clone()), stop, max_monitor, accepted, rejected));
                }
                near_guard = true;
                h = h_try / 2.0;
                continue;
            }
        }

        accepted += 1;
        t = t_new;
        y = y1;
        let k0 = std::mem::take(&mut stepper.k[0]);
        let mut dy = k0;
        system.rhs(t, &y, &mut dy);
        stepper.k[0] = dy.clone();
        let sample = make_sample(t, y.clone(), dy, &mut max_monitor);
        let blow = blown(&sample);
        samples.push(sample);
        if let Some(i) = blow {
            return Ok(finish(samples, Termination::MonitorBlowup, Some(monitor_names[i].clone()), t, max_monitor, accepted, rejected));
        }
        if last_step {
            return Ok(finish(samples, Termination::RangeEnd, None, t1, max_monitor, accepted, rejected));
        }
        if options.fixed_step.is_none() {
            let fac = (err.powf(0.125) / 0.9).clamp(1.0 / MAX_GROWTH, 1.0 / 0.333);
            let grow = if near_guard { 1.0f64.min(1.0 / fac) } else { 1.0 / fac };
            h = (h_try * grow).min(h_max);
        }
    }
    Err(GeometryError::Numerical(format!("system '{}' exceeded {} steps", system.name, options.max_steps)))
}

// ---------------------------------------------------------------------------
// Reductions of the geometric systems.

fn sin_guard() -> Guard {
    Guard::new("sin_s", GUARD_MARGIN, |s, _| s.sin())
}

/// Third-order flow of the rotation-hypersurface normal equation in (u, u', u'').
/// The tangential equation is tracked by the monitor `eq54`.
pub fn reduce_rotation_biharmonic(m: usize, c: i32) -> Result<OdeSystem> {
    if m < 2 {
        return Err(GeometryError::InvalidInput("m >= 2 required".into()));
    }
    if c != 1 {
        return Err(GeometryError::InvalidInput("the rotation chart is defined for the sphere factor (c = 1)".into()));
    }
    let mf = m as f64;
    let third = move |s: f64, y: &[f64]| -> f64 {
        let (u, u1, u2) = (y[0], y[1], y[2]);
        let cot = 1.0 / s.tan();
        let csc2 = 1.0 / s.sin().powi(2);
        let w = 1.0 - u * u;
        let h = (u1 + (mf - 1.0) * u * cot) / mf;
        let h1 = (u2 + (mf - 1.0) * (u1 * cot - u * csc2)) / mf;
        let h2 = -(((mf - 1.0) * w * cot - u * u1) * h1 + ((mf - 1.0) * u * u * (1.0 - cot * cot) - u1 * u1) * h) / w;
        mf * h2 - (mf - 1.0) * (u2 * cot - 2.0 * u1 * csc2 + 2.0 * u * csc2 * cot)
    };
    let sys = OdeSystem::new("rotation-biharmonic", &["u", "u_d1", "u_d2"], move |s, y, dy| {
        dy[0] = y[1];
        dy[1] = y[2];
        dy[2] = third(s, y);
    })
    .with_guard(sin_guard())
    .with_guard(Guard::new("one_minus_u2", GUARD_MARGIN, |_, y| 1.0 - y[0] * y[0]))
    .with_monitor(Monitor::new("eq54", move |s, y| {
        let u = ProfileJet::new(s, y[0], y[1], y[2], third(s, y));
        let hj = residual::rotation_mean_curvature_jet(&u, s, m).ok()?;
        residual::rotation_residual_54(&u, &hj, s, m).ok()
    }))
    .with_monitor(Monitor::new("H", move |s, y| Some((y[1] + (mf - 1.0) * y[0] / s.tan()) / mf)));
    Ok(sys)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceSign {
    Sphere,
    Hyperbolic,
}

impl SurfaceSign {
    pub fn kind(&self) -> RotationKind {
        match self {
            SurfaceSign::Sphere => RotationKind::SphereSurface,
            SurfaceSign::Hyperbolic => RotationKind::HyperbolicSurface,
        }
    }
}

fn radius_guard(sign: SurfaceSign) -> Guard {
    match sign {
        SurfaceSign::Sphere => Guard::new("cos_k", GUARD_MARGIN, |_, y| y[0].cos()),
        SurfaceSign::Hyperbolic => Guard::new("sinh_k", GUARD_MARGIN, |_, y| y[0].sinh()),
    }
}

/// Fourth-order flow of the map equation for rotation surfaces in (k, k', k'', k''', h),
/// with the height recovered from h' = +-sqrt(1 - k'^2).
pub fn reduce_surface_bre(sign: SurfaceSign, c_const: f64) -> OdeSystem {
    reduce_surface_bre_branch(sign, c_const, Branch::Plus)
}

pub fn reduce_surface_bre_branch(sign: SurfaceSign, c_const: f64, branch: Branch) -> OdeSystem {
    let kind = sign.kind();
    let fourth = move |y: &[f64]| -> f64 {
        let k = ProfileJet4::new(0.0, y[0], y[1], y[2], y[3], 0.0);
        let h = ProfileJet::constant(0.0, 0.0);
        match residual::surface_residuals_kind(kind, &k, &h, 0.0, 1.0) {
            Ok(r) => -r.values[0],
            Err(_) => f64::NAN,
        }
    };
    let slope = move |y: &[f64]| branch.sign() * (1.0 - y[1] * y[1]).max(0.0).sqrt();
    OdeSystem::new(
        match sign {
            SurfaceSign::Sphere => "surface-bre",
            SurfaceSign::Hyperbolic => "surface-bre-hyperbolic",
        },
        &["k", "k_d1", "k_d2", "k_d3", "h"],
        move |_, y, dy| {
            dy[0] = y[1];
            dy[1] = y[2];
            dy[2] = y[3];
            dy[3] = fourth(y);
            dy[4] = slope(y);
        },
    )
    .with_guard(radius_guard(sign))
    .with_guard(Guard::new("one_minus_kd1_sq", -1e-12, |_, y| 1.0 - y[1] * y[1]))
    .with_monitor(Monitor::new("bre2", move |r, y| {
        let hp = slope(y);
        if hp.abs() < GUARD_MARGIN {
            return None;
        }
        // h'' and h''' from differentiating h' = +-sqrt(1 - k'^2).
        let kp = Series::from_derivatives(&[y[1], y[2], y[3]]);
        let hps = (1.0 - kp.square()).sqrt() * branch.sign();
        let k = ProfileJet4::new(r, y[0], y[1], y[2], y[3], fourth(y));
        let h = ProfileJet::new(r, y[4], hps.derivative(0), hps.derivative(1), hps.derivative(2));
        residual::surface_residuals_kind(kind, &k, &h, c_const, 1.0).ok().map(|rep| rep.values[1])
    }))
    .with_monitor(Monitor::new("arc", move |_, y| {
        let hp = slope(y);
        Some(y[1] * y[1] + hp * hp - 1.0)
    }))
}

/// Minimal-profile generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimalKind {
    SphereHypersurface { m: usize },
    SphereSurface,
    HyperbolicSurface,
}

/// H = 0 flows: u' = -(m-1) u cot s for hypersurfaces, and for surfaces the
/// arclength profile (k, h, beta) with k' = cos beta, h' = sin beta and
/// beta' = -lambda_2 (so that lambda_1 + lambda_2 = 0).
pub fn minimal_profile_system(kind: MinimalKind) -> OdeSystem {
    match kind {
        MinimalKind::SphereHypersurface { m } => {
            let mf = m as f64;
            OdeSystem::from_series("minimal-hypersurface", &["u"], move |s, y| vec![-(y[0] * s.cot() * (mf - 1.0))])
                .with_guard(sin_guard())
                .with_guard(Guard::new("one_minus_u2", GUARD_MARGIN, |_, y| 1.0 - y[0] * y[0]))
                .with_monitor(Monitor::new("H", move |s, y| {
                    let u1 = -(mf - 1.0) * y[0] / s.tan();
                    Some((u1 + (mf - 1.0) * y[0] / s.tan()) / mf)
                }))
        }
        MinimalKind::SphereSurface | MinimalKind::HyperbolicSurface => {
            let sign = if kind == MinimalKind::SphereSurface { SurfaceSign::Sphere } else { SurfaceSign::Hyperbolic };
            let rkind = sign.kind();
            OdeSystem::from_series(
                match sign {
                    SurfaceSign::Sphere => "minimal-surface",
                    SurfaceSign::Hyperbolic => "minimal-surface-hyperbolic",
                },
                &["k", "h", "beta"],
                move |_, y| {
                    let (sb, cb) = y[2].sin_cos();
                    let turn = match sign {
                        SurfaceSign::Sphere => sb * y[0].tan(),
                        SurfaceSign::Hyperbolic => -(sb * y[0].coth()),
                    };
                    vec![cb, sb, turn]
                },
            )
            .with_guard(radius_guard(sign))
            .with_monitor(Monitor::new("H", move |r, y| {
                let (sb, cb) = y[2].sin_cos();
                let turn = match sign {
                    SurfaceSign::Sphere => sb * y[0].tan(),
                    SurfaceSign::Hyperbolic => -sb / y[0].tanh(),
                };
                let k = ProfileJet::new(r, y[0], cb, -sb * turn, 0.0);
                let h = ProfileJet::new(r, y[1], sb, cb * turn, 0.0);
                crate::profiles::mean_curvature_surface_kind(rkind, &k, &h).ok()
            }))
        }
    }
}

/// Initial state (k, h, beta) of a minimal surface flow from (k, h, k', h').
pub fn minimal_surface_initial(k: f64, h: f64, k_d1: f64, h_d1: f64) -> Result<[f64; 3]> {
    if ((k_d1 * k_d1 + h_d1 * h_d1) - 1.0).abs() > 1e-12 {
        return Err(GeometryError::InvalidInput("k'^2 + h'^2 = 1 required".into()));
    }
    Ok([k, h, h_d1.atan2(k_d1)])
}

/// Second-order form of the sine-Gordon equation phi'' + c sin(phi) = 0 in (phi, phi').
pub fn sine_gordon_system(c: i32) -> OdeSystem {
    let cc = c as f64;
    OdeSystem::from_series("sine-gordon", &["phi", "phi_d1"], move |_, y| vec![y[1], -(y[0].sin() * cc)])
        .with_monitor(Monitor::new("energy", move |_, y| Some(y[1] * y[1] / 2.0 - cc * y[0].cos())))
        .with_monitor(Monitor::new("manifold", move |_, y| Some(y[1] * y[1] + 4.0 * cc * y[0].cos())))
}

/// The umbilic m = 4 flow in (alpha, alpha') with H = alpha' and alpha'' = -(c/2) sin(2 alpha).
pub fn umbilic_flow_system(c: i32) -> OdeSystem {
    let cc = c as f64;
    OdeSystem::from_series("umbilic-m4", &["alpha", "alpha_d1"], move |_, y| vec![y[1], -((y[0] * 2.0).sin() * (cc / 2.0))])
        .with_guard(Guard::new("sin_alpha", GUARD_MARGIN, |_, y| y[0].sin().abs()))
        .with_monitor(Monitor::new("comb", move |_, y| Some(-y[1] * (4.0 * cc * (2.0 * y[0]).cos() + 4.0 * y[1] * y[1]))))
}

/// Delta k = 0 on a rotation surface: k'' = tan(k) k'^2 (sphere) or -coth(k) k'^2 (hyperbolic).
/// The monitor `map_residual` is the algebraic residual left in the map equation.
pub fn harmonic_k_system(sign: SurfaceSign) -> OdeSystem {
    OdeSystem::from_series(
        match sign {
            SurfaceSign::Sphere => "harmonic-k",
            SurfaceSign::Hyperbolic => "harmonic-k-hyperbolic",
        },
        &["k", "k_d1"],
        move |_, y| {
            let curv = match sign {
                SurfaceSign::Sphere => y[0].tan(),
                SurfaceSign::Hyperbolic => -y[0].coth(),
            };
            vec![y[1], curv * y[1].square()]
        },
    )
    .with_guard(radius_guard(sign))
    .with_guard(Guard::new("one_minus_kd1_sq", -1e-12, |_, y| 1.0 - y[1] * y[1]))
    .with_monitor(Monitor::new("map_residual", move |_, y| {
        Some(match sign {
            SurfaceSign::Sphere => y[1] * y[1] - (1.0 - 2.0 * y[0].cos().powi(2)) / 2.0,
            SurfaceSign::Hyperbolic => y[1] * y[1] - (2.0 * y[0]).cosh() / 2.0,
        })
    }))
}
