//! Command-line driver: parses flags or a JSON config, runs suites, sweeps,
//! integrations and oracle comparisons, and writes JSON and CSV reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use biharmonic_core::ode::{self, IntegrateOptions, MinimalKind, OdeSystem, SurfaceSign, Termination};
use biharmonic_core::profiles::{Family, RotationKind, RotationProfile};
use biharmonic_core::report::{self, GridRow, SCHEMA};
use biharmonic_core::suites::{self, OracleCase, SuiteConfig, SuiteRegistry, SuiteVerdict, SystemRegistry};
use biharmonic_core::GeometryError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const THREADS_ENV: &str = "BIHARMONIC_LAB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::InvalidInput(_) | GeometryError::Domain { .. } => CliError::Invalid(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass = 0,
    Violated = 1,
    InvalidInput = 2,
    NumericalFailure = 3,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl From<&CliError> for Outcome {
    fn from(e: &CliError) -> Self {
        match e {
            CliError::Invalid(_) | CliError::Io(_) => Outcome::InvalidInput,
            CliError::Numerical(_) => Outcome::NumericalFailure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    Sweep,
    Integrate,
    OracleCompare,
}

#[derive(Debug, Parser)]
#[command(name = "biharmonic-lab", version, about = "Numerical verification of biharmonic hypersurfaces in product spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Run a theorem suite (or `all`) and report its claims.
    Verify(Flags),
    /// Evaluate a residual system on a profile over a parameter grid.
    Sweep(Flags),
    /// Integrate a reduced ODE system with guards and monitors.
    Integrate(Flags),
    /// Compare closed-form curvatures with the embedding oracle.
    OracleCompare(Flags),
}

/// Flags shared by all subcommands; each mirrors a field of [`RunConfig`].
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub system: Option<String>,
    /// Shorthand `family:key=value,...`, inline JSON, or a path to a JSON profile.
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<i32>,
    /// Grid `a:b:h`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Output directory for JSON and CSV artifacts.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated initial state for `integrate`.
    #[arg(long, allow_hyphen_values = true)]
    pub initial: Option<String>,
    /// Constant of the map-equation reduction (`bre` sweeps, `surface-bre` flows).
    #[arg(long, allow_hyphen_values = true)]
    pub constant: Option<f64>,
}

/// Complete job description; a JSON config file deserializes into this directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub suite: Option<String>,
    #[serde(default)]
    pub system: Option<String>,
    #[serde(default)]
    pub profile: Option<serde_json::Value>,
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub c: Option<i32>,
    #[serde(default)]
    pub s: Option<String>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub initial: Option<Vec<f64>>,
    #[serde(default)]
    pub constant: Option<f64>,
}

impl RunConfig {
    pub fn empty(command: Command) -> Self {
        Self {
            command,
            suite: None,
            system: None,
            profile: None,
            kind: None,
            m: None,
            c: None,
            s: None,
            tol: None,
            out: None,
            seed: None,
            initial: None,
            constant: None,
        }
    }

    /// Loads `--config` if given, then lets explicit flags override it.
    pub fn from_flags(command: Command, flags: &Flags) -> Result<Self, CliError> {
        let mut cfg = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("config {}: {e}", path.display())))?;
                let mut value: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("config {}: {e}", path.display())))?;
                if let Some(obj) = value.as_object_mut() {
                    obj.entry("command").or_insert_with(|| serde_json::to_value(command).expect("command serializes"));
                }
                let cfg: RunConfig = serde_json::from_value(value).map_err(|e| CliError::Invalid(format!("config {}: {e}", path.display())))?;
                if cfg.command != command {
                    return Err(CliError::Invalid(format!("config is for {:?}, not {:?}", cfg.command, command)));
                }
                cfg
            }
            None => Self::empty(command),
        };
        macro_rules! take {
            ($f:ident) => {
                if flags.$f.is_some() {
                    cfg.$f = flags.$f.clone();
                }
            };
        }
        take!(suite);
        take!(system);
        take!(kind);
        take!(m);
        take!(c);
        take!(s);
        take!(tol);
        take!(out);
        take!(seed);
        take!(constant);
        if let Some(p) = &flags.profile {
            cfg.profile = Some(serde_json::Value::String(p.clone()));
        }
        if let Some(text) = &flags.initial {
            let vals = text
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Invalid(format!("initial state '{text}' must be comma-separated numbers")))?;
            cfg.initial = Some(vals);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(t) = self.tol {
            if !(t > 0.0) || !t.is_finite() {
                return Err(CliError::Invalid(format!("tolerance must be positive, got {t}")));
            }
        }
        if let Some(c) = self.c {
            if c != 1 && c != -1 {
                return Err(CliError::Invalid(format!("c must be 1 or -1, got {c}")));
            }
        }
        if let Some(m) = self.m {
            if m < 2 {
                return Err(CliError::Invalid(format!("m must be at least 2, got {m}")));
            }
        }
        if let Some(s) = &self.s {
            suites::parse_range(s)?;
        }
        Ok(())
    }
}

/// What a job produced: the JSON printed to stdout and written to disk, and CSV rows.
#[derive(Debug, Clone)]
pub struct JobOutput {
    pub stem: String,
    pub json: String,
    pub csv: Vec<u8>,
    pub outcome: Outcome,
}

pub fn run(cfg: &RunConfig) -> Result<JobOutput, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::Verify => verify(cfg),
        Command::Sweep => sweep(cfg),
        Command::Integrate => integrate(cfg),
        Command::OracleCompare => oracle_compare(cfg),
    }
}

/// Writes `<stem>.json` and `<stem>.csv` under `dir`.
pub fn write_artifacts(dir: &Path, out: &JobOutput) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Invalid(format!("output directory {}: {e}", dir.display())))?;
    fs::write(dir.join(format!("{}.json", out.stem)), &out.json).map_err(|e| CliError::Invalid(format!("write json: {e}")))?;
    fs::write(dir.join(format!("{}.csv", out.stem)), &out.csv).map_err(|e| CliError::Invalid(format!("write csv: {e}")))?;
    Ok(())
}

fn grid_csv(rows: &[GridRow]) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    report::write_grid_csv(&mut buf, rows)?;
    Ok(buf)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    schema: &'static str,
    suites: &'a [SuiteVerdict],
    pass: bool,
}

fn verify(cfg: &RunConfig) -> Result<JobOutput, CliError> {
    let name = cfg.suite.clone().unwrap_or_else(|| "all".into());
    let suite_cfg = SuiteConfig {
        m: cfg.m,
        c: cfg.c,
        tol: cfg.tol,
        seed: cfg.seed,
    };
    let verdicts = SuiteRegistry::default().run(&name, &suite_cfg)?;
    let pass = verdicts.iter().all(|v| v.overall);
    let mut rows = Vec::new();
    for v in &verdicts {
        rows.extend(v.grid.iter().map(|r| GridRow {
            residual_name: format!("{}/{}", v.suite_name, r.residual_name),
            ..r.clone()
        }));
    }
    Ok(JobOutput {
        stem: format!("verify-{name}"),
        json: report::to_json_pretty(&VerifyReport {
            schema: SCHEMA,
            suites: &verdicts,
            pass,
        })?,
        csv: grid_csv(&rows)?,
        outcome: if pass { Outcome::Pass } else { Outcome::Violated },
    })
}

fn parse_kind(text: &str) -> Result<RotationKind, CliError> {
    serde_json::from_value(serde_json::Value::String(text.replace('-', "_")))
        .map_err(|_| CliError::Invalid(format!("unknown kind '{text}' (sphere-hypersurface, sphere-surface, hyperbolic-surface)")))
}

/// Resolves the profile argument. Shorthand families without an explicit kind get one
/// from the system: hypersurface residuals need the hypersurface chart, `bre` a surface.
pub fn resolve_profile(cfg: &RunConfig) -> Result<RotationProfile, CliError> {
    let raw = cfg.profile.as_ref().ok_or_else(|| CliError::Invalid("--profile is required".into()))?;
    let explicit = cfg.kind.as_deref().map(parse_kind).transpose()?;
    let text = match raw {
        serde_json::Value::String(s) => s.clone(),
        other => return Ok(RotationProfile::from_json(&other.to_string())?),
    };
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return Ok(RotationProfile::from_json(trimmed)?);
    }
    if trimmed.ends_with(".json") {
        let body = fs::read_to_string(trimmed).map_err(|e| CliError::Invalid(format!("profile {trimmed}: {e}")))?;
        return Ok(RotationProfile::from_json(&body)?);
    }
    let family = Family::parse_shorthand(trimmed)?;
    let surface = if cfg.c == Some(-1) { RotationKind::HyperbolicSurface } else { RotationKind::SphereSurface };
    let kind = match explicit {
        Some(k) => k,
        None => match cfg.system.as_deref() {
            Some("eq54" | "eq55" | "rotation") => RotationKind::SphereHypersurface,
            Some("bre") => surface,
            _ => {
                if RotationProfile::new(RotationKind::SphereHypersurface, family.clone()).is_ok() && cfg.c != Some(-1) {
                    RotationKind::SphereHypersurface
                } else {
                    surface
                }
            }
        },
    };
    Ok(RotationProfile::new(kind, family)?)
}

fn sweep(cfg: &RunConfig) -> Result<JobOutput, CliError> {
    let system_name = cfg.system.as_deref().ok_or_else(|| CliError::Invalid("--system is required".into()))?;
    let registry = SystemRegistry::with_constant(cfg.constant.unwrap_or(0.0));
    let system = registry.get(system_name)?;
    let profile = resolve_profile(cfg)?;
    let grid = suites::parse_range(cfg.s.as_deref().ok_or_else(|| CliError::Invalid("--s a:b:h is required".into()))?)?;
    let m = if profile.kind.is_surface() { 2 } else { cfg.m.unwrap_or(2) };
    let outcome = suites::sweep(system, &profile, m, &grid, cfg.tol.unwrap_or(1e-8))?;
    if outcome.points == 0 {
        return Err(CliError::Invalid("no grid point lies in the profile's domain".into()));
    }
    // A sweep measures; it does not assert a claim, so it exits 0 whatever the residuals are.
    Ok(JobOutput {
        stem: format!("sweep-{system_name}"),
        json: report::to_json_pretty(&outcome)?,
        csv: grid_csv(&outcome.rows)?,
        outcome: Outcome::Pass,
    })
}

type Builder = fn(&RunConfig) -> Result<OdeSystem, CliError>;

/// Integrable systems, selected by name.
pub fn ode_systems() -> Vec<(&'static str, Builder)> {
    fn sign(cfg: &RunConfig) -> SurfaceSign {
        if cfg.c == Some(-1) {
            SurfaceSign::Hyperbolic
        } else {
            SurfaceSign::Sphere
        }
    }
    vec![
        ("harmonic-k", |cfg| Ok(ode::harmonic_k_system(sign(cfg)))),
        ("minimal-hypersurface", |cfg| Ok(ode::minimal_profile_system(MinimalKind::SphereHypersurface { m: cfg.m.unwrap_or(2) }))),
        ("minimal-surface", |cfg| {
            Ok(ode::minimal_profile_system(match sign(cfg) {
                SurfaceSign::Sphere => MinimalKind::SphereSurface,
                SurfaceSign::Hyperbolic => MinimalKind::HyperbolicSurface,
            }))
        }),
        ("rotation-biharmonic", |cfg| Ok(ode::reduce_rotation_biharmonic(cfg.m.unwrap_or(2), cfg.c.unwrap_or(1))?)),
        ("sine-gordon", |cfg| Ok(ode::sine_gordon_system(cfg.c.unwrap_or(1)))),
        ("surface-bre", |cfg| Ok(ode::reduce_surface_bre(sign(cfg), cfg.constant.unwrap_or(0.0)))),
        ("umbilic", |cfg| Ok(ode::umbilic_flow_system(cfg.c.unwrap_or(1)))),
    ]
}

fn integrate(cfg: &RunConfig) -> Result<JobOutput, CliError> {
    let name = cfg.system.as_deref().ok_or_else(|| CliError::Invalid("--system is required".into()))?;
    let systems = ode_systems();
    let builder = systems.iter().find(|(n, _)| *n == name).map(|(_, b)| *b).ok_or_else(|| {
        CliError::Invalid(format!(
            "unknown ODE system '{name}' (known: {})",
            systems.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        ))
    })?;
    let system = builder(cfg)?;
    let initial = cfg.initial.clone().ok_or_else(|| CliError::Invalid("--initial is required".into()))?;
    if initial.len() != system.dimension() {
        return Err(CliError::Invalid(format!(
            "system '{name}' has state ({}), got {} values",
            system.state_names.join(", "),
            initial.len()
        )));
    }
    let range = cfg.s.as_deref().ok_or_else(|| CliError::Invalid("--s a:b:h is required".into()))?;
    let (a, b, step) = suites::parse_range_spec(range)?;
    let tol = cfg.tol.unwrap_or(1e-10);
    // The grid spacing caps the step so the CSV has at least that resolution.
    let opts = IntegrateOptions {
        max_step: Some(step),
        ..IntegrateOptions::with_tolerances(tol, tol)
    };
    let traj = ode::integrate(&system, &initial, (a, b), &opts)?;
    let mut csv = Vec::new();
    traj.write_csv(&mut csv)?;
    let outcome = match traj.termination {
        Termination::RangeEnd | Termination::Singularity => Outcome::Pass,
        Termination::StepUnderflow | Termination::MonitorBlowup => Outcome::NumericalFailure,
    };
    Ok(JobOutput {
        stem: format!("integrate-{name}"),
        json: report::to_json_pretty(&traj.metadata())?,
        csv,
        outcome,
    })
}

#[derive(Serialize)]
struct OracleReport {
    schema: &'static str,
    cases: Vec<OracleRow>,
    max_richardson_error: f64,
    pass: bool,
}

#[derive(Serialize)]
struct OracleRow {
    profile: RotationProfile,
    m: usize,
    point: Vec<f64>,
    comparison: suites::OracleComparison,
}

fn oracle_compare(cfg: &RunConfig) -> Result<JobOutput, CliError> {
    let cases: Vec<OracleCase> = match &cfg.profile {
        None => suites::random_oracle_cases(cfg.seed.unwrap_or(20_240_601), suites::ORACLE_PROFILES),
        Some(_) => {
            let profile = resolve_profile(cfg)?;
            let m = if profile.kind.is_surface() { 2 } else { cfg.m.unwrap_or(2) };
            let grid = suites::parse_range(cfg.s.as_deref().ok_or_else(|| CliError::Invalid("--s a:b:h is required with --profile".into()))?)?;
            // Angular chart coordinates fixed away from the chart's own singularities.
            grid.iter()
                .map(|t| {
                    let mut point = vec![*t];
                    point.extend((1..m).map(|i| if profile.kind.is_surface() { 0.5 } else { 1.0 + 0.1 * i as f64 }));
                    OracleCase {
                        profile: profile.clone(),
                        m,
                        point,
                    }
                })
                .collect()
        }
    };
    let tol = cfg.tol.unwrap_or(1e-7);
    let mut rows = Vec::new();
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    for case in cases {
        let cmp = suites::compare_case(&case)?;
        for (q, name) in ["principal", "mean", "gauss"].iter().enumerate() {
            worst = worst.max(cmp.errors_richardson[q]);
            rows.push(GridRow {
                s_or_r: case.point[0],
                residual_name: format!("{name}_error"),
                value: cmp.errors_richardson[q],
                pass: cmp.errors_richardson[q] <= tol,
            });
        }
        rows.push(GridRow {
            s_or_r: case.point[0],
            residual_name: "height_identity".into(),
            value: cmp.height_identity,
            pass: cmp.height_identity <= 1e-4,
        });
        out.push(OracleRow {
            profile: case.profile,
            m: case.m,
            point: case.point,
            comparison: cmp,
        });
    }
    let pass = worst <= tol;
    Ok(JobOutput {
        stem: "oracle-compare".into(),
        json: report::to_json_pretty(&OracleReport {
            schema: SCHEMA,
            cases: out,
            max_richardson_error: worst,
            pass,
        })?,
        csv: grid_csv(&rows)?,
        outcome: if pass { Outcome::Pass } else { Outcome::Violated },
    })
}

/// Applies `BIHARMONIC_LAB_THREADS` to the global worker pool.
pub fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.parse().map_err(|_| CliError::Invalid(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        if n == 0 {
            return Err(CliError::Invalid(format!("{THREADS_ENV} must be positive")));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
    }
    Ok(())
}

/// Full process behaviour minus `std::process::exit`: returns the exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Outcome::InvalidInput.code() } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (command, flags) = match &cli.command {
        Sub::Verify(f) => (Command::Verify, f),
        Sub::Sweep(f) => (Command::Sweep, f),
        Sub::Integrate(f) => (Command::Integrate, f),
        Sub::OracleCompare(f) => (Command::OracleCompare, f),
    };
    let result = configure_threads()
        .and_then(|_| RunConfig::from_flags(command, flags))
        .and_then(|cfg| {
            let out = run(&cfg)?;
            if let Some(dir) = &cfg.out {
                write_artifacts(dir, &out)?;
            }
            Ok(out)
        });
    match result {
        Ok(out) => {
            // A closed stdout (e.g. piped into `head`) must not turn a verdict into a panic.
            let _ = writeln!(std::io::stdout().lock(), "{}", out.json);
            out.outcome.code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            Outcome::from(&e).code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_with(profile: &str, system: Option<&str>, c: Option<i32>) -> RunConfig {
        RunConfig {
            profile: Some(serde_json::Value::String(profile.into())),
            system: system.map(String::from),
            c,
            ..RunConfig::empty(Command::Sweep)
        }
    }

    #[test]
    fn profile_kind_follows_the_system() {
        let p = resolve_profile(&cfg_with("slice", Some("eq54"), None)).unwrap();
        assert_eq!(p.kind, RotationKind::SphereHypersurface);
        let p = resolve_profile(&cfg_with("slice", Some("bre"), None)).unwrap();
        assert_eq!(p.kind, RotationKind::SphereSurface);
        let p = resolve_profile(&cfg_with("slice", Some("bre"), Some(-1))).unwrap();
        assert_eq!(p.kind, RotationKind::HyperbolicSurface);
        let p = resolve_profile(&cfg_with("flat:A=0.5,B=0", None, None)).unwrap();
        assert_eq!(p.kind, RotationKind::SphereSurface);
        let mut explicit = cfg_with("cylinder:k0=0.5", Some("mean-curvature"), None);
        explicit.kind = Some("hyperbolic-surface".into());
        assert_eq!(resolve_profile(&explicit).unwrap().kind, RotationKind::HyperbolicSurface);
        assert!(resolve_profile(&cfg_with("semiparallel:C=1", Some("bre"), None)).is_err());
    }

    #[test]
    fn flags_override_config_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, r#"{"suite": "cylinder", "m": 3, "tol": 1e-9}"#).unwrap();
        let flags = Flags {
            config: Some(path),
            m: Some(5),
            ..Flags::default()
        };
        let cfg = RunConfig::from_flags(Command::Verify, &flags).unwrap();
        assert_eq!(cfg.suite.as_deref(), Some("cylinder"));
        assert_eq!(cfg.m, Some(5));
        assert_eq!(cfg.tol, Some(1e-9));
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        let invalid: CliError = GeometryError::InvalidInput("x".into()).into();
        let numerical: CliError = GeometryError::Numerical("x".into()).into();
        let singular: CliError = GeometryError::Singularity { what: "sin s", at: 0.0 }.into();
        assert_eq!(Outcome::from(&invalid).code(), 2);
        assert_eq!(Outcome::from(&numerical).code(), 3);
        assert_eq!(Outcome::from(&singular).code(), 3);
        let bad_initial = Flags {
            initial: Some("1,two".into()),
            ..Flags::default()
        };
        assert!(matches!(RunConfig::from_flags(Command::Integrate, &bad_initial), Err(CliError::Invalid(_))));
    }
}
