use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hma_core::problem::{builtin, ProblemSpec, BUILTIN_CASES};
use hma_core::solver::SolverConfig;
use hma_core::stepper::{Family, Method};
use serde::Deserialize;

pub const DEFAULT_METHOD: Method = Method::Rk4;
pub const DEFAULT_SPLINE_ORDER: usize = 5;
pub const DEFAULT_GAMMA: f64 = 0.95;
pub const DEFAULT_N_Y: usize = 201;
pub const DEFAULT_OUTPUT_DIR: &str = "out";
pub const DEFAULT_N_Y_LIST: [usize; 4] = [51, 101, 201, 401];

/// Bad flags, config files or values. Maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "hma", version, about = "Characteristic solver for the hyperbolic Monge-Ampere equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve once and write field.csv and meta.json.
    Solve(SolveArgs),
    /// Solve on a refinement list and fit convergence orders.
    Convergence(ConvergenceArgs),
    /// Write the per-cell integral residual map.
    Residual(ResidualArgs),
    /// Trace characteristics through a solved field.
    Trace(TraceArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat TOML file whose keys are the long flag names; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(BUILTIN_CASES))]
    pub case: Option<String>,
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["euler", "modified-euler", "rk4"]))]
    pub method: Option<String>,
    /// Spline order (degree + 1).
    #[arg(long)]
    pub spline_order: Option<usize>,
    #[arg(long)]
    pub n_y: Option<usize>,
    /// Safety factor of the step-size rule, in (0, 1].
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Replace interpolated slopes with the exact ones.
    #[arg(long)]
    pub oracle_slopes: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Strictly ascending N_y values, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n_y_list: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Args)]
pub struct ResidualArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Evaluate the exact solution on a uniform grid instead of solving.
    #[arg(long)]
    pub from_exact: bool,
    #[arg(long)]
    pub gauss_points: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Start point "x,y"; repeatable.
    #[arg(long = "start", allow_hyphen_values = true)]
    pub starts: Vec<String>,
    /// Add N equidistant interior start points on the west edge.
    #[arg(long)]
    pub west_starts: Option<usize>,
    #[arg(long, value_parser = ["alpha", "beta", "both"])]
    pub family: Option<String>,
    /// Part of each characteristic to write, walking away from the start.
    #[arg(long, value_parser = ["full", "backward", "forward"])]
    pub direction: Option<String>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub case: Option<String>,
    pub method: Option<String>,
    pub spline_order: Option<usize>,
    pub n_y: Option<usize>,
    pub gamma: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub oracle_slopes: Option<bool>,
    pub n_y_list: Option<Vec<usize>>,
    pub from_exact: Option<bool>,
    pub gauss_points: Option<usize>,
    pub start: Option<Vec<String>>,
    pub west_starts: Option<usize>,
    pub family: Option<String>,
    pub direction: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Settings shared by every subcommand, after merging flags, file and defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub case: String,
    pub spec: ProblemSpec,
    pub solver: SolverConfig,
    pub n_y: usize,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn echo(&self) -> serde_json::Value {
        serde_json::json!({
            "case": self.case,
            "method": self.solver.method.name(),
            "spline_order": self.solver.spline_order,
            "n_y": self.n_y,
            "gamma": self.solver.gamma,
            "oracle_slopes": self.solver.oracle_slopes,
            "output_dir": self.output_dir.display().to_string(),
        })
    }
}

fn parse_method(s: &str) -> Result<Method, UsageError> {
    s.parse().map_err(|_| usage(format!("unknown method '{s}' (expected euler, modified-euler or rk4)")))
}

/// Merges flags over the optional config file and checks the shared settings.
pub fn resolve_common(args: &CommonArgs) -> Result<(RunConfig, FileConfig), UsageError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let case = args.case.clone().or_else(|| file.case.clone()).unwrap_or_else(|| "default".into());
    let spec = builtin(&case).map_err(|e| usage(e.to_string()))?;
    let method = match args.method.as_deref().or(file.method.as_deref()) {
        Some(m) => parse_method(m)?,
        None => DEFAULT_METHOD,
    };
    let solver = SolverConfig::new(method)
        .with_spline_order(args.spline_order.or(file.spline_order).unwrap_or(DEFAULT_SPLINE_ORDER))
        .with_gamma(args.gamma.or(file.gamma).unwrap_or(DEFAULT_GAMMA))
        .with_oracle_slopes(args.oracle_slopes || file.oracle_slopes.unwrap_or(false));
    let n_y = args.n_y.or(file.n_y).unwrap_or(DEFAULT_N_Y);
    solver.validate(n_y).map_err(|e| usage(e.to_string()))?;
    if solver.oracle_slopes && spec.exact.is_none() {
        return Err(usage(format!("--oracle-slopes needs an exact solution; case '{case}' has none")));
    }
    let output_dir = args
        .output_dir
        .clone()
        .or_else(|| file.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    Ok((RunConfig { case, spec, solver, n_y, output_dir }, file))
}

#[derive(Debug, Clone)]
pub struct ConvergenceConfig {
    pub run: RunConfig,
    pub n_y_list: Vec<usize>,
}

pub fn resolve_convergence(args: &ConvergenceArgs) -> Result<ConvergenceConfig, UsageError> {
    let (run, file) = resolve_common(&args.common)?;
    let n_y_list = args
        .n_y_list
        .clone()
        .or(file.n_y_list)
        .unwrap_or_else(|| DEFAULT_N_Y_LIST.to_vec());
    if n_y_list.is_empty() {
        return Err(usage("--n-y-list is empty"));
    }
    if n_y_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage(format!("--n-y-list must be strictly ascending, got {n_y_list:?}")));
    }
    for &n in &n_y_list {
        run.solver.validate(n).map_err(|e| usage(e.to_string()))?;
    }
    Ok(ConvergenceConfig { run, n_y_list })
}

#[derive(Debug, Clone)]
pub struct ResidualConfig {
    pub run: RunConfig,
    pub from_exact: bool,
    pub gauss_points: usize,
}

pub fn resolve_residual(args: &ResidualArgs) -> Result<ResidualConfig, UsageError> {
    let (run, file) = resolve_common(&args.common)?;
    let from_exact = args.from_exact || file.from_exact.unwrap_or(false);
    if from_exact && run.spec.exact.is_none() {
        return Err(usage(format!("--from-exact needs an exact solution; case '{}' has none", run.case)));
    }
    let gauss_points = args
        .gauss_points
        .or(file.gauss_points)
        .unwrap_or(hma_core::residual::DEFAULT_GAUSS_POINTS);
    if !(1..=5).contains(&gauss_points) {
        return Err(usage(format!("--gauss-points {gauss_points} outside 1..=5")));
    }
    if run.n_y < 3 {
        return Err(usage("residual needs n_y >= 3"));
    }
    Ok(ResidualConfig { run, from_exact, gauss_points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Full,
    Backward,
    Forward,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Full => "full",
            Direction::Backward => "backward",
            Direction::Forward => "forward",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TraceConfig {
    pub run: RunConfig,
    pub starts: Vec<(f64, f64)>,
    pub families: Vec<Family>,
    pub direction: Direction,
}

fn parse_point(s: &str) -> Result<(f64, f64), UsageError> {
    let bad = || usage(format!("start point '{s}' is not of the form x,y"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    if !(x.is_finite() && y.is_finite()) {
        return Err(bad());
    }
    Ok((x, y))
}

pub fn resolve_trace(args: &TraceArgs) -> Result<TraceConfig, UsageError> {
    let (run, file) = resolve_common(&args.common)?;
    let raw = if args.starts.is_empty() { file.start.clone().unwrap_or_default() } else { args.starts.clone() };
    let mut starts = raw.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>, _>>()?;
    let d = run.spec.domain;
    if let Some(n) = args.west_starts.or(file.west_starts) {
        let dy = (d.y_max - d.y_min) / (n + 1) as f64;
        starts.extend((1..=n).map(|k| (d.x_min, d.y_min + k as f64 * dy)));
    }
    if starts.is_empty() {
        return Err(usage("trace needs at least one --start or --west-starts"));
    }
    if let Some(&(x, y)) = starts.iter().find(|&&(x, y)| !d.contains(x, y)) {
        return Err(usage(format!(
            "start ({x}, {y}) outside the domain [{}, {}] x [{}, {}]",
            d.x_min, d.x_max, d.y_min, d.y_max
        )));
    }
    let families = match args.family.as_deref().or(file.family.as_deref()).unwrap_or("both") {
        "alpha" => vec![Family::Alpha],
        "beta" => vec![Family::Beta],
        "both" => vec![Family::Alpha, Family::Beta],
        other => return Err(usage(format!("unknown family '{other}' (expected alpha, beta or both)"))),
    };
    let direction = match args.direction.as_deref().or(file.direction.as_deref()).unwrap_or("full") {
        "full" => Direction::Full,
        "backward" => Direction::Backward,
        "forward" => Direction::Forward,
        other => return Err(usage(format!("unknown direction '{other}' (expected full, backward or forward)"))),
    };
    Ok(TraceConfig { run, starts, families, direction })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common() -> CommonArgs {
        CommonArgs::default()
    }

    #[test]
    fn defaults() {
        let (run, _) = resolve_common(&common()).unwrap();
        assert_eq!(run.case, "default");
        assert_eq!(run.solver.method, Method::Rk4);
        assert_eq!(run.solver.spline_order, 5);
        assert_eq!(run.solver.gamma, 0.95);
        assert_eq!(run.n_y, 201);
    }

    #[test]
    fn rejects_bad_values_before_solving() {
        let mut a = common();
        a.gamma = Some(1.5);
        assert!(resolve_common(&a).is_err());
        let mut a = common();
        a.n_y = Some(5);
        assert!(resolve_common(&a).is_err());
        let mut a = common();
        a.case = Some("nonsmooth".into());
        a.oracle_slopes = true;
        assert!(resolve_common(&a).is_err());
    }

    #[test]
    fn refinement_list_must_ascend() {
        let args = |list: Vec<usize>| ConvergenceArgs { common: common(), n_y_list: Some(list) };
        assert!(resolve_convergence(&args(vec![51, 101])).is_ok());
        assert!(resolve_convergence(&args(vec![101, 51])).is_err());
        assert!(resolve_convergence(&args(vec![51, 51])).is_err());
        assert!(resolve_convergence(&args(vec![])).is_err());
    }

    #[test]
    fn west_starts_are_interior_and_equidistant() {
        let args = TraceArgs {
            common: common(),
            starts: vec![],
            west_starts: Some(7),
            family: None,
            direction: None,
        };
        let cfg = resolve_trace(&args).unwrap();
        assert_eq!(cfg.starts.len(), 7);
        assert_eq!(cfg.families.len(), 2);
        let d = cfg.run.spec.domain;
        let step = (d.y_max - d.y_min) / 8.0;
        for (k, &(x, y)) in cfg.starts.iter().enumerate() {
            assert_eq!(x, d.x_min);
            assert!((y - (d.y_min + (k + 1) as f64 * step)).abs() < 1e-15);
        }
    }

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point("1.7, 1.6").unwrap(), (1.7, 1.6));
        assert_eq!(parse_point("0,-0.25").unwrap(), (0.0, -0.25));
        assert!(parse_point("1.7").is_err());
        assert!(parse_point("a,b").is_err());
        assert!(parse_point("nan,0").is_err());
    }

    #[test]
    fn file_keys_are_kebab_case_and_strict() {
        let f: FileConfig = toml::from_str("n-y = 51\nspline-order = 2\nmethod = \"euler\"").unwrap();
        assert_eq!(f.n_y, Some(51));
        assert_eq!(f.spline_order, Some(2));
        assert!(toml::from_str::<FileConfig>("n_y = 51").is_err());
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
    }
}
