use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use redheffer_core::inequality::{
    QuotientKind, TheoremId, BW1_NU_GRID, DEFAULT_GRID_POINTS, DEFAULT_NU_GRID, DEFAULT_R_VALUES,
    DEFAULT_TOL_MARGIN,
};
use redheffer_core::zeros::{DEFAULT_ZERO_COUNT, ENGINE_ZERO_TOL};
use redheffer_core::closed_form::ClosedFormKind;
use serde::Serialize;

pub const CACHE_ENV: &str = "REDHEFFER_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".redheffer-cache";

/// Orders swept by `conjecture` when neither --nu nor --nu-range is given.
pub const CONJECTURE_NU_GRID: [f64; 7] = [-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0];
pub const DEFAULT_M_MAX: usize = 20;
/// Zeros used by the `rayleigh` zero-sum cross-check.
pub const RAYLEIGH_CROSS_CHECK_ZEROS: usize = 2000;

#[derive(Debug, Parser)]
#[command(name = "redheffer", version, about = "Verify Redheffer-type inequalities for normalized Bessel functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function at points.
    Eval(EvalArgs),
    /// Certified zero enclosures.
    Zeros(CommonArgs),
    /// Rayleigh sums and the scaled proof sequences.
    Rayleigh(CommonArgs),
    /// Check theorem inequalities on interior grids.
    Check(CheckArgs),
    /// Sweep the open conjecture's ratio.
    Conjecture(CommonArgs),
    /// Run the full verification suite.
    Report(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Orders, comma separated or repeated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nu: Vec<f64>,
    /// Inclusive order range `start:end:step`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "nu")]
    pub nu_range: Option<String>,
    /// Radii for the modified-Bessel theorems.
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    /// Interior grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Highest Rayleigh index m
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Number of zeros per order.
    #[arg(long)]
    pub zeros: Option<usize>,
    /// Margin slack for `check`/`report`, enclosure width for `zeros`, series tolerance for `eval`.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Zero-table cache directory (default: $REDHEFFER_CACHE_DIR, then .redheffer-cache)
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Do not read or write the zero-table cache.
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Theorem tag (T1, T2, T3, T5, T6, CONJ, TAN, CHAIN, ZHU, BW1) or `all`.
    #[arg(long, default_value = "all")]
    pub theorem: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// jnorm, inorm, jnorm_deriv, inorm_deriv, ratio_j, ratio_i, a quotient
    /// tag (phi, Phi, Omega, Psi, Gamma, Theta, psi, omega_x) or a closed form.
    #[arg(long, default_value = "jnorm")]
    pub function: String,
    /// Evaluation points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SubcommandKind {
    Eval,
    Zeros,
    Rayleigh,
    Check,
    Conjecture,
    Report,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FunctionKind {
    Series(SeriesFunction),
    Quotient(QuotientKind),
    ClosedForm(ClosedFormKind),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesFunction {
    Jnorm,
    Inorm,
    JnormDeriv,
    InormDeriv,
    RatioJ,
    RatioI,
}

impl FunctionKind {
    pub fn parse(s: &str) -> Result<FunctionKind, String> {
        let series = match s {
            "jnorm" => Some(SeriesFunction::Jnorm),
            "inorm" => Some(SeriesFunction::Inorm),
            "jnorm_deriv" => Some(SeriesFunction::JnormDeriv),
            "inorm_deriv" => Some(SeriesFunction::InormDeriv),
            "ratio_j" => Some(SeriesFunction::RatioJ),
            "ratio_i" => Some(SeriesFunction::RatioI),
            _ => None,
        };
        if let Some(f) = series {
            return Ok(FunctionKind::Series(f));
        }
        if let Some(k) = QuotientKind::from_tag(s) {
            return Ok(FunctionKind::Quotient(k));
        }
        s.parse::<ClosedFormKind>()
            .map(FunctionKind::ClosedForm)
            .map_err(|_| format!("unknown function '{s}'"))
    }

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Series(f) => match f {
                SeriesFunction::Jnorm => "jnorm",
                SeriesFunction::Inorm => "inorm",
                SeriesFunction::JnormDeriv => "jnorm_deriv",
                SeriesFunction::InormDeriv => "inorm_deriv",
                SeriesFunction::RatioJ => "ratio_j",
                SeriesFunction::RatioI => "ratio_i",
            },
            FunctionKind::Quotient(k) => k.tag(),
            FunctionKind::ClosedForm(k) => k.name(),
        }
    }
}

/// Validated run parameters. Everything except the output and cache paths is
/// echoed into the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: SubcommandKind,
    pub theorems: Vec<TheoremId>,
    pub function: Option<FunctionKind>,
    pub x: Vec<f64>,
    /// Empty means "the default grid for each check".
    pub nu: Vec<f64>,
    pub r: Vec<f64>,
    pub grid: usize,
    pub m_max: usize,
    pub zeros: usize,
    pub tol: f64,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

/// Round to 12 decimals so `a + i·step` lands on the intended orders.
fn round12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

pub fn parse_nu_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(format!("nu range '{s}' must be start:end:step"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number '{t}' in nu range"));
    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
    if !(step > 0.0 && step.is_finite()) || !(a <= b) {
        return Err(format!("nu range '{s}' needs start <= end and a positive step"));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    if n > 100_000 {
        return Err(format!("nu range '{s}' has too many points"));
    }
    Ok((0..=n).map(|i| round12(a + i as f64 * step)).collect())
}

fn resolve_cache_dir(args: &CommonArgs) -> Option<PathBuf> {
    if args.no_cache {
        return None;
    }
    Some(
        args.cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
    )
}

fn positive(name: &str, v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{name} must be positive and finite (got {v})"))
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig, String> {
        let (subcommand, common, theorems, function, x) = match cli.command {
            Command::Eval(a) => (SubcommandKind::Eval, a.common, vec![], Some(FunctionKind::parse(&a.function)?), a.x),
            Command::Zeros(c) => (SubcommandKind::Zeros, c, vec![], None, vec![]),
            Command::Rayleigh(c) => (SubcommandKind::Rayleigh, c, vec![], None, vec![]),
            Command::Check(a) => {
                let theorems = if a.theorem.eq_ignore_ascii_case("all") {
                    TheoremId::ALL.to_vec()
                } else {
                    vec![a.theorem.parse::<TheoremId>()?]
                };
                (SubcommandKind::Check, a.common, theorems, None, vec![])
            }
            Command::Conjecture(c) => (SubcommandKind::Conjecture, c, vec![], None, vec![]),
            Command::Report(c) => (SubcommandKind::Report, c, TheoremId::ALL.to_vec(), None, vec![]),
        };

        let mut nu = match &common.nu_range {
            Some(range) => parse_nu_range(range)?,
            None => common.nu.clone(),
        };
        for &v in &nu {
            if !(v.is_finite() && v > -1.0) {
                return Err(format!("nu must exceed -1 (got {v})"));
            }
        }
        if nu.is_empty() {
            nu = match subcommand {
                SubcommandKind::Eval if !matches!(function, Some(FunctionKind::ClosedForm(_))) => {
                    return Err("eval needs --nu".into())
                }
                SubcommandKind::Eval => vec![],
                SubcommandKind::Conjecture => CONJECTURE_NU_GRID.to_vec(),
                SubcommandKind::Check | SubcommandKind::Report => vec![],
                _ => DEFAULT_NU_GRID.to_vec(),
            };
        }
        for &v in &x {
            if !v.is_finite() {
                return Err(format!("x must be finite (got {v})"));
            }
        }
        let r = if common.r.is_empty() {
            match subcommand {
                SubcommandKind::Eval => vec![],
                _ => DEFAULT_R_VALUES.to_vec(),
            }
        } else {
            common.r.iter().map(|&v| positive("r", v)).collect::<Result<_, _>>()?
        };
        let grid = common.grid.unwrap_or(DEFAULT_GRID_POINTS);
        if grid < 2 {
            return Err("grid must have at least 2 points".into());
        }
        let m_max = common.m_max.unwrap_or(DEFAULT_M_MAX);
        if m_max == 0 {
            return Err("m-max must be positive".into());
        }
        let zeros = common.zeros.unwrap_or(match subcommand {
            SubcommandKind::Zeros => 20,
            SubcommandKind::Rayleigh => RAYLEIGH_CROSS_CHECK_ZEROS,
            _ => DEFAULT_ZERO_COUNT,
        });
        if zeros == 0 {
            return Err("zeros must be positive".into());
        }
        let tol = match common.tol {
            Some(t) => positive("tol", t)?,
            None => match subcommand {
                SubcommandKind::Check | SubcommandKind::Report => DEFAULT_TOL_MARGIN,
                SubcommandKind::Eval => 1e-12,
                _ => ENGINE_ZERO_TOL,
            },
        };
        let format = common.format.unwrap_or(match subcommand {
            SubcommandKind::Conjecture => Format::Csv,
            _ => Format::Json,
        });
        Ok(RunConfig {
            subcommand,
            theorems,
            function,
            x,
            nu,
            r,
            grid,
            m_max,
            zeros,
            tol,
            format,
            output: common.output.clone(),
            cache_dir: resolve_cache_dir(&common),
        })
    }

    /// Orders for one theorem: the explicit list, else its default grid.
    pub fn nu_for(&self, theorem: TheoremId) -> Vec<f64> {
        if !self.nu.is_empty() {
            return self.nu.clone();
        }
        match theorem {
            TheoremId::Bw1 => BW1_NU_GRID.to_vec(),
            _ => DEFAULT_NU_GRID.to_vec(),
        }
    }
}
