use std::time::Instant;

use rayon::prelude::*;
use redheffer_core::closed_form::eval_closed_form;
use redheffer_core::inequality::{
    evaluate_report, monotonicity_scan, quotient_eval, theorem_jobs, ContextCache, GridSpec,
    InequalityReport, MonotonicityScan, QuotientKind, ReportStatus,
};
use redheffer_core::number_theory::{build_cache, omega_eta_identity_residual, MAX_CACHE_M};
use redheffer_core::rayleigh::{
    conjecture_record, scaled_sequences, sigma_by_zero_sum, sigma_table_recurrence,
    ConjectureRecord, ConjectureStatus, SequenceTable,
};
use redheffer_core::series::{
    eval_inorm, eval_inorm_deriv, eval_jnorm, eval_jnorm_deriv, ratio_i, ratio_j,
};
use redheffer_core::zeros::{first_zero, first_zero_bracket, ENGINE_ZERO_TOL};
use redheffer_core::{Error, Order, SeriesValue};
use serde::Serialize;

use crate::cache::context_cache;
use crate::config::{FunctionKind, RunConfig, SeriesFunction, SubcommandKind};

/// Orders at which the eta identity is checked, and its range.
const ETA_IDENTITY_M_MAX: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalRecord {
    pub function: &'static str,
    pub nu: Option<f64>,
    pub r: Option<f64>,
    pub x: f64,
    pub value: Option<f64>,
    pub abs_error: Option<f64>,
    pub terms_used: Option<usize>,
    pub method: Option<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroRow {
    pub n: usize,
    pub lo: f64,
    pub mid: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroReport {
    pub nu: f64,
    pub tol: f64,
    pub euler_rayleigh_bracket: (f64, f64),
    pub bracket_holds: bool,
    pub zeros: Vec<ZeroRow>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayleighRow {
    pub m: usize,
    pub sigma: f64,
    pub rel_error: f64,
    pub zero_sum: Option<f64>,
    pub zero_sum_abs_error: Option<f64>,
    /// Recurrence and zero sum agree within their combined bounds.
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayleighReport {
    pub nu: f64,
    pub zero_count: usize,
    pub rows: Vec<RayleighRow>,
    pub sequences: Option<SequenceTable>,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaReport {
    pub m_max: usize,
    pub max_residual: f64,
    pub increments_positive: bool,
    /// `η(2m)` increasing for every m below the Bernoulli cache limit.
    pub eta_increasing: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub exploratory: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OverallStatus {
    Passed,
    Failed,
    /// Every asserted check passed; some exploratory evidence contradicts
    /// the expectation.
    ExploratoryAnomaly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Versions {
    pub redheffer_core: &'static str,
    pub redheffer_cli: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportBundle {
    pub config: RunConfig,
    pub versions: Versions,
    pub evaluations: Vec<EvalRecord>,
    pub zero_tables: Vec<ZeroReport>,
    pub rayleigh: Vec<RayleighReport>,
    pub inequality: Vec<InequalityReport>,
    pub monotonicity: Vec<MonotonicityScan>,
    pub eta_identity: Option<EtaReport>,
    pub conjecture: Vec<ConjectureRecord>,
    pub summary: Summary,
    pub status: OverallStatus,
    pub timing: Timing,
}

impl ReportBundle {
    pub fn empty(config: RunConfig) -> Self {
        ReportBundle {
            summary: Summary {
                suite: format!("{:?}", config.subcommand).to_lowercase(),
                ..Summary::default()
            },
            config,
            versions: Versions {
                redheffer_core: redheffer_core::VERSION,
                redheffer_cli: env!("CARGO_PKG_VERSION"),
            },
            evaluations: vec![],
            zero_tables: vec![],
            rayleigh: vec![],
            inequality: vec![],
            monotonicity: vec![],
            eta_identity: None,
            conjecture: vec![],
            status: OverallStatus::Passed,
            timing: Timing { elapsed_ms: 0.0 },
        }
    }

    /// 0 when every asserted check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.status == OverallStatus::Failed {
            1
        } else {
            0
        }
    }

    fn finish(&mut self) {
        let mut s = Summary {
            suite: std::mem::take(&mut self.summary.suite),
            ..Summary::default()
        };
        let mut anomaly = false;
        let mut tally = |ok: bool| if ok { s.passed += 1 } else { s.failed += 1 };
        for e in &self.evaluations {
            tally(e.error.is_none());
        }
        for z in &self.zero_tables {
            tally(z.error.is_none() && z.bracket_holds);
        }
        for r in &self.rayleigh {
            tally(r.passed);
        }
        if let Some(e) = &self.eta_identity {
            tally(e.passed);
        }
        for r in &self.inequality {
            match r.status {
                ReportStatus::Passed => s.passed += 1,
                ReportStatus::Failed => s.failed += 1,
                ReportStatus::Exploratory => {
                    s.exploratory += 1;
                    anomaly |= r.anomaly;
                }
            }
        }
        for m in &self.monotonicity {
            if m.expected.is_some() {
                if m.is_monotone {
                    s.passed += 1;
                } else {
                    s.failed += 1;
                }
            } else {
                s.exploratory += 1;
                anomaly |= !m.is_monotone;
            }
        }
        for c in &self.conjecture {
            s.exploratory += 1;
            anomaly |= !(c.status == ConjectureStatus::Ok && c.margin > 0.0);
        }
        self.status = if s.failed > 0 {
            OverallStatus::Failed
        } else if anomaly {
            OverallStatus::ExploratoryAnomaly
        } else {
            OverallStatus::Passed
        };
        self.summary = s;
    }
}

/// Configuration problems found only once computation starts.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
}

fn order(nu: f64) -> Result<Order, RunError> {
    Order::new(nu).map_err(|e| RunError::Usage(e.to_string()))
}

pub fn run_suite(config: &RunConfig) -> Result<ReportBundle, RunError> {
    let start = Instant::now();
    let mut bundle = ReportBundle::empty(config.clone());
    let cache = context_cache(config.cache_dir.as_deref(), config.zeros, ENGINE_ZERO_TOL);
    match config.subcommand {
        SubcommandKind::Eval => bundle.evaluations = run_eval(config, &cache)?,
        SubcommandKind::Zeros => bundle.zero_tables = run_zeros(config)?,
        SubcommandKind::Rayleigh => bundle.rayleigh = run_rayleigh(config, &cache)?,
        SubcommandKind::Check => bundle.inequality = run_checks(config, &cache)?,
        SubcommandKind::Conjecture => bundle.conjecture = run_conjecture(&config.nu, config.m_max, &cache)?,
        SubcommandKind::Report => {
            bundle.inequality = run_checks(config, &cache)?;
            bundle.monotonicity = run_monotonicity(config, &cache)?;
            bundle.eta_identity = Some(run_eta_identity());
            let nu = if config.nu.is_empty() {
                crate::config::CONJECTURE_NU_GRID.to_vec()
            } else {
                config.nu.clone()
            };
            bundle.conjecture = run_conjecture(&nu, config.m_max, &cache)?;
        }
    }
    bundle.finish();
    bundle.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(bundle)
}

/// The value, with its error bound when the function provides one.
fn eval_point(
    f: FunctionKind,
    nu: f64,
    r: Option<f64>,
    x: f64,
    tol: f64,
    cache: &ContextCache,
) -> Result<(f64, Option<SeriesValue>), Error> {
    let o = Order::new(nu)?;
    let v = match f {
        FunctionKind::Series(s) => match s {
            SeriesFunction::Jnorm => eval_jnorm(o, x, tol)?,
            SeriesFunction::Inorm => eval_inorm(o, x, tol)?,
            SeriesFunction::JnormDeriv => eval_jnorm_deriv(o, x, tol)?,
            SeriesFunction::InormDeriv => eval_inorm_deriv(o, x, tol)?,
            SeriesFunction::RatioJ => ratio_j(o, x, cache.get(o)?.zeros(), tol)?,
            SeriesFunction::RatioI => ratio_i(o, x, cache.get(o)?.zeros(), tol)?,
        },
        FunctionKind::Quotient(k) => return Ok((quotient_eval(k, &*cache.get(o)?, x, r)?, None)),
        FunctionKind::ClosedForm(k) => return Ok((eval_closed_form(k, x)?, None)),
    };
    Ok((v.value, Some(v)))
}

fn run_eval(config: &RunConfig, cache: &ContextCache) -> Result<Vec<EvalRecord>, RunError> {
    let f = config.function.ok_or_else(|| RunError::Usage("eval needs --function".into()))?;
    if let FunctionKind::ClosedForm(k) = f {
        return Ok(config
            .x
            .iter()
            .map(|&x| record(f, None, None, x, eval_closed_form(k, x).map(|v| (v, None))))
            .collect());
    }
    let radii: Vec<Option<f64>> = match f {
        FunctionKind::Quotient(k) if k.needs_radius() => {
            if config.r.is_empty() {
                return Err(RunError::Usage(format!("{} needs --r", k.tag())));
            }
            config.r.iter().map(|&r| Some(r)).collect()
        }
        _ => vec![None],
    };
    let mut jobs = Vec::new();
    for &nu in &config.nu {
        order(nu)?;
        for &r in &radii {
            for &x in &config.x {
                jobs.push((nu, r, x));
            }
        }
    }
    Ok(jobs
        .into_par_iter()
        .map(|(nu, r, x)| {
            let v = eval_point(f, nu, r, x, config.tol, cache);
            record(f, Some(nu), r, x, v)
        })
        .collect())
}

fn record(
    f: FunctionKind,
    nu: Option<f64>,
    r: Option<f64>,
    x: f64,
    v: Result<(f64, Option<SeriesValue>), Error>,
) -> EvalRecord {
    let (value, series, error) = match v {
        Ok((value, series)) => (Some(value), series, None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    let method = match (f, &series) {
        (FunctionKind::ClosedForm(_), _) => Some("closed_form".to_owned()),
        (_, Some(s)) => Some(method_name(s)),
        _ => None,
    };
    EvalRecord {
        function: f.name(),
        nu,
        r,
        x,
        value,
        abs_error: series.map(|s| s.abs_error),
        terms_used: series.map(|s| s.terms_used),
        method,
        error,
    }
}

fn method_name(v: &SeriesValue) -> String {
    serde_json::to_value(v.method)
        .ok()
        .and_then(|m| m.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn run_zeros(config: &RunConfig) -> Result<Vec<ZeroReport>, RunError> {
    let orders = config.nu.iter().map(|&nu| order(nu)).collect::<Result<Vec<_>, _>>()?;
    Ok(orders
        .into_par_iter()
        .map(|o| {
            let (blo, bhi) = first_zero_bracket(o);
            let dir = config.cache_dir.as_deref();
            let table = match dir {
                Some(d) => crate::cache::cached_zero_table(d, o, config.zeros, config.tol),
                None => redheffer_core::zeros::zero_table(o, config.zeros, config.tol),
            };
            match table {
                Ok(t) => {
                    let j = t.first();
                    ZeroReport {
                        nu: o.nu(),
                        tol: config.tol,
                        euler_rayleigh_bracket: (blo, bhi),
                        bracket_holds: blo < j.lo && j.hi < bhi,
                        zeros: t
                            .zeros()
                            .iter()
                            .map(|z| ZeroRow {
                                n: z.n,
                                lo: z.lo,
                                mid: z.mid,
                                hi: z.hi,
                            })
                            .collect(),
                        error: None,
                    }
                }
                Err(e) => ZeroReport {
                    nu: o.nu(),
                    tol: config.tol,
                    euler_rayleigh_bracket: (blo, bhi),
                    bracket_holds: false,
                    zeros: vec![],
                    error: Some(e.to_string()),
                },
            }
        })
        .collect())
}

fn rayleigh_for(o: Order, m_max: usize, cache: &ContextCache) -> Result<RayleighReport, Error> {
    let ctx = cache.get(o)?;
    let table = sigma_table_recurrence(o, m_max)?;
    let rows = (1..=m_max)
        .map(|m| {
            let s = table.sigma(m);
            let rel = table.rel_error(m);
            let z = sigma_by_zero_sum(o, m, ctx.zeros()).ok();
            RayleighRow {
                m,
                sigma: s,
                rel_error: rel,
                zero_sum: z.map(|z| z.value),
                zero_sum_abs_error: z.map(|z| z.abs_error),
                agrees: z.map(|z| (z.value - s).abs() <= z.abs_error + rel * s),
            }
        })
        .collect::<Vec<_>>();
    let sequences = if m_max >= 2 {
        Some(scaled_sequences(o, m_max, ctx.j1())?)
    } else {
        None
    };
    let sequences_ok = sequences.as_ref().map_or(true, |s| {
        !s.alpha_above_one.is_violated() && !s.alpha_decreasing.is_violated() && !s.beta_decreasing.is_violated()
    });
    let passed = sequences_ok && rows.iter().all(|r| r.agrees != Some(false));
    Ok(RayleighReport {
        nu: o.nu(),
        zero_count: ctx.zeros().len(),
        rows,
        sequences,
        passed,
        error: None,
    })
}

fn run_rayleigh(config: &RunConfig, cache: &ContextCache) -> Result<Vec<RayleighReport>, RunError> {
    let orders = config.nu.iter().map(|&nu| order(nu)).collect::<Result<Vec<_>, _>>()?;
    Ok(orders
        .into_par_iter()
        .map(|o| {
            rayleigh_for(o, config.m_max, cache).unwrap_or_else(|e| RayleighReport {
                nu: o.nu(),
                zero_count: 0,
                rows: vec![],
                sequences: None,
                passed: false,
                error: Some(e.to_string()),
            })
        })
        .collect())
}

fn run_checks(config: &RunConfig, cache: &ContextCache) -> Result<Vec<InequalityReport>, RunError> {
    let mut jobs = Vec::new();
    for &t in &config.theorems {
        let spec = GridSpec {
            nu_values: config.nu_for(t),
            interior_points: config.grid,
            r_values: Some(config.r.clone()),
            tol_margin: config.tol,
        };
        for (o, r) in theorem_jobs(t, &spec).map_err(|e| RunError::Usage(e.to_string()))? {
            jobs.push((t, o, r));
        }
    }
    Ok(jobs
        .into_par_iter()
        .map(|(t, o, r)| match cache.get(o) {
            Ok(ctx) => evaluate_report(t, &ctx, r, config.grid, config.tol),
            Err(e) => InequalityReport::failed(t, o.nu(), r, config.grid, e.to_string()),
        })
        .collect())
}

fn run_monotonicity(config: &RunConfig, cache: &ContextCache) -> Result<Vec<MonotonicityScan>, RunError> {
    let nus = if config.nu.is_empty() {
        redheffer_core::inequality::DEFAULT_NU_GRID.to_vec()
    } else {
        config.nu.clone()
    };
    let mut jobs = Vec::new();
    for kind in QuotientKind::ALL {
        for &nu in &nus {
            let o = order(nu)?;
            if kind.needs_radius() {
                jobs.extend(config.r.iter().map(|&r| (kind, o, Some(r))));
            } else {
                jobs.push((kind, o, None));
            }
        }
    }
    Ok(jobs
        .into_par_iter()
        .map(|(kind, o, r)| {
            let scan = cache
                .get(o)
                .and_then(|ctx| monotonicity_scan(kind, &ctx, r, config.grid));
            scan.unwrap_or_else(|_| MonotonicityScan {
                kind,
                nu: o.nu(),
                r,
                expected: kind.expected_direction(),
                observed: None,
                worst_violation: f64::NAN,
                is_monotone: false,
            })
        })
        .collect())
}

fn run_eta_identity() -> EtaReport {
    let check = || -> Result<EtaReport, Error> {
        let nt = build_cache(MAX_CACHE_M)?;
        let o = Order::new(-0.5)?;
        let j1 = first_zero(o, ENGINE_ZERO_TOL)?;
        let seq = scaled_sequences(o, ETA_IDENTITY_M_MAX + 1, &j1)?;
        let mut max_residual = 0.0f64;
        let mut increments_positive = true;
        for m in 1..=ETA_IDENTITY_M_MAX {
            let id = omega_eta_identity_residual(m, &nt, &seq)?;
            max_residual = max_residual.max(id.residual);
            increments_positive &= id.increment_positive;
        }
        let mut eta_increasing = true;
        for m in 1..MAX_CACHE_M {
            eta_increasing &= nt.eta_increases_at(m)? == Some(true);
        }
        Ok(EtaReport {
            m_max: ETA_IDENTITY_M_MAX,
            max_residual,
            increments_positive,
            eta_increasing,
            passed: max_residual <= 1e-12 && increments_positive && eta_increasing,
        })
    };
    check().unwrap_or(EtaReport {
        m_max: ETA_IDENTITY_M_MAX,
        max_residual: f64::NAN,
        increments_positive: false,
        eta_increasing: false,
        passed: false,
    })
}

/// Conjecture records ordered by `(ν, m)`.
pub fn run_conjecture(nus: &[f64], m_max: usize, cache: &ContextCache) -> Result<Vec<ConjectureRecord>, RunError> {
    let orders = nus.iter().map(|&nu| order(nu)).collect::<Result<Vec<_>, _>>()?;
    let per_order: Vec<Vec<ConjectureRecord>> = orders
        .into_par_iter()
        .map(|o| {
            let nu = o.nu();
            let tables = (|| -> Result<_, Error> {
                Ok((
                    cache.get(o)?,
                    cache.get(o.shifted(1))?,
                    sigma_table_recurrence(o, m_max + 1)?,
                    sigma_table_recurrence(o.shifted(1), m_max + 1)?,
                ))
            })();
            match tables {
                Ok((ctx, next, a, b)) => (1..=m_max)
                    .map(|m| {
                        conjecture_record(o, m, &a, &b, ctx.zeros(), next.zeros()).unwrap_or_else(|_| {
                            ConjectureRecord::inconclusive(nu, m, ctx.j1().mid * ctx.j1().mid)
                        })
                    })
                    .collect(),
                Err(_) => (1..=m_max)
                    .map(|m| ConjectureRecord::inconclusive(nu, m, f64::NAN))
                    .collect(),
            }
        })
        .collect();
    Ok(per_order.into_iter().flatten().collect())
}
