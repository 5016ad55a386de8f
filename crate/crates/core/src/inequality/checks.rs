use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::quotients::{
    log_one_minus_power, log_ratio_base, log_shrink, theorem_limit_form, theorem_point,
};
use super::{
    abscissae, sharp_constants, ContextCache, GridSpec, OrderContext, SharpConstants, TheoremId,
    BW1_MIN_NU, CHAIN_K_MAX,
};
use crate::error::{Error, Result};
use crate::series::{normalized_series, Order};
use crate::zeros::CertifiedZero;

/// Relative distance of the sharpness probes from each end of the domain.
pub const PROBE_OFFSET: f64 = 1e-4;
const TOL_AT_ZERO: f64 = 1e-3;
const TOL_AT_END: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Passed,
    Failed,
    /// The asserted parts hold; the rest is evidence only.
    Exploratory,
}

/// Derivative-ratio quotient evaluated next to both ends of the domain and
/// compared with its limits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessProbe {
    pub x_0: f64,
    pub x_end: f64,
    pub limit_0: Option<f64>,
    pub limit_end: f64,
    pub value_0: Option<f64>,
    pub value_end: f64,
    pub residual_0: Option<f64>,
    pub residual_end: f64,
    /// Tolerances that are asserted; `None` means recorded only.
    pub tol_0: Option<f64>,
    pub tol_end: Option<f64>,
}

impl SharpnessProbe {
    pub fn within_tolerance(&self) -> bool {
        let at_zero = match (self.tol_0, self.residual_0) {
            (Some(t), Some(r)) => r <= t,
            (Some(_), None) => false,
            (None, _) => true,
        };
        let at_end = self.tol_end.map_or(true, |t| self.residual_end <= t);
        at_zero && at_end
    }
}

fn asserted_tolerances(theorem: TheoremId) -> (Option<f64>, Option<f64>) {
    use TheoremId::*;
    let at_zero = matches!(theorem, T1 | T2 | T5 | T6 | Tan).then_some(TOL_AT_ZERO);
    let at_end = matches!(theorem, T1 | T3 | Tan).then_some(TOL_AT_END);
    (at_zero, at_end)
}

pub fn sharpness_probe(theorem: TheoremId, ctx: &OrderContext, r: Option<f64>) -> Result<SharpnessProbe> {
    let c = sharp_constants(theorem, ctx.order(), r, Some(ctx.j1()))?;
    probe_with(&c, ctx)
}

fn probe_with(c: &SharpConstants, ctx: &OrderContext) -> Result<SharpnessProbe> {
    let x_0 = PROBE_OFFSET * c.endpoint;
    let x_end = (1.0 - PROBE_OFFSET) * c.endpoint;
    let limit_0 = c.limit_at_zero();
    let limit_end = c.limit_at_end();
    let value_0 = match limit_0 {
        Some(_) => Some(theorem_limit_form(c, ctx, x_0)?),
        None => None,
    };
    let value_end = theorem_limit_form(c, ctx, x_end)?;
    let (tol_0, tol_end) = asserted_tolerances(c.theorem);
    Ok(SharpnessProbe {
        x_0,
        x_end,
        limit_0,
        limit_end,
        value_0,
        value_end,
        residual_0: limit_0.zip(value_0).map(|(l, v)| (v - l).abs()),
        residual_end: (value_end - limit_end).abs(),
        tol_0,
        tol_end,
    })
}

/// `ϑ_ν · log(1/(1 − x⁴/j⁴))`: how far the `(j²/(j²−x²))^{ϑ_ν}` bound lies
/// above the `((j²+x²)/(j²−x²))^{ϑ_ν/2}` one, in log form.
pub fn bw1_margin(order: Order, x: f64, j1: &CertifiedZero) -> Result<f64> {
    if !(x.abs() < j1.lo) {
        return Err(Error::OutOfDomain { x, limit: j1.lo });
    }
    Ok(bw1_margin_at(order.nu(), x, j1.mid))
}

fn bw1_margin_at(nu: f64, x: f64, j: f64) -> f64 {
    let theta = j * j / (4.0 * (nu + 1.0) * (nu + 2.0));
    let t = (x / j).powi(2);
    -theta * (-t * t).ln_1p()
}

/// The chain `𝒥_ν(x) < 1 − t < 1 − t² < … < 1 − t^k`, `t = x²/j²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerChain {
    pub nu: f64,
    pub x: f64,
    pub jnorm: f64,
    /// `1 − t^k` for k = 1..=k_max.
    pub values: Vec<f64>,
    pub log_values: Vec<f64>,
    /// `log(1 − t^{k+1}) − log(1 − t^k)`, all positive when the chain holds.
    pub log_gaps: Vec<f64>,
    /// `log(1 − t) − log 𝒥_ν(x)`.
    pub first_gap: f64,
    pub strictly_increasing: bool,
    pub below_first: bool,
}

fn power_chain(nu: f64, x: f64, j: f64, k_max: usize, log_jnorm: f64) -> PowerChain {
    let log_values: Vec<f64> = (1..=k_max).map(|k| log_one_minus_power(x, j, k)).collect();
    let log_gaps: Vec<f64> = log_values.windows(2).map(|w| w[1] - w[0]).collect();
    let first_gap = log_values[0] - log_jnorm;
    PowerChain {
        nu,
        x,
        jnorm: log_jnorm.exp(),
        values: log_values.iter().map(|l| l.exp()).collect(),
        strictly_increasing: log_gaps.iter().all(|&g| g > 0.0),
        below_first: first_gap > 0.0,
        log_values,
        log_gaps,
        first_gap,
    }
}

pub fn check_power_chain(order: Order, x: f64, k_max: usize, j1: &CertifiedZero) -> Result<PowerChain> {
    if k_max == 0 {
        return Err(Error::MissingParameter("k_max >= 1"));
    }
    if !(x > 0.0 && x < j1.lo) {
        return Err(Error::OutOfDomain { x, limit: j1.lo });
    }
    let raw = normalized_series(order.nu(), x, true)?;
    let v = raw.value();
    if v <= 0.0 {
        return Err(Error::NearPole { x });
    }
    let log_j = if v < 0.5 { v.ln() } else { raw.minus_one.to_f64().ln_1p() };
    Ok(power_chain(order.nu(), x, j1.mid, k_max, log_j))
}

/// Both bounds and the middle at a single abscissa.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointBounds {
    pub theorem: TheoremId,
    pub nu: f64,
    pub r: Option<f64>,
    pub x: f64,
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
    /// Log-domain margins, as on the grid.
    pub lower_margin: f64,
    pub upper_margin: f64,
}

pub fn inequality_at(theorem: TheoremId, ctx: &OrderContext, r: Option<f64>, x: f64) -> Result<PointBounds> {
    if theorem == TheoremId::Chain {
        return Err(Error::MissingParameter("CHAIN has no single middle; use check_power_chain"));
    }
    let c = sharp_constants(theorem, ctx.order(), r, Some(ctx.j1()))?;
    let p = theorem_point(&c, ctx, x)?;
    let lo = c.lower_exp * p.log_base;
    let up = c.upper_exp * p.log_base;
    Ok(PointBounds {
        theorem,
        nu: ctx.nu(),
        r: c.r,
        x,
        lower: lo.exp(),
        middle: p.log_middle.exp(),
        upper: up.exp(),
        lower_margin: p.log_middle - lo,
        upper_margin: up - p.log_middle,
    })
}

/// Result of checking one inequality instance on its grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub theorem: TheoremId,
    pub nu: f64,
    pub r: Option<f64>,
    pub lower_exp: Option<f64>,
    pub upper_exp: Option<f64>,
    pub grid_points: usize,
    pub min_lower_margin: Option<f64>,
    pub argmin_lower: Option<f64>,
    pub min_upper_margin: Option<f64>,
    pub argmin_upper: Option<f64>,
    pub lower_asserted: bool,
    pub upper_asserted: bool,
    /// Bound-dominance margin for ZHU (against T5), CONJ and BW1 (`bw1_margin`).
    pub comparison_margin: Option<f64>,
    pub argmin_comparison: Option<f64>,
    pub sharpness_residual_0: Option<f64>,
    pub sharpness_residual_end: Option<f64>,
    pub sharpness: Option<SharpnessProbe>,
    pub passed: bool,
    pub status: ReportStatus,
    pub failure: Option<String>,
    /// CONJ only: the unproven side dipped below tolerance somewhere.
    pub anomaly: bool,
}

impl InequalityReport {
    /// A report for an instance that could not be evaluated.
    pub fn failed(theorem: TheoremId, nu: f64, r: Option<f64>, grid_points: usize, reason: String) -> Self {
        InequalityReport {
            theorem,
            nu,
            r,
            lower_exp: None,
            upper_exp: None,
            grid_points,
            min_lower_margin: None,
            argmin_lower: None,
            min_upper_margin: None,
            argmin_upper: None,
            lower_asserted: false,
            upper_asserted: false,
            comparison_margin: None,
            argmin_comparison: None,
            sharpness_residual_0: None,
            sharpness_residual_end: None,
            sharpness: None,
            passed: false,
            status: ReportStatus::Failed,
            failure: Some(reason),
            anomaly: false,
        }
    }
}

/// Running minimum with its abscissa; NaN poisons it.
#[derive(Clone, Copy)]
struct MinTracker {
    value: f64,
    at: f64,
}

impl MinTracker {
    fn new() -> Self {
        MinTracker {
            value: f64::INFINITY,
            at: f64::NAN,
        }
    }

    fn push(&mut self, v: f64, x: f64) {
        if !self.value.is_nan() && (v.is_nan() || v < self.value) {
            self.value = v;
            self.at = x;
        }
    }
}

struct GridMargins {
    lower: MinTracker,
    upper: MinTracker,
    comparison: Option<MinTracker>,
}

fn scan_margins(c: &SharpConstants, ctx: &OrderContext, interior_points: usize) -> Result<GridMargins> {
    let mut lower = MinTracker::new();
    let mut upper = MinTracker::new();
    let mut comparison = matches!(c.theorem, TheoremId::Zhu | TheoremId::Conj | TheoremId::Bw1)
        .then(MinTracker::new);
    let nu = ctx.nu();
    for x in abscissae(c.endpoint, interior_points) {
        if c.theorem == TheoremId::Chain {
            let chain = power_chain(nu, x, c.endpoint, CHAIN_K_MAX, ctx.log_jnorm(0, x)?);
            let gap = chain.log_gaps.iter().copied().fold(f64::INFINITY, f64::min);
            lower.push(gap, x);
            upper.push(chain.first_gap, x);
            continue;
        }
        let p = theorem_point(c, ctx, x)?;
        lower.push(p.log_middle - c.lower_exp * p.log_base, x);
        upper.push(c.upper_exp * p.log_base - p.log_middle, x);
        if let Some(cmp) = comparison.as_mut() {
            let m = match c.theorem {
                TheoremId::Zhu => {
                    let r = c.endpoint;
                    let t5_upper = -r * r / (4.0 * (nu + 1.0)) * log_shrink(x, r);
                    t5_upper - c.upper_exp * log_ratio_base(x, r)
                }
                _ => bw1_margin_at(nu, x, c.endpoint),
            };
            cmp.push(m, x);
        }
    }
    Ok(GridMargins {
        lower,
        upper,
        comparison,
    })
}

/// Checks one `(theorem, ν, r)` instance. Evaluation errors produce a failed
/// report carrying the reason.
pub fn evaluate_report(
    theorem: TheoremId,
    ctx: &OrderContext,
    r: Option<f64>,
    interior_points: usize,
    tol_margin: f64,
) -> InequalityReport {
    let nu = ctx.nu();
    let c = match sharp_constants(theorem, ctx.order(), r, Some(ctx.j1())) {
        Ok(c) => c,
        Err(e) => return InequalityReport::failed(theorem, nu, r, interior_points, e.to_string()),
    };
    let margins = match scan_margins(&c, ctx, interior_points) {
        Ok(m) => m,
        Err(e) => return InequalityReport::failed(theorem, nu, c.r, interior_points, e.to_string()),
    };
    let probe = match probe_with(&c, ctx) {
        Ok(p) => p,
        Err(e) => return InequalityReport::failed(theorem, nu, c.r, interior_points, e.to_string()),
    };

    let lower_asserted = match theorem {
        TheoremId::Conj => false,
        TheoremId::Bw1 => nu >= BW1_MIN_NU,
        _ => true,
    };
    let upper_asserted = theorem != TheoremId::Bw1;
    let ok = |v: f64| v >= -tol_margin;
    let mut reasons = Vec::new();
    if lower_asserted {
        let v = margins.lower.value;
        let holds = if theorem == TheoremId::Chain { v > 0.0 } else { ok(v) };
        if !holds {
            reasons.push(format!("lower margin {v:e} at x = {}", margins.lower.at));
        }
    }
    if upper_asserted && !ok(margins.upper.value) {
        reasons.push(format!("upper margin {:e} at x = {}", margins.upper.value, margins.upper.at));
    }
    if let Some(cmp) = margins.comparison {
        let holds = match theorem {
            TheoremId::Zhu => ok(cmp.value),
            _ => cmp.value > 0.0,
        };
        if !holds {
            reasons.push(format!("comparison margin {:e} at x = {}", cmp.value, cmp.at));
        }
    }
    if !probe.within_tolerance() {
        reasons.push(format!(
            "sharpness residuals {:?} / {:e} exceed tolerance",
            probe.residual_0, probe.residual_end
        ));
    }
    let passed = reasons.is_empty();
    let anomaly = theorem == TheoremId::Conj && !ok(margins.lower.value);
    let status = match (passed, theorem) {
        (false, _) => ReportStatus::Failed,
        (true, TheoremId::Conj) => ReportStatus::Exploratory,
        (true, _) => ReportStatus::Passed,
    };
    let finite = |t: MinTracker| t.value.is_finite().then_some(t.value);
    InequalityReport {
        theorem,
        nu,
        r: c.r,
        lower_exp: Some(c.lower_exp),
        upper_exp: Some(c.upper_exp),
        grid_points: interior_points,
        min_lower_margin: finite(margins.lower),
        argmin_lower: finite(margins.lower).map(|_| margins.lower.at),
        min_upper_margin: finite(margins.upper),
        argmin_upper: finite(margins.upper).map(|_| margins.upper.at),
        lower_asserted,
        upper_asserted,
        comparison_margin: margins.comparison.and_then(finite),
        argmin_comparison: margins.comparison.map(|t| t.at),
        sharpness_residual_0: probe.residual_0,
        sharpness_residual_end: Some(probe.residual_end),
        sharpness: Some(probe),
        passed,
        status,
        failure: (!passed).then(|| reasons.join("; ")),
        anomaly,
    }
}

/// The `(ν, r)` instances of a theorem under a grid spec, in report order.
pub fn theorem_jobs(theorem: TheoremId, spec: &GridSpec) -> Result<Vec<(Order, Option<f64>)>> {
    if theorem == TheoremId::Tan {
        return Ok(vec![(Order::new(-0.5)?, Some(FRAC_PI_2))]);
    }
    let orders = spec
        .nu_values
        .iter()
        .map(|&nu| Order::new(nu))
        .collect::<Result<Vec<_>>>()?;
    if !theorem.needs_radius() {
        return Ok(orders.into_iter().map(|o| (o, None)).collect());
    }
    let radii = spec
        .r_values
        .as_ref()
        .ok_or(Error::MissingParameter("r values for a modified-Bessel theorem"))?;
    Ok(orders
        .into_iter()
        .flat_map(|o| radii.iter().map(move |&r| (o, Some(r))))
        .collect())
}

/// One report per `(ν, r)`, in deterministic order.
pub fn check_inequality(
    theorem: TheoremId,
    spec: &GridSpec,
    cache: &ContextCache,
) -> Result<Vec<InequalityReport>> {
    Ok(theorem_jobs(theorem, spec)?
        .into_iter()
        .map(|(order, r)| match cache.get(order) {
            Ok(ctx) => evaluate_report(theorem, &ctx, r, spec.interior_points, spec.tol_margin),
            Err(e) => InequalityReport::failed(theorem, order.nu(), r, spec.interior_points, e.to_string()),
        })
        .collect())
}
