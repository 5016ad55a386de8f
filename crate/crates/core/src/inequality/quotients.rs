//! Log-quotients whose limits at the domain ends are the sharp exponents,
//! and their Bernoulli–l'Hospital (derivative-ratio) forms.

use serde::{Deserialize, Serialize};

use super::{abscissae, sharp_constants, OrderContext, SharpConstants, TheoremId, CHAIN_K_MAX};
use crate::error::{Error, Result};
use crate::series::one_minus_sq_ratio;

/// `log((R² − x²)/R²)`.
pub(crate) fn log_shrink(x: f64, radius: f64) -> f64 {
    let t = (x / radius).powi(2);
    if t < 0.5 {
        (-t).ln_1p()
    } else {
        one_minus_sq_ratio(x, radius).ln()
    }
}

/// `log((R² + x²)/(R² − x²))`.
pub(crate) fn log_ratio_base(x: f64, radius: f64) -> f64 {
    (x / radius).powi(2).ln_1p() - log_shrink(x, radius)
}

/// `1 − (x/R)^{2k}`, factored through `1 − (x/R)²` so it stays accurate
/// near `x = R`.
pub(crate) fn one_minus_power(x: f64, radius: f64, k: usize) -> f64 {
    let t = (x / radius).powi(2);
    let geometric: f64 = (0..k).map(|i| t.powi(i as i32)).sum();
    one_minus_sq_ratio(x, radius) * geometric
}

/// `log(1 − (x/R)^{2k})`, accurate for small x as well.
pub(crate) fn log_one_minus_power(x: f64, radius: f64, k: usize) -> f64 {
    let s = (x / radius).powi(2 * k as i32);
    if s < 0.5 {
        (-s).ln_1p()
    } else {
        one_minus_power(x, radius, k).ln()
    }
}

/// Log of the middle function and of the base at one abscissa.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PointEval {
    pub log_middle: f64,
    pub log_base: f64,
}

pub(crate) fn check_domain(c: &SharpConstants, ctx: &OrderContext, x: f64) -> Result<()> {
    let limit = match c.theorem {
        t if t.needs_radius() => c.endpoint,
        _ => ctx.j1().lo.min(c.endpoint),
    };
    if x > 0.0 && x < limit {
        Ok(())
    } else {
        Err(Error::OutOfDomain { x, limit })
    }
}

/// Evaluates the theorem's middle and base in log form.
pub(crate) fn theorem_point(c: &SharpConstants, ctx: &OrderContext, x: f64) -> Result<PointEval> {
    check_domain(c, ctx, x)?;
    let nu = ctx.nu();
    let u = c.endpoint;
    Ok(match c.theorem {
        TheoremId::T1 => PointEval {
            log_middle: ctx.log_jnorm(0, x)?,
            log_base: log_shrink(x, u),
        },
        TheoremId::T2 => PointEval {
            log_middle: ctx.log_jnorm(1, x)?,
            log_base: log_shrink(x, u),
        },
        TheoremId::T3 => PointEval {
            log_middle: (nu + 2.0) / (nu + 1.0) * ctx.log_jnorm(1, x)? - ctx.log_jnorm(0, x)?,
            log_base: -log_shrink(x, u),
        },
        TheoremId::T5 => PointEval {
            log_middle: ctx.log_inorm(0, x)?,
            log_base: log_shrink(x, u),
        },
        TheoremId::T6 => PointEval {
            log_middle: ctx.log_inorm(1, x)? - ctx.log_inorm(0, x)?,
            log_base: log_shrink(x, u),
        },
        TheoremId::Conj | TheoremId::Tan => PointEval {
            log_middle: ctx.log_jnorm(1, x)? - ctx.log_jnorm(0, x)?,
            log_base: -log_shrink(x, u),
        },
        TheoremId::Zhu => PointEval {
            log_middle: ctx.log_inorm(0, x)?,
            log_base: log_ratio_base(x, u),
        },
        TheoremId::Bw1 => PointEval {
            log_middle: ctx.log_jnorm(1, x)? - ctx.log_jnorm(0, x)?,
            log_base: log_ratio_base(x, u),
        },
        TheoremId::Chain => PointEval {
            log_middle: ctx.log_jnorm(0, x)?,
            log_base: log_one_minus_power(x, u, CHAIN_K_MAX),
        },
    })
}

/// The log-quotient whose limits are the sharp exponents. For T5 the sign is
/// flipped so the quotient is positive.
pub(crate) fn theorem_quotient(c: &SharpConstants, ctx: &OrderContext, x: f64) -> Result<f64> {
    let p = theorem_point(c, ctx, x)?;
    let q = p.log_middle / p.log_base;
    Ok(if c.theorem == TheoremId::T5 { -q } else { q })
}

/// The derivative ratio `f'/g'` of the quotient `f/g`; it has the same limits
/// at both ends and converges to them linearly rather than logarithmically.
pub(crate) fn theorem_limit_form(c: &SharpConstants, ctx: &OrderContext, x: f64) -> Result<f64> {
    check_domain(c, ctx, x)?;
    let nu = ctx.nu();
    let (a, b) = (nu + 1.0, nu + 2.0);
    let u = c.endpoint;
    let uu = u * u;
    // u² − x² without cancellation
    let gap = uu * one_minus_sq_ratio(x, u);
    Ok(match c.theorem {
        TheoremId::T1 => gap / (4.0 * a) * ctx.jnorm_ratio(0, x)?,
        TheoremId::T2 => gap / (4.0 * b) * ctx.jnorm_ratio(1, x)?,
        TheoremId::T3 => gap / (4.0 * a) * (ctx.jnorm_ratio(0, x)? - ctx.jnorm_ratio(1, x)?),
        TheoremId::T5 => gap / (4.0 * a) * ctx.inorm_ratio(0, x)?,
        TheoremId::T6 => gap / 4.0 * (ctx.inorm_ratio(0, x)? / a - ctx.inorm_ratio(1, x)? / b),
        TheoremId::Conj | TheoremId::Tan => {
            gap / 4.0 * (ctx.jnorm_ratio(0, x)? / a - ctx.jnorm_ratio(1, x)? / b)
        }
        TheoremId::Zhu => gap * (uu + x * x) / (8.0 * uu * a) * ctx.inorm_ratio(0, x)?,
        TheoremId::Bw1 => {
            gap * (uu + x * x) / (8.0 * uu) * (ctx.jnorm_ratio(0, x)? / a - ctx.jnorm_ratio(1, x)? / b)
        }
        TheoremId::Chain => {
            let k = CHAIN_K_MAX;
            let t = (x / u).powi(2);
            let scaled = uu * one_minus_power(x, u, k) / t.powi(k as i32 - 1);
            scaled / (4.0 * k as f64 * a) * ctx.jnorm_ratio(0, x)?
        }
    })
}

/// The named quotient functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuotientKind {
    /// `log 𝒥_ν / log((j²−x²)/j²)`
    #[serde(rename = "phi")]
    JnormExponent,
    /// `log 𝒥_{ν+1} / log((j²−x²)/j²)`
    #[serde(rename = "Phi")]
    JnormNextExponent,
    /// `log(𝒥_{ν+1}^{(ν+2)/(ν+1)}/𝒥_ν) / log(j²/(j²−x²))`
    #[serde(rename = "Omega")]
    RatioPowerExponent,
    /// `log 𝓘_ν − (r²/(4(ν+1))) log(r²/(r²−x²))`, a difference, not a quotient
    #[serde(rename = "Psi")]
    InormDeficit,
    /// `log 𝓘_ν / log(r²/(r²−x²))`
    #[serde(rename = "Gamma")]
    InormExponent,
    /// `log(𝓘_{ν+1}/𝓘_ν) / log((r²−x²)/r²)`
    #[serde(rename = "Theta")]
    InormRatioExponent,
    /// `log(𝒥_{ν+1}/𝒥_ν) / log(j²/(j²−x²))`
    #[serde(rename = "psi")]
    JnormRatioExponent,
    /// Derivative ratio of the previous quotient:
    /// `(j²−x²)/4 · (𝒥_{ν+1}/((ν+1)𝒥_ν) − 𝒥_{ν+2}/((ν+2)𝒥_{ν+1}))`
    #[serde(rename = "omega_x")]
    JnormRatioDerivativeQuotient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl QuotientKind {
    pub const ALL: [QuotientKind; 8] = [
        QuotientKind::JnormExponent,
        QuotientKind::JnormNextExponent,
        QuotientKind::RatioPowerExponent,
        QuotientKind::InormDeficit,
        QuotientKind::InormExponent,
        QuotientKind::InormRatioExponent,
        QuotientKind::JnormRatioExponent,
        QuotientKind::JnormRatioDerivativeQuotient,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            QuotientKind::JnormExponent => "phi",
            QuotientKind::JnormNextExponent => "Phi",
            QuotientKind::RatioPowerExponent => "Omega",
            QuotientKind::InormDeficit => "Psi",
            QuotientKind::InormExponent => "Gamma",
            QuotientKind::InormRatioExponent => "Theta",
            QuotientKind::JnormRatioExponent => "psi",
            QuotientKind::JnormRatioDerivativeQuotient => "omega_x",
        }
    }

    pub fn from_tag(tag: &str) -> Option<QuotientKind> {
        QuotientKind::ALL.into_iter().find(|k| k.tag() == tag)
    }

    /// The theorem whose quotient this is.
    fn theorem(self) -> TheoremId {
        match self {
            QuotientKind::JnormExponent => TheoremId::T1,
            QuotientKind::JnormNextExponent => TheoremId::T2,
            QuotientKind::RatioPowerExponent => TheoremId::T3,
            QuotientKind::InormDeficit | QuotientKind::InormExponent => TheoremId::T5,
            QuotientKind::InormRatioExponent => TheoremId::T6,
            QuotientKind::JnormRatioExponent | QuotientKind::JnormRatioDerivativeQuotient => {
                TheoremId::Conj
            }
        }
    }

    pub fn needs_radius(self) -> bool {
        self.theorem().needs_radius()
    }

    /// Monotonicity established by proof; `None` where it is only observed.
    pub fn expected_direction(self) -> Option<Direction> {
        match self {
            QuotientKind::JnormExponent
            | QuotientKind::JnormNextExponent
            | QuotientKind::InormExponent
            | QuotientKind::InormRatioExponent
            | QuotientKind::InormDeficit => Some(Direction::Decreasing),
            _ => None,
        }
    }
}

/// Below `SMALL_X · U` the raw quotient is replaced by its derivative form,
/// which has the same limit and no 0/0.
const SMALL_X: f64 = 1e-6;

fn constants_for(kind: QuotientKind, ctx: &OrderContext, r: Option<f64>) -> Result<SharpConstants> {
    sharp_constants(kind.theorem(), ctx.order(), r, Some(ctx.j1()))
}

pub fn quotient_eval(kind: QuotientKind, ctx: &OrderContext, x: f64, r: Option<f64>) -> Result<f64> {
    let c = constants_for(kind, ctx, r)?;
    match kind {
        QuotientKind::InormDeficit => {
            let p = theorem_point(&c, ctx, x)?;
            Ok(p.log_middle - c.upper_exp * p.log_base)
        }
        QuotientKind::JnormRatioDerivativeQuotient => theorem_limit_form(&c, ctx, x),
        _ if x < SMALL_X * c.endpoint => theorem_limit_form(&c, ctx, x),
        _ => theorem_quotient(&c, ctx, x),
    }
}

/// Derivative-ratio form of a quotient (itself for `omega_x`).
pub fn quotient_limit_form(kind: QuotientKind, ctx: &OrderContext, x: f64, r: Option<f64>) -> Result<f64> {
    if kind == QuotientKind::InormDeficit {
        return Err(Error::MissingParameter("Psi is a difference and has no limit form"));
    }
    let c = constants_for(kind, ctx, r)?;
    theorem_limit_form(&c, ctx, x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityScan {
    pub kind: QuotientKind,
    pub nu: f64,
    pub r: Option<f64>,
    pub expected: Option<Direction>,
    /// Strict direction seen on the grid, if any.
    pub observed: Option<Direction>,
    /// Largest step against the expected (else observed, else decreasing)
    /// direction; negative when strictly monotone.
    pub worst_violation: f64,
    pub is_monotone: bool,
}

pub fn monotonicity_scan(
    kind: QuotientKind,
    ctx: &OrderContext,
    r: Option<f64>,
    interior_points: usize,
) -> Result<MonotonicityScan> {
    let c = constants_for(kind, ctx, r)?;
    let xs = abscissae(c.endpoint, interior_points);
    let values = xs
        .iter()
        .map(|&x| quotient_eval(kind, ctx, x, r))
        .collect::<Result<Vec<_>>>()?;
    let steps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let max_step = steps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_step = steps.iter().copied().fold(f64::INFINITY, f64::min);
    let observed = if max_step < 0.0 {
        Some(Direction::Decreasing)
    } else if min_step > 0.0 {
        Some(Direction::Increasing)
    } else {
        None
    };
    let reference = kind.expected_direction().or(observed).unwrap_or(Direction::Decreasing);
    let worst_violation = match reference {
        Direction::Decreasing => max_step,
        Direction::Increasing => -min_step,
    };
    let is_monotone = match kind.expected_direction() {
        Some(d) => observed == Some(d),
        None => observed.is_some(),
    };
    Ok(MonotonicityScan {
        kind,
        nu: ctx.nu(),
        r: c.r,
        expected: kind.expected_direction(),
        observed,
        worst_violation,
        is_monotone,
    })
}
