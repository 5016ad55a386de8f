//! The theorem catalogue: each [`TheoremId`] fixes a base, a middle function
//! and a pair of exponents, and the engine checks
//! `base^lower_exp <= middle <= base^upper_exp` in log form on interior grids.

mod checks;
mod context;
mod quotients;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Order;
use crate::zeros::CertifiedZero;

pub use checks::{
    bw1_margin, check_inequality, check_power_chain, evaluate_report, inequality_at,
    sharpness_probe, theorem_jobs, InequalityReport, PointBounds, PowerChain, ReportStatus,
    SharpnessProbe, PROBE_OFFSET,
};
pub use context::{ContextCache, OrderContext};
pub use quotients::{
    monotonicity_scan, quotient_eval, quotient_limit_form, Direction, MonotonicityScan,
    QuotientKind,
};

/// Orders swept by default.
pub const DEFAULT_NU_GRID: [f64; 10] = [-0.9, -0.75, -0.5, -0.25, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0];
/// Radii for the modified-Bessel theorems.
pub const DEFAULT_R_VALUES: [f64; 5] = [0.5, 1.0, FRAC_PI_2, PI, 10.0];
/// Orders for the comparison with the earlier `(j²+x²)/(j²−x²)` bound.
pub const BW1_NU_GRID: [f64; 5] = [-0.875, -0.5, 0.0, 1.0, 5.0];
/// Lowest order for which the `(j²+x²)/(j²−x²)` lower bound is claimed.
pub const BW1_MIN_NU: f64 = -0.875;
pub const DEFAULT_GRID_POINTS: usize = 99;
pub const DEFAULT_TOL_MARGIN: f64 = 1e-12;
pub const CHAIN_K_MAX: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    T1,
    T2,
    T3,
    T5,
    T6,
    #[serde(rename = "CONJ")]
    Conj,
    #[serde(rename = "TAN")]
    Tan,
    #[serde(rename = "CHAIN")]
    Chain,
    #[serde(rename = "ZHU")]
    Zhu,
    #[serde(rename = "BW1")]
    Bw1,
}

impl TheoremId {
    pub const ALL: [TheoremId; 10] = [
        TheoremId::T1,
        TheoremId::T2,
        TheoremId::T3,
        TheoremId::T5,
        TheoremId::T6,
        TheoremId::Conj,
        TheoremId::Tan,
        TheoremId::Chain,
        TheoremId::Zhu,
        TheoremId::Bw1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T1 => "T1",
            TheoremId::T2 => "T2",
            TheoremId::T3 => "T3",
            TheoremId::T5 => "T5",
            TheoremId::T6 => "T6",
            TheoremId::Conj => "CONJ",
            TheoremId::Tan => "TAN",
            TheoremId::Chain => "CHAIN",
            TheoremId::Zhu => "ZHU",
            TheoremId::Bw1 => "BW1",
        }
    }

    /// Theorems on `|x| < j_{ν,1}`.
    pub fn needs_zero(self) -> bool {
        matches!(
            self,
            TheoremId::T1
                | TheoremId::T2
                | TheoremId::T3
                | TheoremId::Conj
                | TheoremId::Chain
                | TheoremId::Bw1
        )
    }

    /// Theorems on `|x| < r` for the modified functions.
    pub fn needs_radius(self) -> bool {
        matches!(self, TheoremId::T5 | TheoremId::T6 | TheoremId::Zhu)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown theorem '{s}'"))
    }
}

/// Exponents of one inequality instance, plus the right end of its domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpConstants {
    pub theorem: TheoremId,
    pub nu: f64,
    pub r: Option<f64>,
    pub lower_exp: f64,
    pub upper_exp: f64,
    /// `j_{ν,1}` or `r`.
    pub endpoint: f64,
}

impl SharpConstants {
    /// Limit of the theorem's quotient as `x → 0⁺`, when finite.
    pub fn limit_at_zero(&self) -> Option<f64> {
        match self.theorem {
            TheoremId::T1 | TheoremId::T2 | TheoremId::T6 | TheoremId::Conj | TheoremId::Tan | TheoremId::Bw1 => {
                Some(self.lower_exp)
            }
            TheoremId::T3 => Some(0.0),
            TheoremId::T5 => Some(-self.upper_exp),
            TheoremId::Zhu => Some(self.upper_exp),
            TheoremId::Chain => None,
        }
    }

    /// Limit of the theorem's quotient at the right endpoint.
    pub fn limit_at_end(&self) -> f64 {
        match self.theorem {
            TheoremId::T1 | TheoremId::T3 | TheoremId::Conj | TheoremId::Tan | TheoremId::Bw1 | TheoremId::Chain => 1.0,
            TheoremId::T2 | TheoremId::T5 | TheoremId::T6 | TheoremId::Zhu => 0.0,
        }
    }
}

fn valid_radius(r: Option<f64>) -> Result<f64> {
    match r {
        Some(r) if r > 0.0 && r.is_finite() => Ok(r),
        _ => Err(Error::MissingParameter("positive radius r")),
    }
}

pub fn sharp_constants(
    theorem: TheoremId,
    order: Order,
    r: Option<f64>,
    j1: Option<&CertifiedZero>,
) -> Result<SharpConstants> {
    let nu = order.nu();
    let a = nu + 1.0;
    let b = nu + 2.0;
    let make = |lower_exp, upper_exp, endpoint, r| SharpConstants {
        theorem,
        nu,
        r,
        lower_exp,
        upper_exp,
        endpoint,
    };
    if theorem == TheoremId::Tan {
        if nu != -0.5 {
            return Err(Error::OrderMismatch {
                expected: -0.5,
                found: nu,
            });
        }
        return Ok(make(PI * PI / 12.0, 1.0, FRAC_PI_2, Some(FRAC_PI_2)));
    }
    if theorem.needs_radius() {
        let r = valid_radius(r)?;
        let r2 = r * r;
        return Ok(match theorem {
            TheoremId::T5 => make(0.0, -r2 / (4.0 * a), r, Some(r)),
            TheoremId::T6 => make(r2 / (4.0 * a * b), 0.0, r, Some(r)),
            _ => make(0.0, r2 / (8.0 * a), r, Some(r)),
        });
    }
    let j = j1.ok_or(Error::MissingParameter("first zero j1"))?.mid;
    let jj = j * j;
    Ok(match theorem {
        TheoremId::T1 => make(jj / (4.0 * a), 1.0, j, None),
        TheoremId::T2 => make(jj / (4.0 * b), 0.0, j, None),
        TheoremId::T3 => make(0.0, 1.0, j, None),
        TheoremId::Conj => make(jj / (4.0 * a * b), 1.0, j, None),
        TheoremId::Bw1 => make(jj / (8.0 * a * b), 1.0, j, None),
        _ => make(1.0, 1.0, j, None),
    })
}

/// Orders, interior resolution and radii of a verification sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nu_values: Vec<f64>,
    pub interior_points: usize,
    pub r_values: Option<Vec<f64>>,
    pub tol_margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            nu_values: DEFAULT_NU_GRID.to_vec(),
            interior_points: DEFAULT_GRID_POINTS,
            r_values: Some(DEFAULT_R_VALUES.to_vec()),
            tol_margin: DEFAULT_TOL_MARGIN,
        }
    }
}

/// `x_i = U·i/(G+1)`, i = 1..=G.
pub fn abscissae(endpoint: f64, interior_points: usize) -> Vec<f64> {
    let d = (interior_points + 1) as f64;
    (1..=interior_points).map(|i| endpoint * i as f64 / d).collect()
}
