//! Rayleigh sums `σ_ν^(2m) = Σ_n j_{ν,n}^{−2m}`, computed by the convolution
//! recurrence of the Kishore expansion and, independently, by summing the
//! certified zeros. Also the scaled sequences `α_m`, `β_m`, `ω_m` and the
//! ratio of differences that bounds `j_{ν,1}²` from below.

mod hurwitz;

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::eft::{CompensatedSum, Dd, U, U_DD};
use crate::error::{Error, Result};
use crate::series::{Method, Order, SeriesValue};
use crate::zeros::{CertifiedZero, ZeroTable};

/// `σ^(2m)` for m = 1..=m_max in double-double.
///
/// `σ^(2) = 1/(4(ν+1))`, `σ^(2m) = (1/(ν+m)) Σ_{k=1}^{m−1} σ^(2k) σ^(2m−2k)`.
pub(crate) fn sigma_recurrence_dd(nu: f64, m_max: usize) -> Vec<Dd> {
    let mut s: Vec<Dd> = Vec::with_capacity(m_max);
    s.push(Dd::ONE / Dd::sum(nu, 1.0).mul_f64(4.0));
    for m in 2..=m_max {
        let mut acc = Dd::ZERO;
        for k in 1..=(m - 1) / 2 {
            acc = acc + s[k - 1] * s[m - k - 1];
        }
        acc = acc.mul_f64(2.0);
        if m % 2 == 0 {
            let h = s[m / 2 - 1];
            acc = acc + h * h;
        }
        s.push(acc / Dd::sum(nu, m as f64));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayleighTable {
    order: Order,
    sigma: Vec<f64>,
    rel_error: Vec<f64>,
    #[serde(skip)]
    dd: Vec<Dd>,
}

impl RayleighTable {
    pub fn order(&self) -> Order {
        self.order
    }

    pub fn m_max(&self) -> usize {
        self.sigma.len()
    }

    /// `σ^(2m)`, 1-based.
    pub fn sigma(&self, m: usize) -> f64 {
        self.sigma[m - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.sigma
    }

    /// Relative error bound of `sigma(m)`.
    pub fn rel_error(&self, m: usize) -> f64 {
        self.rel_error[m - 1]
    }

    pub(crate) fn sigma_dd(&self, m: usize) -> Dd {
        self.dd[m - 1]
    }

    fn require(&self, m: usize) -> Result<()> {
        if m >= 1 && m <= self.m_max() {
            Ok(())
        } else {
            Err(Error::CacheTooSmall {
                requested: m,
                available: self.m_max(),
            })
        }
    }
}

pub fn sigma_table_recurrence(order: Order, m_max: usize) -> Result<RayleighTable> {
    if m_max == 0 {
        return Err(Error::MissingParameter("m_max must be positive"));
    }
    let dd = sigma_recurrence_dd(order.nu(), m_max);
    let sigma = dd.iter().map(|d| d.to_f64()).collect();
    // Every term of the recurrence is positive, so relative errors add:
    // rel_m <= max_k (rel_k + rel_{m−k}) + a few operations.
    let mut rel_dd = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let carried = (1..m)
            .map(|k| rel_dd[k - 1] + rel_dd[m - k - 1])
            .fold(0.0, f64::max);
        rel_dd.push(carried + (m as f64 + 4.0) * U_DD);
    }
    let rel_error = rel_dd.into_iter().map(|r| r + U).collect();
    Ok(RayleighTable {
        order,
        sigma,
        rel_error,
        dd,
    })
}

/// The same recurrence in exact rationals for a rational order `ν > −1`.
pub fn sigma_table_exact(nu: &BigRational, m_max: usize) -> Result<Vec<BigRational>> {
    if *nu <= -BigRational::one() {
        return Err(Error::InvalidOrder {
            nu: crate::number_theory::ratio_to_f64(nu),
        });
    }
    if m_max == 0 {
        return Err(Error::MissingParameter("m_max must be positive"));
    }
    let four = BigRational::from_integer(4.into());
    let mut s: Vec<BigRational> = Vec::with_capacity(m_max);
    s.push(BigRational::one() / (four * (nu + BigRational::one())));
    for m in 2..=m_max {
        let mut acc = BigRational::zero();
        for k in 1..m {
            acc += &s[k - 1] * &s[m - k - 1];
        }
        let denom = nu + BigRational::from_integer((m as i64).into());
        s.push(acc / denom);
    }
    Ok(s)
}

/// Bounds on `Σ_{n>N} j_n^{−2m}` for a table of `N >= 2` zeros.
///
/// Consecutive zero spacings are monotone in `n` and tend to `π`, so every
/// untabulated zero satisfies `lo_N + k·s_min <= j_{N+k} <= hi_N + k·s_max`
/// with `s_min, s_max` the last tabulated spacing and `π`. The two resulting
/// Hurwitz zeta values enclose the tail.
fn tail_enclosure(zeros: &ZeroTable, m: usize) -> (f64, f64) {
    let n = zeros.len();
    let last = zeros.zeros()[n - 1];
    let before = zeros.zeros()[n - 2];
    let s_min = PI.min(last.lo - before.hi);
    let s_max = PI.max(last.hi - before.lo);
    let s = 2 * m as u32;
    let (z_up, e_up) = hurwitz::hurwitz_zeta(s, last.lo / s_min + 1.0);
    let (z_dn, e_dn) = hurwitz::hurwitz_zeta(s, last.hi / s_max + 1.0);
    let upper = s_min.powi(-(s as i32)) * (z_up + e_up);
    let lower = s_max.powi(-(s as i32)) * (z_dn - e_dn).max(0.0);
    (lower, upper)
}

/// `σ_ν^(2m)` as the sum over the table plus a certified tail.
pub fn sigma_by_zero_sum(order: Order, m: usize, zeros: &ZeroTable) -> Result<SeriesValue> {
    if m == 0 {
        return Err(Error::MissingParameter("m must be positive"));
    }
    if zeros.order().nu() != order.nu() {
        return Err(Error::OrderMismatch {
            expected: order.nu(),
            found: zeros.order().nu(),
        });
    }
    let n = zeros.len();
    if n < 2 || (m == 1 && n < 50) {
        return Err(Error::TailBoundFailure {
            bound: f64::INFINITY,
            zeros: n,
        });
    }
    let mi = m as i32;
    let mut partial = CompensatedSum::new();
    let mut err = 0.0;
    for z in zeros.zeros() {
        let t = (1.0 / (z.mid * z.mid)).powi(mi);
        partial.add(t);
        err += (m as f64 + 3.0) * U * t + 2.0 * m as f64 * z.half_width() / z.lo.powi(2 * mi + 1);
    }
    let (lower, upper) = tail_enclosure(zeros, m);
    let tail = 0.5 * (upper + lower);
    partial.add(tail);
    let value = partial.value();
    let abs_error = err + 0.5 * (upper - lower) + 4.0 * U * upper + 2.0 * U * value;
    Ok(SeriesValue {
        value,
        abs_error,
        terms_used: n,
        method: Method::ZeroSum,
    })
}

/// Outcome of checking a strict inequality at every index of a sequence with
/// floating-point error bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckStatus {
    /// Every comparison resolved in the expected direction.
    Certified,
    /// No violation, but comparisons from index `from_m` on were within the
    /// error bounds.
    Unresolved { from_m: usize },
    /// Resolved in the wrong direction at `at_m`.
    Violated { at_m: usize },
}

impl CheckStatus {
    /// Folds `(m, margin, margin_error)` triples, expecting `margin > 0`.
    pub fn from_margins(margins: impl IntoIterator<Item = (usize, f64, f64)>) -> CheckStatus {
        let mut unresolved = None;
        for (m, margin, err) in margins {
            if margin < -err {
                return CheckStatus::Violated { at_m: m };
            }
            if margin <= err && unresolved.is_none() {
                unresolved = Some(m);
            }
        }
        match unresolved {
            Some(from_m) => CheckStatus::Unresolved { from_m },
            None => CheckStatus::Certified,
        }
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, CheckStatus::Violated { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceTable {
    pub order: Order,
    pub m_max: usize,
    pub j1: f64,
    /// `α_m = j_{ν,1}^{2m} σ_ν^(2m)`, index m − 1.
    pub alpha: Vec<f64>,
    /// `β_m = j_{ν,1}^{2m} σ_{ν+1}^(2m)`.
    pub beta: Vec<f64>,
    /// `ω_m = α_m − β_m`.
    pub omega: Vec<f64>,
    pub alpha_above_one: CheckStatus,
    pub alpha_decreasing: CheckStatus,
    pub beta_decreasing: CheckStatus,
    pub omega_increasing: CheckStatus,
    /// `|α_{m_max} − 1|`, which tends to zero.
    pub alpha_convergence: f64,
}

impl SequenceTable {
    pub fn alpha(&self, m: usize) -> f64 {
        self.alpha[m - 1]
    }
    pub fn beta(&self, m: usize) -> f64 {
        self.beta[m - 1]
    }
    pub fn omega(&self, m: usize) -> f64 {
        self.omega[m - 1]
    }
}

/// Relative error of `j^{2k}` for a zero enclosure, k >= 1.
fn jpow_rel_error(j1: &CertifiedZero, k: usize) -> f64 {
    2.0 * k as f64 * j1.half_width() / j1.lo + 2.0 * k as f64 * U_DD + U_DD
}

pub fn scaled_sequences(order: Order, m_max: usize, j1: &CertifiedZero) -> Result<SequenceTable> {
    if m_max < 2 {
        return Err(Error::MissingParameter("m_max must be at least 2"));
    }
    let s_nu = sigma_recurrence_dd(order.nu(), m_max + 1);
    let s_next = sigma_recurrence_dd(order.nu() + 1.0, m_max + 1);
    let jj = Dd::square(j1.mid);
    let mut alpha = Vec::with_capacity(m_max);
    let mut beta = Vec::with_capacity(m_max);
    let mut pow = Dd::ONE;
    for m in 0..m_max {
        pow = pow * jj;
        alpha.push((pow * s_nu[m]).to_f64());
        beta.push((pow * s_next[m]).to_f64());
    }
    let omega: Vec<f64> = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();

    // α_m > 1
    let alpha_above_one = CheckStatus::from_margins(
        (1..=m_max).map(|m| (m, alpha[m - 1] - 1.0, alpha[m - 1] * (jpow_rel_error(j1, m) + 2.0 * U))),
    );
    // α_{m+1} < α_m  ⇔  j² < σ_m / σ_{m+1}, the ratio computed in double-double
    let ratio_margin = |s: &[Dd], m: usize| {
        let r = (s[m - 1] / s[m] - jj).to_f64();
        let err = 2.0 * j1.mid * j1.half_width() + 64.0 * m as f64 * U_DD * jj.hi + U * r.abs();
        (m, r, err)
    };
    let alpha_decreasing = CheckStatus::from_margins((1..m_max).map(|m| ratio_margin(&s_nu, m)));
    let beta_decreasing = CheckStatus::from_margins((1..m_max).map(|m| ratio_margin(&s_next, m)));
    // ω_{m+1} > ω_m  ⇔  j² > d_m / d_{m+1}
    let omega_increasing = CheckStatus::from_margins((1..m_max).map(|m| {
        let d_m = s_nu[m - 1] - s_next[m - 1];
        let d_n = s_nu[m] - s_next[m];
        let r = (jj - d_m / d_n).to_f64();
        let err = 2.0 * j1.mid * j1.half_width() + 64.0 * m as f64 * U_DD * jj.hi + U * r.abs();
        (m, r, err)
    }));
    let alpha_convergence = (alpha[m_max - 1] - 1.0).abs();
    Ok(SequenceTable {
        order,
        m_max,
        j1: j1.mid,
        alpha,
        beta,
        omega,
        alpha_above_one,
        alpha_decreasing,
        beta_decreasing,
        omega_increasing,
        alpha_convergence,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureStatus {
    Ok,
    Inconclusive,
}

impl ConjectureStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ConjectureStatus::Ok => "ok",
            ConjectureStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginMethod {
    /// `j² − ratio` from the recurrence sums.
    Recurrence,
    /// The deflated zero sum of [`conjecture_margin_by_zeros`].
    ZeroSum,
}

/// One `(ν, m)` evaluation of `j² − (σ_ν^(2m) − σ_{ν+1}^(2m)) / (σ_ν^(2m+2) − σ_{ν+1}^(2m+2))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureRecord {
    pub nu: f64,
    pub m: usize,
    pub ratio: f64,
    pub jsq: f64,
    pub margin: f64,
    /// Bound on the error of `margin`.
    pub margin_error: f64,
    pub margin_method: MarginMethod,
    pub status: ConjectureStatus,
}

impl ConjectureRecord {
    /// Placeholder for a pair whose differences fell below working precision.
    pub fn inconclusive(nu: f64, m: usize, jsq: f64) -> Self {
        ConjectureRecord {
            nu,
            m,
            ratio: f64::NAN,
            jsq,
            margin: f64::NAN,
            margin_error: f64::NAN,
            margin_method: MarginMethod::Recurrence,
            status: ConjectureStatus::Inconclusive,
        }
    }
}

pub fn conjecture_ratio(
    order: Order,
    m: usize,
    sig_nu: &RayleighTable,
    sig_nu1: &RayleighTable,
    j1: &CertifiedZero,
) -> Result<ConjectureRecord> {
    if m == 0 {
        return Err(Error::MissingParameter("m must be positive"));
    }
    if sig_nu.order().nu() != order.nu() {
        return Err(Error::OrderMismatch {
            expected: order.nu(),
            found: sig_nu.order().nu(),
        });
    }
    let expected = order.nu() + 1.0;
    if (sig_nu1.order().nu() - expected).abs() > 1e-12 {
        return Err(Error::OrderMismatch {
            expected,
            found: sig_nu1.order().nu(),
        });
    }
    sig_nu.require(m + 1)?;
    sig_nu1.require(m + 1)?;
    let diff = |k: usize| -> Result<Dd> {
        let a = sig_nu.sigma_dd(k);
        let b = sig_nu1.sigma_dd(k);
        let d = a - b;
        if d.hi.abs() < 1e3 * f64::EPSILON * a.hi.abs().max(b.hi.abs()) {
            Err(Error::DegenerateDifference { m: k })
        } else {
            Ok(d)
        }
    };
    let ratio = (diff(m)? / diff(m + 1)?).to_f64();
    let jsq = Dd::square(j1.mid);
    let margin = (jsq - Dd::new(ratio)).to_f64();
    let uncertainty = 2.0 * j1.mid * j1.half_width() + 4.0 * U * jsq.hi;
    Ok(ConjectureRecord {
        nu: order.nu(),
        m,
        ratio,
        jsq: jsq.to_f64(),
        margin,
        margin_error: uncertainty,
        margin_method: MarginMethod::Recurrence,
        status: if margin.abs() > uncertainty {
            ConjectureStatus::Ok
        } else {
            ConjectureStatus::Inconclusive
        },
    })
}

/// `Σ_n f(z_n) z_n^{−2m}(z_n² − j²)/z_n²` over a table with its error bound,
/// skipping the first `skip` zeros. The tail beyond the table lies in
/// `[0, Σ_{n>N} z_n^{−2m}]` and is folded into the bound.
fn deflated_sum(zeros: &ZeroTable, m: usize, j: f64, skip: usize) -> (f64, f64, f64) {
    let mi = m as i32;
    let mut sum = CompensatedSum::new();
    let mut err = 0.0;
    // Σ z^{−2m−2}, for the sensitivity to j
    let mut weight = 0.0;
    for z in &zeros.zeros()[skip..] {
        let inv = 1.0 / (z.mid * z.mid);
        let p = inv.powi(mi);
        let t = p * (z.mid - j) * (z.mid + j) * inv;
        sum.add(t);
        weight += p * inv;
        err += (m as f64 + 6.0) * U * t.abs()
            + z.half_width() * (2.0 * m as f64 + 2.0) / z.lo.powi(2 * mi + 1);
    }
    let (_, tail) = tail_enclosure(zeros, m);
    (sum.value() + 0.5 * tail, err + 0.5 * tail, weight + tail)
}

/// The conjecture margin `j² − d_m/d_{m+1}`, `d_m = σ_ν^(2m) − σ_{ν+1}^(2m)`,
/// from the zeros. Writing the numerator `j² d_{m+1} − d_m` as a sum over
/// zeros, the `j_{ν,1}` term vanishes identically and what remains is
/// `Σ_n k_n^{−2m}(1 − j²/k_n²) − Σ_{n≥2} j_n^{−2m}(1 − j²/j_n²)` with
/// `k_n = j_{ν+1,n}`. Both sums are positive, so the margin keeps its
/// relative accuracy when it is far below `ulp(j²)`, where the ratio form
/// cannot resolve it.
pub fn conjecture_margin_by_zeros(
    order: Order,
    m: usize,
    sig_nu: &RayleighTable,
    sig_nu1: &RayleighTable,
    zeros: &ZeroTable,
    zeros_next: &ZeroTable,
) -> Result<SeriesValue> {
    if m == 0 {
        return Err(Error::MissingParameter("m must be positive"));
    }
    for (t, nu) in [(zeros, order.nu()), (zeros_next, order.nu() + 1.0)] {
        if t.order().nu() != nu {
            return Err(Error::OrderMismatch {
                expected: nu,
                found: t.order().nu(),
            });
        }
        if t.len() < 50 {
            return Err(Error::TailBoundFailure {
                bound: f64::INFINITY,
                zeros: t.len(),
            });
        }
    }
    sig_nu.require(m + 1)?;
    sig_nu1.require(m + 1)?;
    let j1 = zeros.first();
    let j = j1.mid;
    let (a, a_err, a_weight) = deflated_sum(zeros_next, m, j, 0);
    let (b, b_err, b_weight) = deflated_sum(zeros, m, j, 1);
    let num = a - b;
    let num_err = a_err + b_err + 2.0 * j * j1.half_width() * (a_weight + b_weight) + U * num.abs();
    let d = (sig_nu.sigma_dd(m + 1) - sig_nu1.sigma_dd(m + 1)).to_f64();
    if !(d > 0.0) {
        return Err(Error::DegenerateDifference { m: m + 1 });
    }
    let d_err = 64.0 * m as f64 * U_DD * sig_nu.sigma(m + 1) + U * d;
    let value = num / d;
    Ok(SeriesValue {
        value,
        abs_error: num_err / d + value.abs() * (d_err / d + 2.0 * U),
        terms_used: zeros.len() + zeros_next.len() - 1,
        method: Method::ZeroSum,
    })
}

/// [`conjecture_ratio`], falling back to [`conjecture_margin_by_zeros`] when
/// the ratio form cannot decide the sign of the margin.
pub fn conjecture_record(
    order: Order,
    m: usize,
    sig_nu: &RayleighTable,
    sig_nu1: &RayleighTable,
    zeros: &ZeroTable,
    zeros_next: &ZeroTable,
) -> Result<ConjectureRecord> {
    let j1 = zeros.first();
    let base = match conjecture_ratio(order, m, sig_nu, sig_nu1, j1) {
        Ok(r) if r.status == ConjectureStatus::Ok => return Ok(r),
        Ok(r) => r,
        Err(Error::DegenerateDifference { .. }) => {
            ConjectureRecord::inconclusive(order.nu(), m, Dd::square(j1.mid).to_f64())
        }
        Err(e) => return Err(e),
    };
    let z = conjecture_margin_by_zeros(order, m, sig_nu, sig_nu1, zeros, zeros_next)?;
    Ok(ConjectureRecord {
        margin: z.value,
        margin_error: z.abs_error,
        margin_method: MarginMethod::ZeroSum,
        status: if z.value.abs() > z.abs_error {
            ConjectureStatus::Ok
        } else {
            ConjectureStatus::Inconclusive
        },
        ..base
    })
}
