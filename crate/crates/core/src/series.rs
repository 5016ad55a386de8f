//! Normalized Bessel and modified Bessel functions of the first kind.
//!
//! `𝒥_ν(x) = Σ (−1)^n Γ(ν+1) / (4^n n! Γ(ν+n+1)) x^{2n}` and its all-positive
//! counterpart `𝓘_ν`. Coefficients come from the multiplicative recurrence
//! `a_{n+1}/a_n = ∓x² / (4(n+1)(ν+n+1))`, accumulated in double-double, so no
//! gamma function is ever evaluated.

use serde::{Deserialize, Serialize};

use crate::eft::{CompensatedSum, Dd, U, U_DD};
use crate::error::{check_finite, check_tol, Error, Result};
use crate::rayleigh::sigma_recurrence_dd;
use crate::zeros::ZeroTable;

/// Default absolute tolerance for every evaluation.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Hard cap on power-series terms.
pub const TERM_CAP: usize = 500;

/// Ratio below which the positive series tail is bounded geometrically.
const RHO_GEO: f64 = 0.5;

/// Fraction of `j_{ν,1}` beyond which `𝒥_ν` is evaluated by product deflation.
pub const DEFLATION_THRESHOLD: f64 = 0.9;

/// Number of Rayleigh tail corrections used by the deflated product.
const DEFLATION_TAIL_TERMS: usize = 3;

/// Bessel order `ν > −1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu > -1.0 {
            Ok(Order(nu))
        } else {
            Err(Error::InvalidOrder { nu })
        }
    }

    #[inline]
    pub fn nu(self) -> f64 {
        self.0
    }

    /// `ν + k`; always valid for `k >= 0`.
    pub fn shifted(self, k: u32) -> Order {
        Order(self.0 + f64::from(k))
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let nu = f64::deserialize(d)?;
        Order::new(nu).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PowerSeries,
    MittagLeffler,
    ProductDeflation,
    ClosedForm,
    ZeroSum,
}

/// A value together with a bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub abs_error: f64,
    pub terms_used: usize,
    pub method: Method,
}

impl SeriesValue {
    pub(crate) fn exact(value: f64, method: Method) -> Self {
        SeriesValue {
            value,
            abs_error: 0.0,
            terms_used: 1,
            method,
        }
    }

    /// True when the enclosure `value ± abs_error` contains `target`.
    pub fn contains(&self, target: f64) -> bool {
        (self.value - target).abs() <= self.abs_error
    }

    fn within(self, tol: f64) -> Result<Self> {
        if self.abs_error <= tol {
            Ok(self)
        } else {
            Err(Error::ToleranceUnreachable {
                achieved: self.abs_error,
                requested: tol,
            })
        }
    }
}

/// Raw double-double series result.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RawSeries {
    /// Full sum including the leading 1.
    pub sum: Dd,
    /// Sum of the terms n >= 1, i.e. the value minus one.
    pub minus_one: Dd,
    /// Truncation plus accumulated rounding, absolute.
    pub error: f64,
    pub terms: usize,
}

impl RawSeries {
    pub fn value(&self) -> f64 {
        self.sum.to_f64()
    }

    /// Error bound of the binary64 value returned by [`RawSeries::value`].
    pub fn value_error(&self) -> f64 {
        if self.sum.lo == 0.0 {
            self.error
        } else {
            self.error + U * self.value().abs()
        }
    }
}

/// Normalized series in `x²`, alternating for `𝒥_ν`, positive for `𝓘_ν`.
pub(crate) fn normalized_series(nu: f64, x: f64, alternating: bool) -> Result<RawSeries> {
    let x2 = Dd::square(x);
    if x2.hi == 0.0 {
        return Ok(RawSeries {
            sum: Dd::ONE,
            minus_one: Dd::ZERO,
            error: 0.0,
            terms: 1,
        });
    }
    let mut term = Dd::ONE;
    let mut tail = Dd::ZERO;
    let mut abs_sum = 1.0;
    let mut weighted = 0.0;
    for n in 0..TERM_CAP {
        let k = (n + 1) as f64;
        let denom = Dd::sum(nu, k).mul_f64(4.0 * k);
        term = term * (x2 / denom);
        if alternating {
            term = -term;
        }
        tail = tail + term;
        let mag = term.hi.abs();
        abs_sum += mag;
        weighted += (k + 1.0) * mag;

        let q_next = x2.hi / (4.0 * (k + 1.0) * (nu + k + 1.0));
        let bound = if alternating {
            (q_next <= 1.0).then_some(mag * q_next)
        } else {
            (q_next < RHO_GEO).then(|| mag * q_next / (1.0 - q_next))
        };
        if let Some(trunc) = bound {
            if trunc <= U_DD * abs_sum {
                let rounding = U_DD * (4.0 * weighted + (n as f64 + 2.0) * abs_sum);
                return Ok(RawSeries {
                    sum: Dd::ONE + tail,
                    minus_one: tail,
                    error: trunc * (1.0 + 4.0 * U) + rounding,
                    terms: n + 2,
                });
            }
        }
    }
    Err(Error::NonConvergence { terms: TERM_CAP })
}

/// Power-series value of `𝒥_ν(x)` with certified absolute error.
pub fn eval_jnorm(order: Order, x: f64, tol: f64) -> Result<SeriesValue> {
    check_tol(tol)?;
    check_finite(x)?;
    let raw = normalized_series(order.nu(), x, true)?;
    SeriesValue {
        value: raw.value(),
        abs_error: raw.value_error(),
        terms_used: raw.terms,
        method: Method::PowerSeries,
    }
    .within(tol)
}

/// Power-series value of `𝓘_ν(x) >= 1`.
pub fn eval_inorm(order: Order, x: f64, tol: f64) -> Result<SeriesValue> {
    check_tol(tol)?;
    check_finite(x)?;
    let raw = normalized_series(order.nu(), x, false)?;
    SeriesValue {
        value: raw.value(),
        abs_error: raw.value_error(),
        terms_used: raw.terms,
        method: Method::PowerSeries,
    }
    .within(tol)
}

fn scaled(inner: SeriesValue, factor: f64) -> SeriesValue {
    let value = factor * inner.value;
    SeriesValue {
        value,
        abs_error: factor.abs() * inner.abs_error + U * value.abs(),
        terms_used: inner.terms_used,
        method: inner.method,
    }
}

/// `𝒥_ν'(x) = −x/(2(ν+1)) 𝒥_{ν+1}(x)`.
pub fn eval_jnorm_deriv(order: Order, x: f64, tol: f64) -> Result<SeriesValue> {
    check_tol(tol)?;
    check_finite(x)?;
    if x == 0.0 {
        return Ok(SeriesValue::exact(0.0, Method::PowerSeries));
    }
    let factor = -x / (2.0 * (order.nu() + 1.0));
    let inner = eval_jnorm(order.shifted(1), x, tol / factor.abs().max(1.0))?;
    scaled(inner, factor).within(tol)
}

/// `𝓘_ν'(x) = x/(2(ν+1)) 𝓘_{ν+1}(x)`.
pub fn eval_inorm_deriv(order: Order, x: f64, tol: f64) -> Result<SeriesValue> {
    check_tol(tol)?;
    check_finite(x)?;
    if x == 0.0 {
        return Ok(SeriesValue::exact(0.0, Method::PowerSeries));
    }
    let factor = x / (2.0 * (order.nu() + 1.0));
    let inner = eval_inorm(order.shifted(1), x, tol / factor.abs().max(1.0))?;
    scaled(inner, factor).within(tol)
}

/// Half-width of a zero enclosure around its midpoint.
fn half_width(lo: f64, mid: f64, hi: f64) -> f64 {
    (mid - lo).max(hi - mid)
}

/// `1 − x²/j²` without cancellation near `x = j`.
pub(crate) fn one_minus_sq_ratio(x: f64, j: f64) -> f64 {
    let ax = x.abs();
    ((j - ax) * (j + ax)) / (j * j)
}

fn ensure_same_order(expected: Order, table: &ZeroTable) -> Result<()> {
    if table.order().nu() == expected.nu() {
        Ok(())
    } else {
        Err(Error::OrderMismatch {
            expected: expected.nu(),
            found: table.order().nu(),
        })
    }
}

/// Shifted power sums of the tabulated zeros and the tail they leave behind.
struct RayleighTail {
    /// `S_k = σ^(2k) − Σ_{n≤N} j_n^{-2k}` for k = 1..=K.
    tail: Vec<f64>,
    /// Absolute error of each `S_k`.
    tail_err: Vec<f64>,
    /// Lower end of the last enclosure; every untabulated zero exceeds it.
    last_lo: f64,
}

fn rayleigh_tail(table: &ZeroTable, k_max: usize) -> RayleighTail {
    let nu = table.order().nu();
    let sigma = sigma_recurrence_dd(nu, k_max);
    let mut partial = vec![CompensatedSum::new(); k_max];
    let mut partial_err = vec![0.0; k_max];
    for z in table.zeros() {
        let inv2 = 1.0 / (z.mid * z.mid);
        let hw = half_width(z.lo, z.mid, z.hi);
        let mut p = 1.0;
        for k in 0..k_max {
            p *= inv2;
            partial[k].add(p);
            let kk = (k + 1) as f64;
            partial_err[k] += (kk + 2.0) * U * p + 2.0 * kk * hw / z.lo.powi(2 * k as i32 + 3);
        }
    }
    let mut tail = Vec::with_capacity(k_max);
    let mut tail_err = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let s = sigma[k].to_f64();
        let pk = partial[k].value();
        tail.push((s - pk).max(0.0));
        tail_err.push(partial_err[k] + 2.0 * U * s + (table.len() as f64) * U * U * s);
    }
    RayleighTail {
        tail,
        tail_err,
        last_lo: table.zeros().last().map(|z| z.lo).unwrap_or(f64::INFINITY),
    }
}

/// `𝒥_ν(x) = Π (1 − x²/j_n²)` over the table, times the Rayleigh tail factor
/// `exp(−Σ_k x^{2k} S_k / k)`.
pub fn eval_jnorm_deflated(zeros: &ZeroTable, x: f64, tol: f64) -> Result<SeriesValue> {
    check_tol(tol)?;
    check_finite(x)?;
    let first = zeros
        .zeros()
        .first()
        .ok_or(Error::InvalidTable("empty zero table".into()))?;
    let ax = x.abs();
    if ax >= first.lo {
        return Err(Error::OutOfDomain { x, limit: first.lo });
    }
    if ax == 0.0 {
        return Ok(SeriesValue::exact(1.0, Method::ProductDeflation));
    }
    let x2 = ax * ax;
    let mut log_sum = CompensatedSum::new();
    let mut err = 0.0;
    for (i, z) in zeros.zeros().iter().enumerate() {
        let j = z.mid;
        let l = if i == 0 {
            let f = one_minus_sq_ratio(ax, j);
            let l = f.ln();
            err += 4.0 * U + U * l.abs();
            l
        } else {
            let t = x2 / (j * j);
            let l = (-t).ln_1p();
            err += 4.0 * U * t / (1.0 - t) + U * l.abs();
            l
        };
        log_sum.add(l);
        let hw = half_width(z.lo, z.mid, z.hi);
        err += hw * 2.0 * x2 / (z.lo * (z.lo * z.lo - x2));
    }
    let tail = rayleigh_tail(zeros, DEFLATION_TAIL_TERMS);
    let mut xpow = 1.0;
    for k in 0..DEFLATION_TAIL_TERMS {
        xpow *= x2;
        let kk = (k + 1) as f64;
        log_sum.add(-xpow * tail.tail[k] / kk);
        err += xpow * tail.tail_err[k] / kk + U * xpow * tail.tail[k];
    }
    let t_max = x2 / (tail.last_lo * tail.last_lo);
    if t_max >= 1.0 {
        return Err(Error::TailBoundFailure {
            bound: f64::INFINITY,
            zeros: zeros.len(),
        });
    }
    let kk = DEFLATION_TAIL_TERMS as f64;
    let last = DEFLATION_TAIL_TERMS - 1;
    let next_sum = (tail.tail[last] + tail.tail_err[last]) / (tail.last_lo * tail.last_lo);
    let remainder = xpow * x2 * next_sum / ((kk + 1.0) * (1.0 - t_max));
    log_sum.add(-0.5 * remainder);
    err += 0.5 * remainder;

    let log_value = log_sum.value();
    let value = log_value.exp();
    let abs_error = value * err.exp_m1() + 2.0 * U * value * (1.0 + log_value.abs());
    Ok(SeriesValue {
        value,
        abs_error,
        terms_used: zeros.len(),
        method: Method::ProductDeflation,
    })
}

/// `𝒥_ν(x)` using the power series inside `0.9 j_{ν,1}` and product deflation
/// between there and the first zero; falls back to whichever route has the
/// smaller certified error.
pub fn eval_jnorm_with_zeros(zeros: &ZeroTable, x: f64, tol: f64) -> Result<SeriesValue> {
    check_tol(tol)?;
    check_finite(x)?;
    let order = zeros.order();
    let j1 = zeros
        .zeros()
        .first()
        .ok_or(Error::InvalidTable("empty zero table".into()))?;
    if x.abs() <= DEFLATION_THRESHOLD * j1.mid || x.abs() >= j1.lo {
        return eval_jnorm(order, x, tol);
    }
    let deflated = eval_jnorm_deflated(zeros, x, tol);
    match deflated {
        Ok(v) if v.abs_error <= tol => Ok(v),
        other => {
            let series = eval_jnorm(order, x, tol);
            match (other, series) {
                (_, Ok(s)) => Ok(s),
                (Ok(d), Err(_)) => SeriesValue::within(d, tol),
                (Err(e), Err(_)) => Err(e),
            }
        }
    }
}

/// `J_{ν+1}(x)/J_ν(x) = Σ_n 2x/(j_{ν,n}² − x²)`, truncated at the table and
/// completed with Rayleigh tail sums.
pub fn ratio_j(order: Order, x: f64, zeros: &ZeroTable, tol: f64) -> Result<SeriesValue> {
    mittag_leffler(order, x, zeros, tol, true)
}

/// `I_{ν+1}(x)/I_ν(x) = Σ_n 2x/(j_{ν,n}² + x²)`.
pub fn ratio_i(order: Order, x: f64, zeros: &ZeroTable, tol: f64) -> Result<SeriesValue> {
    mittag_leffler(order, x, zeros, tol, false)
}

fn mittag_leffler(
    order: Order,
    x: f64,
    zeros: &ZeroTable,
    tol: f64,
    bessel_j: bool,
) -> Result<SeriesValue> {
    check_tol(tol)?;
    check_finite(x)?;
    ensure_same_order(order, zeros)?;
    let first = zeros
        .zeros()
        .first()
        .ok_or(Error::InvalidTable("empty zero table".into()))?;
    if x == 0.0 {
        return Ok(SeriesValue::exact(0.0, Method::MittagLeffler));
    }
    let ax = x.abs();
    if bessel_j && ax >= first.lo {
        return Err(Error::OutOfDomain { x, limit: first.lo });
    }
    let x2 = ax * ax;
    let mut sum = CompensatedSum::new();
    let mut err = 0.0;
    for z in zeros.zeros() {
        let j = z.mid;
        let hw = half_width(z.lo, z.mid, z.hi);
        let (den, den_lo) = if bessel_j {
            ((j - ax) * (j + ax), (z.lo - ax) * (z.lo + ax))
        } else {
            (j * j + x2, z.lo * z.lo + x2)
        };
        let term = 2.0 * ax / den;
        sum.add(term);
        err += 4.0 * U * term + 4.0 * ax * z.hi * hw / (den_lo * den_lo);
    }
    let tail = rayleigh_tail(zeros, 2);
    let (s2, s4) = (tail.tail[0], tail.tail[1]);
    let t_max = x2 / (tail.last_lo * tail.last_lo);
    let s6 = (s4 + tail.tail_err[1]) / (tail.last_lo * tail.last_lo);
    let (estimate, remainder) = if bessel_j {
        if t_max >= 1.0 {
            return Err(Error::TailBoundFailure {
                bound: f64::INFINITY,
                zeros: zeros.len(),
            });
        }
        let r = x2 * x2 * s6 / (1.0 - t_max);
        (s2 + x2 * s4 + 0.5 * r, r)
    } else {
        let r = x2 * x2 * s6;
        (s2 - x2 * s4 + 0.5 * r, r)
    };
    let tail_value = 2.0 * ax * estimate;
    let tail_err = 2.0 * ax * (0.5 * remainder + tail.tail_err[0] + x2 * tail.tail_err[1]);
    sum.add(tail_value);
    let value = sum.value().copysign(x);
    let abs_error = err + tail_err + 2.0 * U * value.abs();
    if tail_err > tol {
        return Err(Error::TailBoundFailure {
            bound: tail_err,
            zeros: zeros.len(),
        });
    }
    SeriesValue {
        value,
        abs_error,
        terms_used: zeros.len(),
        method: Method::MittagLeffler,
    }
    .within(tol)
}

/// Both sides of the Turánian identity
/// `1 − J_ν J_{ν+2} / J_{ν+1}² = Σ 4 j_{ν+1,n}² / (x² − j_{ν+1,n}²)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuranianResidual {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs|`.
    pub residual: f64,
    /// Combined error bound of both evaluations (tail included).
    pub bound: f64,
}

impl TuranianResidual {
    pub fn within(&self, tol: f64) -> bool {
        self.residual <= tol + self.bound
    }
}

/// Evaluates the Turánian from the power series at orders ν, ν+1, ν+2 and
/// compares with the zero sum over `zeros_next` (the table of order ν+1).
pub fn turanian_residual(
    order: Order,
    x: f64,
    zeros_next: &ZeroTable,
    tol: f64,
) -> Result<TuranianResidual> {
    check_tol(tol)?;
    check_finite(x)?;
    ensure_same_order(order.shifted(1), zeros_next)?;
    let first = zeros_next
        .zeros()
        .first()
        .ok_or(Error::InvalidTable("empty zero table".into()))?;
    let ax = x.abs();
    if ax >= first.lo {
        return Err(Error::OutOfDomain { x, limit: first.lo });
    }
    let nu = order.nu();
    let a = eval_jnorm(order, ax, tol)?;
    let b = eval_jnorm(order.shifted(2), ax, tol)?;
    let d = eval_jnorm(order.shifted(1), ax, tol)?;
    if d.value.abs() < 1e-8 {
        return Err(Error::NearPole { x });
    }
    let c = (nu + 1.0) / (nu + 2.0);
    let p = c * a.value * b.value / (d.value * d.value);
    let p_rel = a.abs_error / a.value.abs().max(f64::MIN_POSITIVE)
        + b.abs_error / b.value.abs()
        + 2.0 * d.abs_error / d.value.abs()
        + 6.0 * U;
    let lhs = 1.0 - p;
    let lhs_err = p.abs() * p_rel + U;

    let x2 = ax * ax;
    let mut sum = CompensatedSum::new();
    let mut err = 0.0;
    for z in zeros_next.zeros() {
        let j = z.mid;
        let den = (j - ax) * (j + ax);
        let term = 4.0 * j * j / (den * den);
        sum.add(term);
        let hw = half_width(z.lo, z.mid, z.hi);
        let den_lo = (z.lo - ax) * (z.lo + ax);
        // |d/dj 4j²/(j²−x²)²| = 8j(j²+x²)/(j²−x²)³
        err += 6.0 * U * term + hw * 8.0 * z.hi * (z.hi * z.hi + x2) / den_lo.powi(3);
    }
    let tail = rayleigh_tail(zeros_next, 2);
    let t_max = x2 / (tail.last_lo * tail.last_lo);
    if t_max >= 1.0 {
        return Err(Error::TailBoundFailure {
            bound: f64::INFINITY,
            zeros: zeros_next.len(),
        });
    }
    let s6 = (tail.tail[1] + tail.tail_err[1]) / (tail.last_lo * tail.last_lo);
    let remainder = 3.0 * x2 * x2 * s6 / ((1.0 - t_max) * (1.0 - t_max));
    sum.add(4.0 * (tail.tail[0] + 2.0 * x2 * tail.tail[1] + 0.5 * remainder));
    err += 4.0 * (0.5 * remainder + tail.tail_err[0] + 2.0 * x2 * tail.tail_err[1]);
    let rhs = sum.value();
    Ok(TuranianResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        bound: lhs_err + err + U * rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn ord(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    #[test]
    fn order_rejects_minus_one_and_below() {
        assert!(matches!(Order::new(-1.0), Err(Error::InvalidOrder { .. })));
        assert!(Order::new(-1.5).is_err());
        assert!(Order::new(f64::NAN).is_err());
        assert!(Order::new(-0.999).is_ok());
    }

    #[test]
    fn value_at_origin_is_exactly_one() {
        let v = eval_jnorm(ord(0.7), 0.0, 1e-12).unwrap();
        assert_eq!(v.value, 1.0);
        assert_eq!(v.abs_error, 0.0);
        assert_eq!(eval_inorm(ord(3.0), 0.0, 1e-12).unwrap().value, 1.0);
    }

    #[test]
    fn half_order_matches_sinc_and_cos() {
        let v = eval_jnorm(ord(0.5), FRAC_PI_2, 1e-14).unwrap();
        assert!((v.value - 2.0 / PI).abs() <= 1e-14);
        let c = eval_jnorm(ord(-0.5), FRAC_PI_2, 1e-13).unwrap();
        assert!(c.value.abs() <= 1e-13);
    }

    #[test]
    fn modified_half_orders() {
        let v = eval_inorm(ord(-0.5), 1.0, 1e-12).unwrap();
        assert!((v.value - 1.0f64.cosh()).abs() < 1e-15);
        let v = eval_inorm(ord(0.5), FRAC_PI_2, 1e-12).unwrap();
        assert!((v.value - FRAC_PI_2.sinh() / FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn derivatives_at_closed_forms() {
        assert_eq!(eval_jnorm_deriv(ord(2.0), 0.0, 1e-12).unwrap().value, 0.0);
        assert_eq!(eval_inorm_deriv(ord(0.0), 0.0, 1e-12).unwrap().value, 0.0);
        let d = eval_jnorm_deriv(ord(0.5), 1.0, 1e-12).unwrap();
        assert!((d.value - (1f64.cos() - 1f64.sin())).abs() < 1e-14);
        let d = eval_jnorm_deriv(ord(-0.5), 1.0, 1e-12).unwrap();
        assert!((d.value + 1f64.sin()).abs() < 1e-14);
        let d = eval_inorm_deriv(ord(-0.5), 1.0, 1e-12).unwrap();
        assert!((d.value - 1f64.sinh()).abs() < 1e-14);
        // (x cosh x − sinh x)/x² at 2
        let d = eval_inorm_deriv(ord(0.5), 2.0, 1e-12).unwrap();
        let expected = (2.0 * 2f64.cosh() - 2f64.sinh()) / 4.0;
        assert!((d.value - expected).abs() < 1e-14);
        assert!((expected - 0.974_382_743_580_061).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(matches!(
            eval_jnorm(ord(0.0), 1.0, 0.0),
            Err(Error::InvalidTolerance { .. })
        ));
        assert!(eval_inorm(ord(0.0), 1.0, -1.0).is_err());
    }

    #[test]
    fn huge_argument_does_not_converge() {
        assert!(matches!(
            eval_jnorm(ord(0.0), 1e4, 1e-12),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn cancellation_beyond_tolerance_is_reported() {
        // Terms near x = 60 reach e^60; the error bound cannot meet 1e-12.
        assert!(matches!(
            eval_jnorm(ord(0.0), 60.0, 1e-12),
            Err(Error::ToleranceUnreachable { .. })
        ));
    }

    #[test]
    fn error_bound_covers_trig_oracle() {
        for i in 1..50 {
            let x = 0.3 * f64::from(i);
            let v = eval_jnorm(ord(0.5), x, 1e-9).unwrap();
            let exact = x.sin() / x;
            // closed form itself carries ~1 ulp of error
            assert!((v.value - exact).abs() <= v.abs_error + 4.0 * U * exact.abs().max(1e-300) + 1e-16);
        }
    }

    #[test]
    fn one_minus_sq_ratio_is_accurate_near_one() {
        let j = FRAC_PI_4 * 2.0;
        let x = j * (1.0 - 1e-10);
        let r = one_minus_sq_ratio(x, j);
        let naive = 1.0 - (x / j) * (x / j);
        assert!((r - 2e-10).abs() < 1e-15);
        assert!((r - naive).abs() > 1e-17);
    }
}
