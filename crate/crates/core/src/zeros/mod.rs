//! Certified positive zeros `j_{ν,n}` of `J_ν` (equivalently of `𝒥_ν`).
//!
//! Zeros are enclosed by bisection on signs that are certified: the value's
//! error bound must be smaller than its magnitude. Signs come from the
//! double-double power series up to moderate arguments and from the Hankel
//! expansion beyond. After bracketing, a sign-change count over a mesh of
//! `[lo_1, hi_N]` confirms that no zero was skipped.

mod hankel;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_tol, Error, Result};
use crate::series::{normalized_series, Order};

/// Tolerance used for zero tables feeding the inequality engine.
pub const ENGINE_ZERO_TOL: f64 = 1e-15;

/// Default number of zeros per table.
pub const DEFAULT_ZERO_COUNT: usize = 200;

/// Above this the Hankel expansion is tried first.
const SERIES_PREFERRED_MAX: f64 = 35.0;
/// Below this the Hankel expansion is never tried.
const HANKEL_MIN: f64 = 8.0;
/// Beyond this the power series is never tried.
const SERIES_MAX: f64 = 60.0;
/// Enclosures may be wider than `2 tol` only by this many ulps.
const ULP_SLACK: f64 = 64.0;
const MAX_MESH_HALVINGS: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sign {
    Pos,
    Neg,
}

impl Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

fn sign_of(v: f64, err: f64) -> Option<Sign> {
    if v.abs() > err {
        Some(if v > 0.0 { Sign::Pos } else { Sign::Neg })
    } else {
        None
    }
}

fn series_sign(nu: f64, x: f64) -> Option<Sign> {
    let raw = normalized_series(nu, x, true).ok()?;
    sign_of(raw.value(), raw.value_error())
}

fn hankel_sign(nu: f64, x: f64) -> Option<Sign> {
    let (v, e) = hankel::scaled_bessel_j(nu, x)?;
    sign_of(v, e)
}

/// Certified sign of `J_ν(x)` for `x > 0`, or `None` when neither method
/// resolves it.
fn certified_sign(nu: f64, x: f64) -> Option<Sign> {
    if x <= SERIES_PREFERRED_MAX {
        series_sign(nu, x).or_else(|| (x >= HANKEL_MIN).then(|| hankel_sign(nu, x)).flatten())
    } else {
        hankel_sign(nu, x).or_else(|| (x <= SERIES_MAX).then(|| series_sign(nu, x)).flatten())
    }
}

/// One enclosure `lo < j_{ν,n} < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedZero {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    #[serde(skip)]
    pub mid: f64,
}

impl CertifiedZero {
    fn new(n: usize, lo: f64, hi: f64) -> Self {
        CertifiedZero {
            n,
            lo,
            hi,
            mid: lo + 0.5 * (hi - lo),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn half_width(&self) -> f64 {
        (self.mid - self.lo).max(self.hi - self.mid)
    }
}

/// The first `N` zeros of one order, in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    order: Order,
    tol: f64,
    zeros: Vec<CertifiedZero>,
}

#[derive(Serialize, Deserialize)]
struct ZeroTableJson {
    nu: f64,
    tol: f64,
    zeros: Vec<CertifiedZero>,
}

impl ZeroTable {
    pub fn order(&self) -> Order {
        self.order
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn zeros(&self) -> &[CertifiedZero] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// First zero; tables are never empty once constructed.
    pub fn first(&self) -> &CertifiedZero {
        &self.zeros[0]
    }

    /// The `n`-th zero, 1-based.
    pub fn get(&self, n: usize) -> Option<&CertifiedZero> {
        n.checked_sub(1).and_then(|i| self.zeros.get(i))
    }

    /// A table holding the first `count` zeros of this one.
    pub fn truncated(&self, count: usize) -> Result<ZeroTable> {
        if count == 0 || count > self.len() {
            return Err(Error::CacheTooSmall {
                requested: count,
                available: self.len(),
            });
        }
        Ok(ZeroTable {
            order: self.order,
            tol: self.tol,
            zeros: self.zeros[..count].to_vec(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ZeroTableJson {
            nu: self.order.nu(),
            tol: self.tol,
            zeros: self.zeros.clone(),
        })
        .expect("zero tables serialize")
    }

    /// Parses and validates a table written by [`ZeroTable::to_json`].
    pub fn from_json(text: &str) -> Result<ZeroTable> {
        let raw: ZeroTableJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidTable(e.to_string()))?;
        let order = Order::new(raw.nu)?;
        check_tol(raw.tol)?;
        if raw.zeros.is_empty() {
            return Err(Error::InvalidTable("no zeros".into()));
        }
        let mut zeros = Vec::with_capacity(raw.zeros.len());
        let mut prev_hi = 0.0;
        for (i, z) in raw.zeros.iter().enumerate() {
            if z.n != i + 1 || !(z.lo > prev_hi) || !(z.hi > z.lo) || !z.hi.is_finite() {
                return Err(Error::InvalidTable(format!("bad enclosure at n = {}", i + 1)));
            }
            prev_hi = z.hi;
            zeros.push(CertifiedZero::new(z.n, z.lo, z.hi));
        }
        Ok(ZeroTable {
            order,
            tol: raw.tol,
            zeros,
        })
    }
}

fn has_interior(lo: f64, hi: f64) -> bool {
    let m = lo + 0.5 * (hi - lo);
    m > lo && m < hi
}

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    a.next_up() - a
}

/// Bisects `[lo, hi]`, where the sign at `lo` is `s_lo` and at `hi` the opposite.
fn bisect(nu: f64, mut lo: f64, mut hi: f64, s_lo: Sign, n: usize, tol: f64) -> Result<CertifiedZero> {
    while hi - lo > 2.0 * tol {
        let m = lo + 0.5 * (hi - lo);
        if !(m > lo && m < hi) {
            break;
        }
        match certified_sign(nu, m) {
            None => {
                // the midpoint sits on the zero; probe either side of it
                let w = hi - lo;
                let (a, b) = (lo + 0.375 * w, lo + 0.625 * w);
                let (sa, sb) = (certified_sign(nu, a), certified_sign(nu, b));
                if sa.is_none() && sb.is_none() {
                    break;
                }
                if sa == Some(s_lo) {
                    lo = a;
                } else if sa.is_some() {
                    hi = a;
                }
                if sb.is_some() && sb != Some(s_lo) && b < hi {
                    hi = b;
                } else if sb == Some(s_lo) {
                    lo = b;
                }
            }
            Some(s) if s == s_lo => {
                if !has_interior(m, hi) {
                    break;
                }
                lo = m;
            }
            Some(_) => {
                if !has_interior(lo, m) {
                    break;
                }
                hi = m;
            }
        }
    }
    if hi - lo > 2.0 * tol.max(ULP_SLACK * ulp(hi)) {
        return Err(Error::SignCertificationFailure { x: lo + 0.5 * (hi - lo) });
    }
    Ok(CertifiedZero::new(n, lo, hi))
}

/// Walks right from `start` (where the sign is `s_start`) in steps of `step`
/// until the certified sign flips, then bisects the last cell.
fn scan_and_bisect(
    nu: f64,
    start: f64,
    s_start: Sign,
    step: f64,
    limit: f64,
    n: usize,
    tol: f64,
) -> Result<CertifiedZero> {
    let mut a = start;
    let mut i = 1u32;
    loop {
        let mut b = start + f64::from(i) * step;
        if b > limit {
            return Err(Error::SignCertificationFailure { x: limit });
        }
        let mut sb = certified_sign(nu, b);
        if sb.is_none() {
            // landed on top of a zero; nudge once
            b -= 0.37 * step;
            sb = certified_sign(nu, b);
        }
        match sb {
            None => return Err(Error::SignCertificationFailure { x: b }),
            Some(s) if s == s_start => a = b,
            Some(_) => return bisect(nu, a, b, s_start, n, tol),
        }
        i += 1;
    }
}

/// Euler–Rayleigh bounds `2√(ν+1) < j_{ν,1} < 2√((ν+1)(ν+2))`.
pub fn first_zero_bracket(order: Order) -> (f64, f64) {
    let a = order.nu() + 1.0;
    (2.0 * a.sqrt(), 2.0 * (a * (a + 1.0)).sqrt())
}

/// Encloses `j_{ν,1}` to half-width `tol` (or a few ulps if `tol` is below
/// that resolution).
pub fn first_zero(order: Order, tol: f64) -> Result<CertifiedZero> {
    check_tol(tol)?;
    let nu = order.nu();
    let (lo, hi) = first_zero_bracket(order);
    if certified_sign(nu, lo) != Some(Sign::Pos) {
        return Err(Error::SignCertificationFailure { x: lo });
    }
    // the upper bracket can lie past j_{ν,2} for large ν, so scan from below
    let step = (PI / 8.0).min((hi - lo) / 4.0);
    scan_and_bisect(nu, lo, Sign::Pos, step, hi + step, 1, tol)
}

/// Sign of `J_ν` between `j_{ν,n−1}` and `j_{ν,n}`.
fn sign_before(n: usize) -> Sign {
    if n % 2 == 1 {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// The first `count` zeros, each certified, plus a global sign-change count
/// confirming none was skipped.
pub fn zero_table(order: Order, count: usize, tol: f64) -> Result<ZeroTable> {
    check_tol(tol)?;
    if count == 0 {
        return Err(Error::MissingParameter("zero count must be positive"));
    }
    let nu = order.nu();
    let mut zeros = Vec::with_capacity(count);
    zeros.push(first_zero(order, tol)?);
    for n in 2..=count {
        let prev = *zeros.last().expect("non-empty");
        let expected = sign_before(n);
        let centre = prev.mid + PI;
        let a = centre - 0.45 * PI;
        let b = centre + 0.45 * PI;
        let found = match (certified_sign(nu, a), certified_sign(nu, b)) {
            (Some(sa), Some(sb)) if sa == expected && sb == expected.flip() => {
                bisect(nu, a, b, expected, n, tol)?
            }
            _ => scan_and_bisect(nu, prev.hi, expected, PI / 8.0, prev.hi + 4.0 * PI, n, tol)?,
        };
        zeros.push(found);
    }
    verify_count(nu, &zeros)?;
    Ok(ZeroTable { order, tol, zeros })
}

fn count_sign_changes(nu: f64, lo: f64, hi: f64, h: f64) -> usize {
    let steps = ((hi - lo) / h).ceil() as usize;
    let mut last: Option<Sign> = None;
    let mut changes = 0;
    for i in 0..=steps {
        let x = if i == steps { hi } else { lo + i as f64 * h };
        if let Some(s) = certified_sign(nu, x) {
            if let Some(l) = last {
                if l != s {
                    changes += 1;
                }
            }
            last = Some(s);
        }
    }
    changes
}

fn verify_count(nu: f64, zeros: &[CertifiedZero]) -> Result<()> {
    let n = zeros.len();
    // Evaluate just outside the outer enclosures so both ends have a sign.
    let lo = zeros[0].lo;
    let hi = zeros[n - 1].hi;
    let min_spacing = zeros
        .windows(2)
        .map(|w| w[1].lo - w[0].hi)
        .fold(f64::INFINITY, f64::min);
    let mut h = (PI / 8.0).min(min_spacing / 4.0);
    let mut found = 0;
    for _ in 0..=MAX_MESH_HALVINGS {
        found = count_sign_changes(nu, lo, hi, h);
        if found == n {
            return Ok(());
        }
        h *= 0.5;
    }
    Err(Error::MeshRefinementExhausted { expected: n, found })
}

/// Gaps of the interlacing `j_{ν,n} < j_{ν+1,n} < j_{ν,n+1}`, measured
/// between enclosures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterlacingGaps {
    /// `j_{ν+1,n} − j_{ν,n}`, n = 1..=N.
    pub same_index: Vec<f64>,
    /// `j_{ν,n+1} − j_{ν+1,n}`, n = 1..N.
    pub next_index: Vec<f64>,
}

impl InterlacingGaps {
    pub fn min_gap(&self) -> f64 {
        self.same_index
            .iter()
            .chain(&self.next_index)
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn holds(&self) -> bool {
        self.min_gap() > 0.0
    }
}

pub fn interlacing_residuals(lower: &ZeroTable, upper: &ZeroTable) -> Result<InterlacingGaps> {
    let expected = lower.order().nu() + 1.0;
    if (upper.order().nu() - expected).abs() > 1e-12 {
        return Err(Error::OrderMismatch {
            expected,
            found: upper.order().nu(),
        });
    }
    if lower.len() != upper.len() {
        return Err(Error::InvalidTable(format!(
            "table lengths differ ({} vs {})",
            lower.len(),
            upper.len()
        )));
    }
    let a = lower.zeros();
    let b = upper.zeros();
    let same_index = a.iter().zip(b).map(|(za, zb)| zb.lo - za.hi).collect();
    let next_index = a[1..].iter().zip(b).map(|(za, zb)| za.lo - zb.hi).collect();
    Ok(InterlacingGaps {
        same_index,
        next_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn ord(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    #[test]
    fn first_zeros_of_order_zero() {
        let t = zero_table(ord(0.0), 2, 1e-14).unwrap();
        let z1 = t.first();
        assert!(z1.lo <= 2.404_825_557_695_773 && 2.404_825_557_695_773 <= z1.hi);
        assert!(z1.width() <= 2e-14);
        let z2 = t.get(2).unwrap();
        assert!((z2.mid - 5.520_078_110_286_311).abs() < 1e-13);
    }

    #[test]
    fn half_order_zeros_are_multiples_of_pi() {
        let t = zero_table(ord(-0.5), 5, 1e-14).unwrap();
        for (i, z) in t.zeros().iter().enumerate() {
            let exact = FRAC_PI_2 + i as f64 * PI;
            assert!((z.mid - exact).abs() < 1e-13, "n={} {}", i + 1, z.mid);
        }
    }

    #[test]
    fn large_order_first_zero_is_not_the_second() {
        // the upper Euler–Rayleigh bound exceeds j_{10,2} = 18.43
        let z = first_zero(ord(10.0), 1e-13).unwrap();
        assert!((z.mid - 14.475_500_686_554_54).abs() < 1e-11, "{}", z.mid);
    }

    #[test]
    fn json_round_trip() {
        let t = zero_table(ord(1.0), 4, 1e-13).unwrap();
        let back = ZeroTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_malformed_table() {
        let bad = r#"{"nu":0.0,"tol":1e-12,"zeros":[{"n":1,"lo":3.0,"hi":2.0}]}"#;
        assert!(ZeroTable::from_json(bad).is_err());
        let bad = r#"{"nu":-2.0,"tol":1e-12,"zeros":[{"n":1,"lo":2.0,"hi":3.0}]}"#;
        assert!(matches!(ZeroTable::from_json(bad), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn interlacing_between_half_orders() {
        let a = zero_table(ord(-0.5), 3, 1e-14).unwrap();
        let b = zero_table(ord(0.5), 3, 1e-14).unwrap();
        let g = interlacing_residuals(&a, &b).unwrap();
        assert_eq!(g.same_index.len(), 3);
        assert_eq!(g.next_index.len(), 2);
        for gap in g.same_index.iter().chain(&g.next_index) {
            assert!((gap - FRAC_PI_2).abs() < 1e-12);
        }
        let one_a = zero_table(ord(-0.5), 1, 1e-14).unwrap();
        let one_b = zero_table(ord(0.5), 1, 1e-14).unwrap();
        let g = interlacing_residuals(&one_a, &one_b).unwrap();
        assert!(g.next_index.is_empty() && g.holds());
        assert!(matches!(
            interlacing_residuals(&a, &a),
            Err(Error::OrderMismatch { .. })
        ));
    }
}
