//! Bernoulli and Genocchi-type numbers, `ζ` and the Dirichlet `η` at even
//! integers, and the closed forms of `σ_{±1/2}^(2m)`.
//!
//! At `ν = −1/2` the scaled difference `ω_m = (π/2)^{2m}(σ_{−1/2}^(2m) − σ_{1/2}^(2m))`
//! equals `η(2m)` exactly. Its increments shrink like `4^{−m}`, below binary64
//! resolution well before m = 50, so positivity is decided in rationals
//! against a 110-digit enclosure of π.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::eft::Dd;
use crate::error::{Error, Result};
use crate::rayleigh::SequenceTable;

/// Largest `M` accepted by [`build_cache`].
pub const MAX_CACHE_M: usize = 100;

const PI_DIGITS: &str = "31415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679821480865";

const PI_DD: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// Nearest-ish binary64 (within one ulp) of an exact rational.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n: BigUint = r.numer().magnitude().clone();
    let d: BigUint = r.denom().magnitude().clone();
    let shift = 64 + d.bits() as i64 - n.bits() as i64;
    let q = if shift >= 0 {
        (n << shift as usize) / d
    } else {
        n / (d << (-shift) as usize)
    };
    let q = q.to_u128().expect("quotient has at most 66 bits") as f64;
    let v = ldexp(q, -shift);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2(k: usize) -> BigRational {
    BigRational::from_integer(BigInt::one() << k)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Rational bounds `lo < π < hi`.
pub fn pi_bounds() -> &'static (BigRational, BigRational) {
    static BOUNDS: OnceLock<(BigRational, BigRational)> = OnceLock::new();
    BOUNDS.get_or_init(|| {
        let digits = PI_DIGITS.len() - 1;
        let num: BigInt = PI_DIGITS.parse().expect("digits");
        let den = num_traits::pow(BigInt::from(10), digits);
        let lo = BigRational::new(num.clone(), den.clone());
        let hi = BigRational::new(num + 1, den);
        (lo, hi)
    })
}

/// Compares `π²` with a rational, or `None` if the enclosure cannot decide.
pub fn compare_pi_squared(r: &BigRational) -> Option<Ordering> {
    let (lo, hi) = pi_bounds();
    if &(lo * lo) > r {
        Some(Ordering::Greater)
    } else if &(hi * hi) < r {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// `B_0, B_1, …, B_n` via `Σ_{k=0}^{n} C(n+1, k) B_k = 0`; odd entries past
/// `B_1` are zero and skipped.
fn bernoulli_up_to(n_max: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::zero(); n_max + 1];
    b[0] = BigRational::one();
    if n_max >= 1 {
        b[1] = rat(-1, 2);
    }
    for n in (2..=n_max).step_by(2) {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(n+1, 0)
        for k in 0..n {
            if k < 2 || k % 2 == 0 {
                acc += &b[k] * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        b[n] = -acc / BigRational::from_integer(BigInt::from(n + 1));
    }
    b
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumberTheoryCache {
    max_m: usize,
    /// `B_0, B_2, …, B_{2M}`.
    #[serde(skip)]
    bernoulli_even: Vec<BigRational>,
    /// `ζ(2), …, ζ(2M)`.
    zeta_even: Vec<f64>,
    /// `η(2), …, η(2M)`.
    eta_even: Vec<f64>,
    /// `G_2, …, G_{2M}`.
    #[serde(skip)]
    genocchi: Vec<BigRational>,
}

/// `|B_{2m}| 2^{2m} / (2 (2m)!)`, so that `ζ(2m) = c · π^{2m}`.
fn zeta_coefficient(b2m: &BigRational, m: usize) -> BigRational {
    b2m.abs() * pow2(2 * m) / BigRational::from_integer(BigInt::from(2) * factorial(2 * m))
}

pub fn build_cache(max_m: usize) -> Result<NumberTheoryCache> {
    if max_m == 0 {
        return Err(Error::MissingParameter("cache size must be positive"));
    }
    if max_m > MAX_CACHE_M {
        return Err(Error::CacheTooSmall {
            requested: max_m,
            available: MAX_CACHE_M,
        });
    }
    let all = bernoulli_up_to(2 * max_m);
    let bernoulli_even: Vec<BigRational> = all.into_iter().step_by(2).collect();
    let mut zeta_even = Vec::with_capacity(max_m);
    let mut eta_even = Vec::with_capacity(max_m);
    let mut genocchi = Vec::with_capacity(max_m);
    for m in 1..=max_m {
        let b = &bernoulli_even[m];
        let c = zeta_coefficient(b, m);
        let pi_pow = PI_DD.powi(2 * m as u32);
        let zeta = pi_pow.mul_f64(ratio_to_f64(&c)).to_f64();
        zeta_even.push(zeta);
        let eta_c = (BigRational::one() - BigRational::one() / pow2(2 * m - 1)) * c;
        eta_even.push(pi_pow.mul_f64(ratio_to_f64(&eta_c)).to_f64());
        genocchi.push(BigRational::from_integer(BigInt::from(2)) * (BigRational::one() - pow2(2 * m)) * b);
    }
    Ok(NumberTheoryCache {
        max_m,
        bernoulli_even,
        zeta_even,
        eta_even,
        genocchi,
    })
}

impl NumberTheoryCache {
    pub fn max_m(&self) -> usize {
        self.max_m
    }

    fn require(&self, m: usize) -> Result<()> {
        if m >= 1 && m <= self.max_m {
            Ok(())
        } else {
            Err(Error::CacheTooSmall {
                requested: m,
                available: self.max_m,
            })
        }
    }

    /// `B_{2m}` for m = 0..=M.
    pub fn bernoulli(&self, m: usize) -> Result<&BigRational> {
        self.bernoulli_even.get(m).ok_or(Error::CacheTooSmall {
            requested: m,
            available: self.max_m,
        })
    }

    pub fn genocchi(&self, m: usize) -> Result<&BigRational> {
        self.require(m)?;
        Ok(&self.genocchi[m - 1])
    }

    pub fn zeta(&self, m: usize) -> Result<f64> {
        self.require(m)?;
        Ok(self.zeta_even[m - 1])
    }

    pub fn eta(&self, m: usize) -> Result<f64> {
        self.require(m)?;
        Ok(self.eta_even[m - 1])
    }

    /// Rational `c_m` with `η(2m) = c_m π^{2m}`.
    pub fn eta_coefficient(&self, m: usize) -> Result<BigRational> {
        self.require(m)?;
        let c = zeta_coefficient(&self.bernoulli_even[m], m);
        Ok((BigRational::one() - BigRational::one() / pow2(2 * m - 1)) * c)
    }

    /// Decides `η(2m+2) > η(2m)` exactly: `π² > c_m / c_{m+1}`.
    pub fn eta_increases_at(&self, m: usize) -> Result<Option<bool>> {
        let ratio = self.eta_coefficient(m)? / self.eta_coefficient(m + 1)?;
        Ok(compare_pi_squared(&ratio).map(|o| o == Ordering::Greater))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfOrder {
    #[serde(rename = "-1/2")]
    MinusHalf,
    #[serde(rename = "1/2")]
    PlusHalf,
}

impl HalfOrder {
    pub fn nu(self) -> f64 {
        match self {
            HalfOrder::MinusHalf => -0.5,
            HalfOrder::PlusHalf => 0.5,
        }
    }
}

/// Exact `σ_{±1/2}^(2m)` from the Bernoulli/Genocchi closed forms.
pub fn sigma_half_exact(half: HalfOrder, m: usize, cache: &NumberTheoryCache) -> Result<BigRational> {
    cache.require(m)?;
    let fact = BigRational::from_integer(factorial(2 * m));
    let sign = if m % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    Ok(match half {
        // (−1)^m 2^{2m−2} G_{2m} / (2m)!
        HalfOrder::MinusHalf => sign * pow2(2 * m - 2) * cache.genocchi(m)? / fact,
        // (−1)^{m−1} 2^{2m−1} B_{2m} / (2m)!
        HalfOrder::PlusHalf => -sign * pow2(2 * m - 1) * cache.bernoulli(m)? / fact,
    })
}

pub fn sigma_half_closed(half: HalfOrder, m: usize, cache: &NumberTheoryCache) -> Result<f64> {
    sigma_half_exact(half, m, cache).map(|r| ratio_to_f64(&r))
}

/// Decides `ω_{m+1,−1/2} > ω_{m,−1/2}` exactly, i.e. `π²/4 > d_m / d_{m+1}`
/// with `d_m = σ_{−1/2}^(2m) − σ_{1/2}^(2m)`.
pub fn omega_half_increases_at(m: usize, cache: &NumberTheoryCache) -> Result<Option<bool>> {
    let d = |k| -> Result<BigRational> {
        Ok(sigma_half_exact(HalfOrder::MinusHalf, k, cache)? - sigma_half_exact(HalfOrder::PlusHalf, k, cache)?)
    };
    let ratio = BigRational::from_integer(4.into()) * d(m)? / d(m + 1)?;
    Ok(compare_pi_squared(&ratio).map(|o| o == Ordering::Greater))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaIdentity {
    pub m: usize,
    /// `|ω_{m,−1/2} − η(2m)|`.
    pub residual: f64,
    /// `ω_{m+1} − ω_m` in binary64; may round to zero for large m.
    pub increment: f64,
    /// `ω_{m+1} > ω_m`, decided exactly.
    pub increment_positive: bool,
}

pub fn omega_eta_identity_residual(
    m: usize,
    cache: &NumberTheoryCache,
    seq: &SequenceTable,
) -> Result<EtaIdentity> {
    if seq.order.nu() != -0.5 {
        return Err(Error::OrderMismatch {
            expected: -0.5,
            found: seq.order.nu(),
        });
    }
    if m == 0 || m + 1 > seq.m_max {
        return Err(Error::CacheTooSmall {
            requested: m + 1,
            available: seq.m_max,
        });
    }
    cache.require(m + 1)?;
    let residual = (seq.omega(m) - cache.eta(m)?).abs();
    Ok(EtaIdentity {
        m,
        residual,
        increment: seq.omega(m + 1) - seq.omega(m),
        increment_positive: omega_half_increases_at(m, cache)? == Some(true),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn small_bernoulli_numbers() {
        let c = build_cache(3).unwrap();
        assert_eq!(c.bernoulli(0).unwrap(), &BigRational::one());
        assert_eq!(c.bernoulli(1).unwrap(), &rat(1, 6));
        assert_eq!(c.bernoulli(2).unwrap(), &rat(-1, 30));
        assert_eq!(c.bernoulli(3).unwrap(), &rat(1, 42));
        assert_eq!(c.genocchi(1).unwrap(), &rat(-1, 1));
    }

    #[test]
    fn zeta_and_eta_at_two() {
        let c = build_cache(2).unwrap();
        assert!((c.zeta(1).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((c.eta(1).unwrap() - PI * PI / 12.0).abs() < 1e-15);
        assert!((c.eta(2).unwrap() - 7.0 * PI.powi(4) / 720.0).abs() < 1e-15);
    }

    #[test]
    fn closed_sigma_values() {
        let c = build_cache(3).unwrap();
        assert_eq!(sigma_half_exact(HalfOrder::MinusHalf, 1, &c).unwrap(), rat(1, 2));
        assert_eq!(sigma_half_exact(HalfOrder::PlusHalf, 1, &c).unwrap(), rat(1, 6));
        assert_eq!(sigma_half_exact(HalfOrder::MinusHalf, 2, &c).unwrap(), rat(1, 6));
        assert_eq!(sigma_half_exact(HalfOrder::PlusHalf, 2, &c).unwrap(), rat(1, 90));
        assert!(matches!(
            sigma_half_closed(HalfOrder::PlusHalf, 4, &c),
            Err(Error::CacheTooSmall { .. })
        ));
    }

    #[test]
    fn cache_size_limits() {
        assert!(matches!(build_cache(101), Err(Error::CacheTooSmall { .. })));
        assert!(build_cache(0).is_err());
    }

    #[test]
    fn rational_conversion() {
        assert_eq!(ratio_to_f64(&rat(1, 3)), 1.0 / 3.0);
        assert_eq!(ratio_to_f64(&rat(-7, 2)), -3.5);
        let tiny = BigRational::new(BigInt::one(), BigInt::one() << 1100usize);
        assert_eq!(ratio_to_f64(&tiny), 0.0);
        let small = BigRational::new(BigInt::one(), BigInt::one() << 1000usize);
        assert_eq!(ratio_to_f64(&small), 2f64.powi(-1000));
    }

    #[test]
    fn pi_enclosure_is_tight_and_ordered() {
        let (lo, hi) = pi_bounds();
        assert!(lo < hi);
        assert_eq!(ratio_to_f64(lo), PI);
        assert_eq!(compare_pi_squared(&rat(9, 1)), Some(Ordering::Greater));
        assert_eq!(compare_pi_squared(&rat(10, 1)), Some(Ordering::Less));
    }
}
