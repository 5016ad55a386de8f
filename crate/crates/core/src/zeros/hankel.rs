//! Hankel asymptotic expansion of `J_ν` for large arguments, used only to
//! certify signs where the power series has lost too many digits.
//!
//! `sqrt(πx/2) J_ν(x) = P cos χ − Q sin χ`, `χ = x − (2ν+1)π/4`. For real
//! `ν` and `x > 0` the remainder of `P` (`Q`) after `p` terms is bounded by
//! the first neglected term once `2p > ν − 1/2` (`2p > ν − 3/2`).

use std::f64::consts::FRAC_PI_4;

use crate::eft::U;

const MAX_TERMS: usize = 200;

/// Returns `(v, err)` with `v ≈ sqrt(πx/2) J_ν(x)` and `|v − true| <= err`.
pub(crate) fn scaled_bessel_j(nu: f64, x: f64) -> Option<(f64, f64)> {
    if !(x > 0.0) {
        return None;
    }
    let mu = 4.0 * nu * nu;
    let k_min = 2usize.max((nu + 1.5).ceil().max(0.0) as usize);
    let mut p = 1.0f64;
    let mut q = 0.0f64;
    let mut rounding = 2.0 * U;
    let mut t = 1.0f64;
    let mut stop = None;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        let prev = t;
        t *= (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf * x);
        let scale = p.abs() + q.abs();
        if k >= k_min && (t.abs() <= 1e-18 * scale || t.abs() > prev.abs()) {
            stop = Some(k);
            break;
        }
        let signed = if (k / 2) % 2 == 0 { t } else { -t };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        rounding += (4.0 * kf + 2.0) * U * t.abs();
    }
    let k = stop?;
    let kf = k as f64;
    let t_next = t * (mu - (2.0 * kf + 1.0).powi(2)) / (8.0 * (kf + 1.0) * x);
    let (err_p, err_q) = if k % 2 == 0 {
        (t.abs(), t_next.abs())
    } else {
        (t_next.abs(), t.abs())
    };

    let c = (2.0 * nu + 1.0) * FRAC_PI_4;
    let (sx, cx) = x.sin_cos();
    let (sc, cc) = c.sin_cos();
    let cos_chi = cx * cc + sx * sc;
    let sin_chi = sx * cc - cx * sc;
    // argument reduction of x, rounding of c and of the four products
    let phase = 8.0 * U + 2.0 * U * c.abs();
    let v = p * cos_chi - q * sin_chi;
    let err = err_p * cos_chi.abs()
        + err_q * sin_chi.abs()
        + (p.abs() + q.abs()) * phase
        + rounding
        + 3.0 * U * (p.abs() + q.abs());
    Some((v, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_orders_are_exact_trig() {
        let x = 40.0f64;
        let (v, e) = scaled_bessel_j(0.5, x).unwrap();
        assert!((v - x.sin()).abs() < 1e-14);
        assert!(e < 1e-13);
        let (v, _) = scaled_bessel_j(-0.5, x).unwrap();
        assert!((v - x.cos()).abs() < 1e-14);
    }

    #[test]
    fn order_zero_at_forty() {
        // J_0(40) = 0.007366890 ...
        let x = 40.0f64;
        let (v, e) = scaled_bessel_j(0.0, x).unwrap();
        let j = v / (std::f64::consts::PI * x / 2.0).sqrt();
        assert!((j - 0.007_366_890_584_237_29).abs() < 1e-12, "{j}");
        assert!(e < 1e-12);
    }
}
