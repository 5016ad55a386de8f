//! Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (q+k)^{−s}` for integer `s >= 2`, `q > 0`,
//! by direct summation followed by Euler–Maclaurin.

use crate::eft::{CompensatedSum, U};

/// `B_2, B_4, …, B_20`.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Returns `(value, abs_error)`.
pub(crate) fn hurwitz_zeta(s: u32, q: f64) -> (f64, f64) {
    debug_assert!(s >= 2 && q > 0.0);
    let sf = f64::from(s);
    let start = q.max(10.0).max(sf);
    let mut acc = CompensatedSum::new();
    let mut rounding = 0.0;
    let mut a = q;
    let mut k = 0u32;
    while a < start {
        let t = a.powf(-sf);
        acc.add(t);
        rounding += 4.0 * U * t;
        k += 1;
        a = q + f64::from(k);
    }
    let lead = a.powf(1.0 - sf) / (sf - 1.0) + 0.5 * a.powf(-sf);
    acc.add(lead);
    rounding += 4.0 * U * lead;

    // B_{2j}/(2j)! · s(s+1)…(s+2j−2) · a^{−s−2j+1}
    let mut coeff = a.powf(-sf - 1.0) * sf; // j = 1 rising factorial and power
    let mut fact = 2.0;
    let mut err = f64::INFINITY;
    for (idx, b) in BERNOULLI.iter().enumerate() {
        let j = (idx + 1) as f64;
        let term = b / fact * coeff;
        if term.abs() <= 1e-17 * acc.value().abs() || idx + 1 == BERNOULLI.len() {
            err = term.abs();
            break;
        }
        acc.add(term);
        rounding += 8.0 * U * term.abs();
        coeff *= (sf + 2.0 * j - 1.0) * (sf + 2.0 * j) / (a * a);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    let value = acc.value();
    (value, err + rounding + U * value)
}
