use std::f64::consts::PI;

use proptest::prelude::*;
use redheffer_core::inequality::DEFAULT_NU_GRID;
use redheffer_core::series::eval_jnorm;
use redheffer_core::zeros::{first_zero, first_zero_bracket, interlacing_residuals, zero_table};
use redheffer_core::{Error, Order, ZeroTable};

fn order(nu: f64) -> Order {
    Order::new(nu).unwrap()
}

// j_{ν,1} at 40 digits.
const FIRST_ZEROS: [(f64, f64); 10] = [
    (-0.9, 0.64783088075037726119),
    (-0.75, 1.0585082594041192372),
    (-0.5, 1.5707963267948966192),
    (-0.25, 2.006299671789450416),
    (0.0, 2.4048255576957727686),
    (0.5, 3.1415926535897932385),
    (1.0, 3.8317059702075123156),
    (2.0, 5.1356223018406825563),
    (5.0, 8.7714838159599540191),
    (10.0, 14.475500686554541238),
];

#[test]
fn half_order_zeros_are_multiples_of_pi() {
    let plus = zero_table(order(0.5), 20, 1e-15).unwrap();
    let minus = zero_table(order(-0.5), 20, 1e-15).unwrap();
    for n in 1..=20 {
        let z = plus.get(n).unwrap();
        assert!((z.mid - n as f64 * PI).abs() < 1e-12, "j_(1/2),{n}");
        assert!(z.lo <= n as f64 * PI * (1.0 + 1e-16) && z.hi >= n as f64 * PI * (1.0 - 1e-16));
        let z = minus.get(n).unwrap();
        assert!((z.mid - (n as f64 - 0.5) * PI).abs() < 1e-12, "j_(-1/2),{n}");
    }
}

#[test]
fn first_zeros_match_oracle_and_bracket() {
    for (nu, j) in FIRST_ZEROS {
        let z = first_zero(order(nu), 1e-15).unwrap();
        assert!((z.mid - j).abs() < 4e-15 * j, "nu={nu}: {} vs {j}", z.mid);
        assert!(z.lo <= z.hi && z.width() <= 2e-15 * j + 64.0 * f64::EPSILON * j);
        let a = 4.0 * (nu + 1.0);
        assert!(a < j * j && j * j < a * (nu + 2.0), "Euler–Rayleigh bracket at {nu}");
        let (lo, hi) = first_zero_bracket(order(nu));
        assert!(lo < z.lo && z.hi < hi, "bracket at {nu}");
    }
    for nu in DEFAULT_NU_GRID {
        let j = first_zero(order(nu), 1e-15).unwrap().mid;
        let a = 4.0 * (nu + 1.0);
        assert!(a < j * j && j * j < a * (nu + 2.0));
    }
}

#[test]
fn zeros_are_sign_changes_and_spaced_by_about_pi() {
    for nu in [-0.9, 0.0, 3.3, 10.0] {
        let t = zero_table(order(nu), 200, 1e-14).unwrap();
        assert_eq!(t.len(), 200);
        for w in t.zeros().windows(2) {
            assert!(w[0].hi < w[1].lo);
            let gap = w[1].mid - w[0].mid;
            assert!(gap > 2.5 && gap < 4.5, "gap {gap} at nu={nu}");
        }
        let z = t.get(3).unwrap();
        let a = eval_jnorm(order(nu), z.lo * (1.0 - 1e-9), 1e-10).unwrap().value;
        let b = eval_jnorm(order(nu), z.hi * (1.0 + 1e-9), 1e-10).unwrap().value;
        assert!(a * b < 0.0);
    }
}

#[test]
fn large_zeros_follow_mcmahon() {
    let nu = 2.0f64;
    let t = zero_table(order(nu), 200, 1e-14).unwrap();
    for n in [150usize, 200] {
        let beta = (n as f64 + nu / 2.0 - 0.25) * PI;
        let mu = 4.0 * nu * nu;
        let mcmahon = beta - (mu - 1.0) / (8.0 * beta);
        assert!((t.get(n).unwrap().mid - mcmahon).abs() < 1e-5);
    }
}

#[test]
fn zeros_interlace_with_next_order() {
    for nu in [-0.5, 0.0, 1.7] {
        let a = zero_table(order(nu), 60, 1e-14).unwrap();
        let b = zero_table(order(nu + 1.0), 60, 1e-14).unwrap();
        let gaps = interlacing_residuals(&a, &b).unwrap();
        assert!(gaps.holds(), "nu={nu}");
        assert!(gaps.min_gap() > 0.0);
    }
}

#[test]
fn table_json_round_trip() {
    let t = zero_table(order(-0.25), 30, 1e-15).unwrap();
    let back = ZeroTable::from_json(&t.to_json()).unwrap();
    assert_eq!(back, t);
    assert_eq!(t.truncated(10).unwrap().len(), 10);
    assert!(t.truncated(31).is_err());
    let bad = t.to_json().replacen("\"n\":1", "\"n\":7", 1);
    assert!(matches!(ZeroTable::from_json(&bad), Err(Error::InvalidTable(_))));
}

#[test]
fn bad_requests() {
    assert!(zero_table(order(0.0), 0, 1e-15).is_err());
    assert!(matches!(first_zero(order(0.0), -1.0), Err(Error::InvalidTolerance { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn first_zero_increases_with_order(nu in -0.99f64..30.0, d in 0.01f64..2.0) {
        let a = first_zero(order(nu), 1e-13).unwrap();
        let b = first_zero(order(nu + d), 1e-13).unwrap();
        prop_assert!(a.hi < b.lo);
        let s = 4.0 * (nu + 1.0);
        prop_assert!(s < a.hi * a.hi && a.lo * a.lo < s * (nu + 2.0));
    }
}
