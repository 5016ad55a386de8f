//! Acceptance criteria 1–10, one line each. Runs without the libtest harness
//! so the lines always reach the terminal; exits non-zero if any asserted
//! criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::{Command, ExitCode};

use clap::Parser;
use redheffer_cli::config::{Cli, RunConfig};
use redheffer_cli::emit::render;
use redheffer_cli::run::run_conjecture;
use redheffer_cli::{run_suite, Format};
use redheffer_core::closed_form::{eval_closed_form, ClosedFormKind};
use redheffer_core::inequality::{
    abscissae, bw1_margin, check_inequality, check_power_chain, inequality_at, monotonicity_scan,
    ContextCache, Direction, GridSpec, InequalityReport, QuotientKind, TheoremId, BW1_NU_GRID,
    CHAIN_K_MAX, DEFAULT_NU_GRID, DEFAULT_R_VALUES,
};
use redheffer_core::number_theory::{build_cache, omega_eta_identity_residual};
use redheffer_core::rayleigh::{scaled_sequences, sigma_by_zero_sum, sigma_table_recurrence, ConjectureStatus};
use redheffer_core::series::{eval_inorm, eval_jnorm, ratio_i, ratio_j};
use redheffer_core::zeros::{first_zero, zero_table};
use redheffer_core::Order;

type Outcome = Result<String, String>;

fn order(nu: f64) -> Order {
    Order::new(nu).unwrap()
}

fn grid(end: f64, n: usize) -> Vec<f64> {
    abscissae(end, n)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn closed_forms() -> Outcome {
    let mut worst = 0.0f64;
    for (nu, jk, ik) in [
        (0.5, ClosedFormKind::Sinc, ClosedFormKind::Sinhc),
        (-0.5, ClosedFormKind::Cos, ClosedFormKind::Cosh),
    ] {
        for x in grid(10.0, 200) {
            let j = eval_jnorm(order(nu), x, 1e-12).map_err(|e| e.to_string())?.value;
            let i = eval_inorm(order(nu), x, 1e-6).map_err(|e| e.to_string())?.value;
            worst = worst
                .max(rel(j, eval_closed_form(jk, x).unwrap()))
                .max(rel(i, eval_closed_form(ik, x).unwrap()));
        }
    }
    let m = order(-0.5);
    let zeros = zero_table(m, 200, 1e-15).map_err(|e| e.to_string())?;
    for x in grid(FRAC_PI_2, 200) {
        let t = ratio_j(m, x, &zeros, 1e-10).map_err(|e| e.to_string())?.value;
        let h = ratio_i(m, x, &zeros, 1e-10).map_err(|e| e.to_string())?.value;
        worst = worst.max(rel(t, x.tan())).max(rel(h, x.tanh()));
    }
    ensure(worst <= 1e-13, format!("max relative error {worst:.2e} (limit 1e-13)"))
}

fn zeros() -> Outcome {
    let mut worst = 0.0f64;
    for (nu, shift) in [(0.5, 0.0), (-0.5, 0.5)] {
        let t = zero_table(order(nu), 20, 1e-15).map_err(|e| e.to_string())?;
        for n in 1..=20 {
            worst = worst.max((t.get(n).unwrap().mid - (n as f64 - shift) * PI).abs());
        }
    }
    let mut bracket = true;
    for nu in DEFAULT_NU_GRID {
        let j = first_zero(order(nu), 1e-15).map_err(|e| e.to_string())?;
        let a = 4.0 * (nu + 1.0);
        bracket &= a < j.lo * j.lo && j.hi * j.hi < a * (nu + 2.0);
    }
    ensure(
        worst <= 1e-12 && bracket,
        format!("max |j − nπ| {worst:.2e} (limit 1e-12); bracket holds on default grid: {bracket}"),
    )
}

fn rayleigh() -> Outcome {
    let mut worst = 0.0f64;
    let mut within_bounds = true;
    let mut first_exact = true;
    for nu in [-0.5, 0.0, 0.5, 1.0, 2.7] {
        let o = order(nu);
        let zeros = zero_table(o, 2000, 1e-15).map_err(|e| e.to_string())?;
        let rec = sigma_table_recurrence(o, 10).map_err(|e| e.to_string())?;
        for m in 1..=10 {
            let z = sigma_by_zero_sum(o, m, &zeros).map_err(|e| e.to_string())?;
            let r = rec.sigma(m);
            let diff = (z.value - r).abs();
            within_bounds &= diff <= z.abs_error + rec.rel_error(m) * r;
            worst = worst.max(diff / r);
        }
        let exact = 1.0 / (4.0 * (nu + 1.0));
        first_exact &= rel(rec.sigma(1), exact) <= f64::EPSILON;
    }
    ensure(
        worst <= 1e-10 && within_bounds && first_exact,
        format!(
            "max relative gap {worst:.2e} (limit 1e-10), within certified bounds: {within_bounds}; first sum exact: {first_exact}"
        ),
    )
}

fn default_reports(cache: &ContextCache, theorems: &[TheoremId]) -> Result<Vec<InequalityReport>, String> {
    let spec = GridSpec::default();
    let mut out = Vec::new();
    for &t in theorems {
        out.extend(check_inequality(t, &spec, cache).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

const PROVEN: [TheoremId; 6] = [TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T5, TheoremId::T6, TheoremId::Tan];

fn theorem_suites(reports: &[InequalityReport], cache: &ContextCache) -> Outcome {
    let mut min_margin = f64::INFINITY;
    let mut all_passed = true;
    for r in reports {
        all_passed &= r.passed;
        min_margin = min_margin
            .min(r.min_lower_margin.unwrap_or(f64::NEG_INFINITY))
            .min(r.min_upper_margin.unwrap_or(f64::NEG_INFINITY));
    }
    let half = cache.get(order(0.5)).map_err(|e| e.to_string())?;
    let minus = cache.get(order(-0.5)).map_err(|e| e.to_string())?;
    let t1 = inequality_at(TheoremId::T1, &half, None, FRAC_PI_2).map_err(|e| e.to_string())?;
    let tan = inequality_at(TheoremId::Tan, &minus, None, FRAC_PI_4).map_err(|e| e.to_string())?;
    // (3/4)^{π²/6}, 2/π, 3/4 and (4/3)^{π²/12}, 4/π, 4/3, evaluated at 30 digits
    let spots = [
        (t1.lower, 0.622994218),
        (t1.middle, 0.636619772),
        (t1.upper, 0.75),
        (tan.lower, 1.266945700),
        (tan.middle, 1.273239545),
        (tan.upper, 1.333333333),
    ];
    let spot_dev = spots.iter().map(|(v, e)| (v - e).abs()).fold(0.0, f64::max);
    ensure(
        all_passed && min_margin >= -1e-12 && spot_dev <= 1e-5,
        format!(
            "{} reports, min log margin {min_margin:.2e} (limit −1e-12); T1 {:.6} ≤ {:.6} ≤ {:.6}, TAN {:.6} ≤ {:.6} ≤ {:.6}, max spot deviation {spot_dev:.1e}",
            reports.len(),
            t1.lower,
            t1.middle,
            t1.upper,
            tan.lower,
            tan.middle,
            tan.upper
        ),
    )
}

fn sharpness(reports: &[InequalityReport]) -> Outcome {
    let mut worst_0 = 0.0f64;
    let mut worst_end = 0.0f64;
    let mut ok = true;
    for r in reports {
        let Some(p) = &r.sharpness else {
            return Err(format!("{} nu={} has no probe: {:?}", r.theorem, r.nu, r.failure));
        };
        ok &= p.within_tolerance();
        if p.tol_0.is_some() {
            worst_0 = worst_0.max(p.residual_0.unwrap_or(f64::INFINITY));
        }
        if p.tol_end.is_some() {
            worst_end = worst_end.max(p.residual_end);
        }
    }
    ensure(
        ok,
        format!("max residual at 0: {worst_0:.2e} (limit 1e-3); at the endpoint: {worst_end:.2e} (limit 1e-2)"),
    )
}

fn monotonicity(cache: &ContextCache) -> Outcome {
    let mut scans = 0;
    let mut bad = Vec::new();
    for nu in DEFAULT_NU_GRID {
        let ctx = cache.get(order(nu)).map_err(|e| e.to_string())?;
        let mut jobs = vec![(QuotientKind::JnormExponent, None), (QuotientKind::JnormNextExponent, None)];
        for r in DEFAULT_R_VALUES {
            jobs.push((QuotientKind::InormExponent, Some(r)));
            jobs.push((QuotientKind::InormRatioExponent, Some(r)));
        }
        for (kind, r) in jobs {
            let s = monotonicity_scan(kind, &ctx, r, 99).map_err(|e| e.to_string())?;
            scans += 1;
            if s.observed != Some(Direction::Decreasing) {
                bad.push(format!("{} nu={nu} r={r:?}", kind.tag()));
            }
        }
    }
    let minus = cache.get(order(-0.5)).map_err(|e| e.to_string())?;
    let psi = monotonicity_scan(QuotientKind::JnormRatioExponent, &minus, None, 99).map_err(|e| e.to_string())?;
    let psi_ok = psi.observed == Some(Direction::Increasing);
    ensure(
        bad.is_empty() && psi_ok,
        format!(
            "{scans} scans strictly decreasing{}; psi at nu=-1/2 increasing: {psi_ok}",
            if bad.is_empty() { String::new() } else { format!(", violations: {}", bad.join(", ")) }
        ),
    )
}

fn eta_machinery() -> Outcome {
    let nt = build_cache(51).map_err(|e| e.to_string())?;
    let o = order(-0.5);
    let j1 = first_zero(o, 1e-15).map_err(|e| e.to_string())?;
    let seq = scaled_sequences(o, 51, &j1).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut increments = true;
    for m in 1..=50 {
        let id = omega_eta_identity_residual(m, &nt, &seq).map_err(|e| e.to_string())?;
        worst = worst.max(id.residual);
        increments &= id.increment_positive;
    }
    let e2 = (nt.eta(1).unwrap() - PI * PI / 12.0).abs();
    let e4 = (nt.eta(2).unwrap() - 7.0 * PI.powi(4) / 720.0).abs();
    ensure(
        worst <= 1e-12 && increments && e2 <= 1e-14 && e4 <= 1e-14,
        format!(
            "max |ω_m − η(2m)| {worst:.2e} (limit 1e-12), increments positive: {increments}; η(2), η(4) errors {e2:.1e}, {e4:.1e}"
        ),
    )
}

/// The sweep itself is evidence only: a non-positive margin is reported as
/// an anomaly without failing. The ν = −1/2, m = 1 record is asserted.
fn conjecture(cache: &ContextCache) -> (Outcome, bool) {
    let nus: Vec<f64> = (0..=59).map(|i| ((-0.9 + 0.1 * i as f64) * 1e12).round() / 1e12).collect();
    let records = match run_conjecture(&nus, 20, cache) {
        Ok(r) => r,
        Err(e) => return (Err(e.to_string()), false),
    };
    let positive = records
        .iter()
        .filter(|r| r.status == ConjectureStatus::Ok && r.margin > 0.0)
        .count();
    let min = records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let first = records.iter().find(|r| r.nu == -0.5 && r.m == 1).unwrap();
    let exact = (first.ratio - 15.0 / 7.0).abs() <= 1e-12 && (first.jsq - PI * PI / 4.0).abs() <= 1e-12;
    let anomaly = positive != records.len();
    let outcome = ensure(
        exact,
        format!(
            "{positive}/{} records with certified positive margin (smallest {min:.2e}); nu=-1/2, m=1 gives ({:.12}, {:.12})",
            records.len(),
            first.ratio,
            first.jsq
        ),
    );
    (outcome, anomaly)
}

fn comparisons(cache: &ContextCache) -> Outcome {
    let mut zhu_points = 0;
    let mut zhu_worst = f64::NEG_INFINITY;
    for nu in DEFAULT_NU_GRID {
        let ctx = cache.get(order(nu)).map_err(|e| e.to_string())?;
        for r in DEFAULT_R_VALUES {
            for x in grid(r, 99) {
                let z = inequality_at(TheoremId::Zhu, &ctx, Some(r), x).map_err(|e| e.to_string())?;
                let t = inequality_at(TheoremId::T5, &ctx, Some(r), x).map_err(|e| e.to_string())?;
                zhu_worst = zhu_worst.max((z.upper - t.upper) / t.upper);
                zhu_points += 1;
            }
        }
    }
    let mut bw1_points = 0;
    let mut bw1_min = f64::INFINITY;
    for nu in BW1_NU_GRID {
        let j1 = cache.get(order(nu)).map_err(|e| e.to_string())?.j1().clone();
        for x in grid(j1.mid, 99) {
            bw1_min = bw1_min.min(bw1_margin(order(nu), x, &j1).map_err(|e| e.to_string())?);
            bw1_points += 1;
        }
    }
    let mut chain_points = 0;
    let mut chain_ok = true;
    for nu in DEFAULT_NU_GRID {
        let j1 = cache.get(order(nu)).map_err(|e| e.to_string())?.j1().clone();
        for x in grid(j1.mid, 99) {
            let c = check_power_chain(order(nu), x, CHAIN_K_MAX, &j1).map_err(|e| e.to_string())?;
            chain_ok &= c.strictly_increasing && c.below_first;
            chain_points += 1;
        }
    }
    ensure(
        zhu_worst <= 1e-12 && bw1_min > 0.0 && chain_ok,
        format!(
            "ZHU ≤ T5 at {zhu_points} points (worst relative excess {zhu_worst:.2e}); bw1 margin > 0 at {bw1_points} points (min {bw1_min:.2e}); chain to k={CHAIN_K_MAX} increasing at {chain_points} points: {chain_ok}"
        ),
    )
}

fn strip_timing(text: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v.to_string()
}

fn determinism() -> Outcome {
    let cli = Cli::try_parse_from(["redheffer", "report", "--no-cache"]).unwrap();
    let config = RunConfig::from_cli(cli).map_err(|e| e.to_string())?;
    let a = render(&run_suite(&config).map_err(|e| e.to_string())?, Format::Json).map_err(|e| e.to_string())?;
    let b = render(&run_suite(&config).map_err(|e| e.to_string())?, Format::Json).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_redheffer"))
        .args(["report", "--no-cache"])
        .output()
        .map_err(|e| e.to_string())?;
    let c = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let same = strip_timing(&a) == strip_timing(&b) && strip_timing(&a) == strip_timing(&c);
    ensure(same, format!("3 full report runs ({} bytes each) identical apart from timing: {same}", a.len()))
}

fn main() -> ExitCode {
    let cache = ContextCache::default();
    let mut failed = 0;
    let mut line = |n: usize, name: &str, outcome: Outcome, exploratory_anomaly: bool| {
        let (tag, detail) = match outcome {
            Ok(d) if exploratory_anomaly => ("PASS (exploratory anomaly)", d),
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {n:>2} {name:<24} {tag}: {detail}");
    };
    let start = std::time::Instant::now();
    line(1, "closed forms", closed_forms(), false);
    line(2, "zeros", zeros(), false);
    line(3, "rayleigh cross-method", rayleigh(), false);
    match default_reports(&cache, &PROVEN) {
        Ok(reports) => {
            line(4, "theorem suites", theorem_suites(&reports, &cache), false);
            line(5, "sharpness", sharpness(&reports), false);
        }
        Err(e) => {
            line(4, "theorem suites", Err(e.clone()), false);
            line(5, "sharpness", Err(e), false);
        }
    }
    line(6, "monotonicity", monotonicity(&cache), false);
    line(7, "eta identity", eta_machinery(), false);
    let (outcome, anomaly) = conjecture(&cache);
    line(8, "conjecture sweep", outcome, anomaly);
    line(9, "comparisons", comparisons(&cache), false);
    line(10, "determinism", determinism(), false);
    println!("acceptance: {} of 10 criteria passed in {:.1} s", 10 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
