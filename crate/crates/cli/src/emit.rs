//! Bit-stable serialization. JSON keys come out sorted because
//! `serde_json::Value` maps are ordered; floats use the shortest
//! round-trip decimal. NaN and infinities become `null` in JSON and empty
//! fields in CSV.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::config::{Format, SubcommandKind};
use crate::run::ReportBundle;

pub const CONJECTURE_HEADER: [&str; 6] = ["nu", "m", "ratio", "jsq", "margin", "status"];
pub const CHECK_HEADER: [&str; 10] = [
    "theorem",
    "nu",
    "r",
    "min_lower_margin",
    "min_upper_margin",
    "comparison_margin",
    "sharpness_residual_0",
    "sharpness_residual_end",
    "passed",
    "status",
];
pub const EVAL_HEADER: [&str; 7] = ["function", "nu", "r", "x", "value", "abs_error", "error"];
pub const ZEROS_HEADER: [&str; 5] = ["nu", "n", "lo", "mid", "hi"];
pub const RAYLEIGH_HEADER: [&str; 9] = [
    "nu",
    "m",
    "sigma",
    "rel_error",
    "zero_sum",
    "zero_sum_abs_error",
    "alpha",
    "beta",
    "omega",
];

pub fn to_json(bundle: &ReportBundle) -> serde_json::Result<String> {
    let value = serde_json::to_value(bundle)?;
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}

/// Same spelling as the JSON output.
fn num(v: f64) -> String {
    if v.is_finite() {
        serde_json::Number::from_f64(v).map(|n| n.to_string()).unwrap_or_default()
    } else {
        String::new()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn to_csv(bundle: &ReportBundle) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match bundle.config.subcommand {
        SubcommandKind::Conjecture => {
            w.write_record(CONJECTURE_HEADER)?;
            for c in &bundle.conjecture {
                w.write_record([num(c.nu), c.m.to_string(), num(c.ratio), num(c.jsq), num(c.margin), c.status.as_str().into()])?;
            }
        }
        SubcommandKind::Check | SubcommandKind::Report => {
            w.write_record(CHECK_HEADER)?;
            for r in &bundle.inequality {
                let status = serde_json::to_value(r.status).ok();
                w.write_record([
                    r.theorem.as_str().to_owned(),
                    num(r.nu),
                    opt(r.r),
                    opt(r.min_lower_margin),
                    opt(r.min_upper_margin),
                    opt(r.comparison_margin),
                    opt(r.sharpness_residual_0),
                    opt(r.sharpness_residual_end),
                    r.passed.to_string(),
                    status.as_ref().and_then(|v| v.as_str()).unwrap_or_default().to_owned(),
                ])?;
            }
        }
        SubcommandKind::Eval => {
            w.write_record(EVAL_HEADER)?;
            for e in &bundle.evaluations {
                w.write_record([
                    e.function.to_owned(),
                    opt(e.nu),
                    opt(e.r),
                    num(e.x),
                    opt(e.value),
                    opt(e.abs_error),
                    e.error.clone().unwrap_or_default(),
                ])?;
            }
        }
        SubcommandKind::Zeros => {
            w.write_record(ZEROS_HEADER)?;
            for t in &bundle.zero_tables {
                for z in &t.zeros {
                    w.write_record([num(t.nu), z.n.to_string(), num(z.lo), num(z.mid), num(z.hi)])?;
                }
            }
        }
        SubcommandKind::Rayleigh => {
            w.write_record(RAYLEIGH_HEADER)?;
            for t in &bundle.rayleigh {
                for row in &t.rows {
                    let seq = |f: fn(&redheffer_core::rayleigh::SequenceTable, usize) -> f64| {
                        t.sequences.as_ref().map(|s| f(s, row.m))
                    };
                    w.write_record([
                        num(t.nu),
                        row.m.to_string(),
                        num(row.sigma),
                        num(row.rel_error),
                        opt(row.zero_sum),
                        opt(row.zero_sum_abs_error),
                        opt(seq(|s, m| s.alpha(m))),
                        opt(seq(|s, m| s.beta(m))),
                        opt(seq(|s, m| s.omega(m))),
                    ])?;
                }
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render(bundle: &ReportBundle, format: Format) -> io::Result<String> {
    match format {
        Format::Json => to_json(bundle).map_err(io::Error::other),
        Format::Csv => to_csv(bundle).map_err(io::Error::other),
    }
}

/// Writes to `path`, or stdout when absent.
pub fn emit(bundle: &ReportBundle, format: Format, path: Option<&Path>) -> io::Result<()> {
    let text = render(bundle, format)?;
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)
        }
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}
