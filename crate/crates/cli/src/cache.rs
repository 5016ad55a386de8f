//! On-disk zero-table cache, keyed by `(ν rounded to 12 decimals, N, tol)`.

use std::fs;
use std::path::{Path, PathBuf};

use redheffer_core::inequality::ContextCache;
use redheffer_core::zeros::zero_table;
use redheffer_core::{Order, Result, ZeroTable};

pub fn cache_file(dir: &Path, nu: f64, count: usize, tol: f64) -> PathBuf {
    dir.join(format!("zeros_nu{nu:.12}_n{count}_tol{tol:e}.json"))
}

/// A cached table is used only if it matches the request exactly; anything
/// else (missing, unreadable, stale, another order that rounds the same) is
/// rebuilt and overwritten.
fn load(path: &Path, order: Order, count: usize, tol: f64) -> Option<ZeroTable> {
    let text = fs::read_to_string(path).ok()?;
    let table = ZeroTable::from_json(&text).ok()?;
    (table.order().nu() == order.nu() && table.len() == count && table.tol() == tol).then_some(table)
}

fn store(path: &Path, table: &ZeroTable) {
    // Write-then-rename keeps concurrent readers from seeing a partial file.
    // Failures only cost a rebuild next time.
    let Some(dir) = path.parent() else { return };
    if fs::create_dir_all(dir).is_err() {
        return;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    if fs::write(&tmp, table.to_json()).is_ok() && fs::rename(&tmp, path).is_err() {
        let _ = fs::remove_file(&tmp);
    }
}

pub fn cached_zero_table(dir: &Path, order: Order, count: usize, tol: f64) -> Result<ZeroTable> {
    let path = cache_file(dir, order.nu(), count, tol);
    if let Some(t) = load(&path, order, count, tol) {
        return Ok(t);
    }
    let table = zero_table(order, count, tol)?;
    store(&path, &table);
    Ok(table)
}

pub fn context_cache(dir: Option<&Path>, count: usize, tol: f64) -> ContextCache {
    match dir {
        Some(dir) => {
            let dir = dir.to_path_buf();
            ContextCache::with_builder(count, tol, move |order, n, t| cached_zero_table(&dir, order, n, t))
        }
        None => ContextCache::new(count, tol),
    }
}
