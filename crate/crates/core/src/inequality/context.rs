use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::series::{
    eval_inorm, eval_jnorm, eval_jnorm_with_zeros, normalized_series, Order, SeriesValue,
    DEFAULT_TOL,
};
use crate::zeros::{zero_table, CertifiedZero, ZeroTable, DEFAULT_ZERO_COUNT, ENGINE_ZERO_TOL};

/// Everything the engine needs for one order: its zero table and evaluators
/// for `𝒥_{ν+k}`, `𝓘_{ν+k}` and their logarithms.
#[derive(Clone, Debug)]
pub struct OrderContext {
    order: Order,
    zeros: ZeroTable,
    tol: f64,
}

impl OrderContext {
    pub fn new(zeros: ZeroTable) -> Self {
        OrderContext {
            order: zeros.order(),
            zeros,
            tol: DEFAULT_TOL,
        }
    }

    pub fn build(order: Order, zero_count: usize, zero_tol: f64) -> Result<Self> {
        Ok(Self::new(zero_table(order, zero_count, zero_tol)?))
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn nu(&self) -> f64 {
        self.order.nu()
    }

    pub fn zeros(&self) -> &ZeroTable {
        &self.zeros
    }

    pub fn j1(&self) -> &CertifiedZero {
        self.zeros.first()
    }

    /// `𝒥_{ν+shift}(x)`; the unshifted order uses product deflation near its
    /// first zero.
    pub fn jnorm(&self, shift: u32, x: f64) -> Result<SeriesValue> {
        if shift == 0 {
            eval_jnorm_with_zeros(&self.zeros, x, self.tol)
        } else {
            eval_jnorm(self.order.shifted(shift), x, self.tol)
        }
    }

    /// `𝓘_{ν+shift}(x)`; the tolerance is relative since `𝓘 >= 1` grows
    /// exponentially.
    pub fn inorm(&self, shift: u32, x: f64) -> Result<SeriesValue> {
        let v = eval_inorm(self.order.shifted(shift), x, f64::MAX)?;
        if v.abs_error > self.tol * v.value {
            return Err(Error::ToleranceUnreachable {
                achieved: v.abs_error / v.value,
                requested: self.tol,
            });
        }
        Ok(v)
    }

    /// `log 𝒥_{ν+shift}(x)`, accurate relative to its own size for small x.
    pub fn log_jnorm(&self, shift: u32, x: f64) -> Result<f64> {
        let order = self.order.shifted(shift);
        if shift == 0 && x.abs() > crate::series::DEFLATION_THRESHOLD * self.j1().mid {
            let v = self.jnorm(0, x)?;
            return positive_log(v.value, x);
        }
        let raw = normalized_series(order.nu(), x, true)?;
        let m1 = raw.minus_one.to_f64();
        if m1 <= -1.0 {
            return Err(Error::OutOfDomain {
                x,
                limit: self.j1().lo,
            });
        }
        Ok(m1.ln_1p())
    }

    pub fn log_inorm(&self, shift: u32, x: f64) -> Result<f64> {
        let raw = normalized_series(self.order.shifted(shift).nu(), x, false)?;
        Ok(raw.minus_one.to_f64().ln_1p())
    }

    /// `𝒥_{ν+shift+1}(x) / 𝒥_{ν+shift}(x)`.
    pub fn jnorm_ratio(&self, shift: u32, x: f64) -> Result<f64> {
        let den = self.jnorm(shift, x)?.value;
        if den <= 0.0 {
            return Err(Error::NearPole { x });
        }
        Ok(self.jnorm(shift + 1, x)?.value / den)
    }

    /// `𝓘_{ν+shift+1}(x) / 𝓘_{ν+shift}(x)`.
    pub fn inorm_ratio(&self, shift: u32, x: f64) -> Result<f64> {
        Ok(self.inorm(shift + 1, x)?.value / self.inorm(shift, x)?.value)
    }
}

fn positive_log(v: f64, x: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v.ln())
    } else {
        Err(Error::NearPole { x })
    }
}

type Builder = dyn Fn(Order, usize, f64) -> Result<ZeroTable> + Send + Sync;

/// Memoizes [`OrderContext`]s by order. The zero-table builder is pluggable
/// so callers can add a persistent cache.
pub struct ContextCache {
    zero_count: usize,
    zero_tol: f64,
    builder: Box<Builder>,
    map: Mutex<BTreeMap<u64, Arc<OrderContext>>>,
}

impl Default for ContextCache {
    fn default() -> Self {
        Self::new(DEFAULT_ZERO_COUNT, ENGINE_ZERO_TOL)
    }
}

impl ContextCache {
    pub fn new(zero_count: usize, zero_tol: f64) -> Self {
        Self::with_builder(zero_count, zero_tol, zero_table)
    }

    pub fn with_builder<F>(zero_count: usize, zero_tol: f64, builder: F) -> Self
    where
        F: Fn(Order, usize, f64) -> Result<ZeroTable> + Send + Sync + 'static,
    {
        ContextCache {
            zero_count,
            zero_tol,
            builder: Box::new(builder),
            map: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    pub fn get(&self, order: Order) -> Result<Arc<OrderContext>> {
        let key = order.nu().to_bits();
        if let Some(ctx) = self.map.lock().expect("context cache lock").get(&key) {
            return Ok(Arc::clone(ctx));
        }
        // Built outside the lock; a concurrent duplicate build is harmless
        // because construction is deterministic.
        let table = (self.builder)(order, self.zero_count, self.zero_tol)?;
        if table.order().nu() != order.nu() {
            return Err(Error::OrderMismatch {
                expected: order.nu(),
                found: table.order().nu(),
            });
        }
        let ctx = Arc::new(OrderContext::new(table));
        let mut map = self.map.lock().expect("context cache lock");
        Ok(Arc::clone(map.entry(key).or_insert(ctx)))
    }
}
