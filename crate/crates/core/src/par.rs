//! Data-parallel loops with a sequential fallback.
//!
//! Every reduction here is order-fixed: values are produced (possibly in
//! parallel) into an index-ordered buffer and then summed sequentially with
//! Neumaier compensation, so results are bit-identical regardless of thread
//! count or whether the `parallel` feature is enabled.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Below this many items the loop always runs sequentially.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: usize = 32;

/// Enables or disables parallel execution at runtime.
///
/// Without the `parallel` feature this is a no-op and everything runs sequentially.
pub fn set_parallel(enabled: bool) {
    PARALLEL.store(enabled, Ordering::Relaxed);
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::Relaxed)
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of a slice in index order.
pub fn sum_slice(values: &[f64]) -> f64 {
    values.iter().copied().collect::<CompensatedSum>().value()
}

/// Evaluates `f(0..len)` into an index-ordered vector.
pub fn map_collect<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if len >= MIN_PARALLEL_LEN && is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    (0..len).map(f).collect()
}

/// `Σ f(i)` with a deterministic compensated reduction.
pub fn sum_by<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    sum_slice(&map_collect(len, f))
}

/// `max f(i)`; NaN values propagate. Returns `-inf` for an empty range.
pub fn max_by<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let fold = |acc: f64, x: f64| if x.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(x) };
    #[cfg(feature = "parallel")]
    if len >= MIN_PARALLEL_LEN && is_parallel() {
        use rayon::prelude::*;
        return (0..len)
            .into_par_iter()
            .map(f)
            .reduce(|| f64::NEG_INFINITY, fold);
    }
    (0..len).map(f).fold(f64::NEG_INFINITY, fold)
}

/// `true` if `pred(i)` holds for some `i`; may stop early.
pub fn any<F>(len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if len >= MIN_PARALLEL_LEN && is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().any(pred);
    }
    (0..len).any(pred)
}
