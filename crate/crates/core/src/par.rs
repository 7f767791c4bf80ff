//! Data-parallel execution with a sequential fallback.
//!
//! Every combinator returns results in input order, so callers get the same
//! output for any worker count. Without the `parallel` feature all work runs
//! on the calling thread.

use std::fmt;
#[cfg(feature = "parallel")]
use std::sync::Arc;

/// Environment variable consulted when no explicit worker count is given.
pub const WORKERS_ENV: &str = "ARCMUB_WORKERS";

#[derive(Clone)]
pub struct Exec {
    workers: usize,
    #[cfg(feature = "parallel")]
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl fmt::Debug for Exec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Exec").field("workers", &self.workers).finish()
    }
}

impl Default for Exec {
    fn default() -> Self {
        Exec::sequential()
    }
}

impl Exec {
    pub fn sequential() -> Exec {
        Exec {
            workers: 1,
            #[cfg(feature = "parallel")]
            pool: None,
        }
    }

    /// `workers == 0` picks the available parallelism.
    pub fn new(workers: usize) -> Exec {
        let workers =
            if workers == 0 { std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1) } else { workers };
        if workers <= 1 {
            return Exec::sequential();
        }
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().ok().map(Arc::new);
            Exec { workers, pool }
        }
        #[cfg(not(feature = "parallel"))]
        {
            Exec { workers }
        }
    }

    /// Explicit count if given, else `ARCMUB_WORKERS`, else 1.
    pub fn from_env(explicit: Option<usize>) -> Exec {
        let n = explicit.or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|s| s.trim().parse().ok())).unwrap_or(1);
        Exec::new(n)
    }

    /// Requested worker count (recorded in artifacts).
    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self.pool.is_some()
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }

    pub fn map_range<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| (0..n).into_par_iter().map(&f).collect());
        }
        (0..n).map(f).collect()
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.map_range(items.len(), |i| f(&items[i]))
    }

    /// The least index `i < n` with `f(i)` present, together with its value.
    pub fn find_first<R, F>(&self, n: usize, f: F) -> Option<(usize, R)>
    where
        R: Send,
        F: Fn(usize) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| (0..n).into_par_iter().find_map_first(|i| f(i).map(|r| (i, r))));
        }
        (0..n).find_map(|i| f(i).map(|r| (i, r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for w in [1, 2, 4] {
            let e = Exec::new(w);
            let v = e.map_range(100, |i| i * i);
            assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
            let first = e.find_first(100, |i| (i % 17 == 16).then_some(i * 2));
            assert_eq!(first, Some((16, 32)));
        }
    }

    #[test]
    fn zero_means_available() {
        assert!(Exec::new(0).workers() >= 1);
        assert_eq!(Exec::sequential().workers(), 1);
    }
}
