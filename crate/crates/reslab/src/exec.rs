//! Rayon-backed executor.
//!
//! Nodes are evaluated on a dedicated pool and collected in index order, so
//! every reduction in the core sees the same sequence of values whatever the
//! worker count.

use std::env;
use std::num::NonZeroUsize;
use std::thread;

use num_complex::Complex64;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use reslab_core::exec::{Executor, NodeFn};

use crate::error::{AppError, Result};

/// Environment variable holding the worker count.
pub const THREADS_VAR: &str = "RESLAB_THREADS";

/// Data-parallel executor on a private rayon pool.
pub struct ParallelExecutor {
    pool: ThreadPool,
}

impl ParallelExecutor {
    /// Executor with exactly `threads` workers.
    pub fn new(threads: NonZeroUsize) -> Result<Self> {
        let pool = ThreadPoolBuilder::new().num_threads(threads.get()).build()?;
        Ok(ParallelExecutor { pool })
    }

    /// Executor sized by [`threads_from_env`].
    pub fn from_env() -> Result<Self> {
        ParallelExecutor::new(threads_from_env()?)
    }

    /// Number of workers.
    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl std::fmt::Debug for ParallelExecutor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParallelExecutor").field("threads", &self.threads()).finish()
    }
}

impl Executor for ParallelExecutor {
    fn map(&self, len: usize, f: &NodeFn<'_>) -> reslab_core::Result<Vec<Complex64>> {
        // Collect every outcome first so that the error reported is the first
        // one in index order, not the first one a worker happened to hit.
        let outcomes: Vec<reslab_core::Result<Complex64>> =
            self.pool.install(|| (0..len).into_par_iter().map(f).collect());
        outcomes.into_iter().collect()
    }
}

/// Worker count: `RESLAB_THREADS` if set, otherwise the available parallelism.
pub fn threads_from_env() -> Result<NonZeroUsize> {
    match env::var(THREADS_VAR) {
        Ok(raw) => raw
            .trim()
            .parse::<NonZeroUsize>()
            .map_err(|_| AppError::Config(format!("{THREADS_VAR} must be a positive integer, got {raw:?}"))),
        Err(env::VarError::NotPresent) => Ok(thread::available_parallelism().unwrap_or(NonZeroUsize::MIN)),
        Err(env::VarError::NotUnicode(_)) => Err(AppError::Config(format!("{THREADS_VAR} is not valid unicode"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use reslab_core::exec::Sequential;
    use reslab_core::CoreError;

    #[test]
    fn parallel_map_preserves_order_and_first_error() {
        let exec = ParallelExecutor::new(NonZeroUsize::new(4).unwrap()).unwrap();
        let f = |i: usize| Ok(Complex64::new(i as f64, -(i as f64)));
        assert_eq!(exec.map(1000, &f).unwrap(), Sequential.map(1000, &f).unwrap());
        let failing = |i: usize| {
            if i % 7 == 3 {
                Err(CoreError::Domain(if i == 3 { "first" } else { "later" }))
            } else {
                Ok(Complex64::new(0.0, 0.0))
            }
        };
        assert_eq!(exec.map(100, &failing), Err(CoreError::Domain("first")));
    }
}
