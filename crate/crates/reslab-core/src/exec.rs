//! Executors for data-parallel node evaluation.
//!
//! Quadrature routines evaluate their nodes through an [`Executor`] and then
//! reduce the returned vector sequentially in index order. An executor may run
//! the closure on any number of threads, but it must return the values in
//! index order; under that contract results do not depend on the executor.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Result;

/// Node-evaluation closure accepted by an [`Executor`].
pub type NodeFn<'a> = dyn Fn(usize) -> Result<Complex64> + Sync + 'a;

/// Evaluates `f(0), …, f(len-1)` and returns the values in index order.
pub trait Executor: Sync {
    /// Map `f` over `0..len`; the first error (in index order) is returned.
    fn map(&self, len: usize, f: &NodeFn<'_>) -> Result<Vec<Complex64>>;
}

/// Single-threaded executor.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sequential;

impl Executor for Sequential {
    fn map(&self, len: usize, f: &NodeFn<'_>) -> Result<Vec<Complex64>> {
        (0..len).map(f).collect()
    }
}

/// Sum a slice of complex values in index order (the canonical reduction).
pub fn ordered_sum(values: &[Complex64]) -> Complex64 {
    values.iter().fold(Complex64::new(0.0, 0.0), |acc, v| acc + v)
}
