//! Sequential or data-parallel execution of index-range workloads.
//!
//! Parallel runs use rayon when the `parallel` feature is enabled and fall
//! back to the sequential loop otherwise. Results are identical either way:
//! every combinator here reduces in index order.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Whether this build can actually run in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// `f` applied to every index, in index order.
    pub fn map<T, F>(self, range: Range<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => range.into_par_iter().map(f).collect(),
            _ => range.map(f).collect(),
        }
    }

    /// The `Some` result with the smallest index.
    pub fn find_map_first<T, F>(self, range: Range<usize>, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => range.into_par_iter().find_map_first(f),
            _ => range.into_iter().find_map(f),
        }
    }

    /// Sum of `f` over the range.
    pub fn sum<F>(self, range: Range<usize>, f: F) -> u64
    where
        F: Fn(usize) -> u64 + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => range.into_par_iter().map(f).sum(),
            _ => range.map(f).sum(),
        }
    }

    /// Whether `f` holds for any index.
    pub fn any<F>(self, range: Range<usize>, f: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => range.into_par_iter().any(f),
            _ => range.into_iter().any(f),
        }
    }
}
