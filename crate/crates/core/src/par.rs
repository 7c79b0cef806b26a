// SPDX-License-Identifier: MIT OR Apache-2.0

//! Data-parallel helpers with a sequential fallback.
//!
//! Every parallel map collects into index order before any reduction, so
//! results are bitwise identical across thread counts and between the
//! two execution modes.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon-backed when the `parallel` feature is enabled, sequential otherwise.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `range.map(f).collect()`, in index order.
pub fn map_range<T, F>(exec: Execution, range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// `items.iter().map(f).collect()`, in index order.
pub fn map_slice<'a, A, T, F>(exec: Execution, items: &'a [A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&'a A) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}
