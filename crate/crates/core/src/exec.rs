//! Data-parallel execution with a sequential fallback.
//!
//! Work is always split into the same chunks and reduced in index order, so
//! results are identical for either mode and for any thread count.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled; otherwise identical
    /// to `Sequential`.
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
    /// Maps `f` over `items`, returning results in input order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Maps `f` over the indices of `range`, returning results in index order.
    pub fn map_range<R, F>(self, range: Range<usize>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(f).collect()
            }
            _ => range.map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_preserve_order() {
        let items: Vec<u64> = (0..1000).collect();
        let a = Execution::Sequential.map(&items, |x| x * x);
        let b = Execution::Parallel.map(&items, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(
            Execution::Parallel.map_range(0..37, |i| i + 1),
            (1..38).collect::<Vec<_>>()
        );
    }
}
