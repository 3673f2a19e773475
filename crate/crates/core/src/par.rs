//! Data-parallel helpers. With the `parallel` feature these run on the
//! rayon global pool; without it they fall back to plain iterators. Output
//! order always follows input order.

/// How an index-partitioned workload is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Runs on the rayon pool when the `parallel` feature is enabled;
    /// otherwise identical to `Sequential`.
    #[default]
    Parallel,
}

pub(crate) fn map_range<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

pub(crate) fn map_slice<S, T, F>(items: &[S], exec: Execution, f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

pub(crate) fn sum_range<F>(n: usize, exec: Execution, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).sum()
        }
        _ => (0..n).map(f).sum(),
    }
}
