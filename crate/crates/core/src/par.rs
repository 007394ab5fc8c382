//! Data-parallel helpers for grid evaluation.
//!
//! Every grid-shaped computation in the crate funnels through [`map`]. With the
//! `parallel` feature it runs on the rayon pool; without it, or when
//! [`Exec::Sequential`] is requested explicitly, it is a plain ordered map.
//! Results are always returned in input order, so output is identical
//! regardless of the execution mode.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

/// Whether this build can actually run in parallel.
pub const fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}

/// Ordered map over a slice using the default execution mode.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    map_with(Exec::default(), items, f)
}

/// Ordered map over a slice with an explicit execution mode.
pub fn map_with<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Ordered map over `0..n`.
pub fn map_range<U, F>(exec: Exec, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}
