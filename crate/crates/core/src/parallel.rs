//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature these dispatch to rayon; without it they are
//! ordinary iterator chains. Results are always returned in input order, so
//! callers observe identical output either way.

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Always-sequential counterpart of [`map`], kept for benchmarking and for
/// callers that must not touch the global thread pool.
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Maps `f` over `0..n` and folds the results with `max` (NaN-free inputs).
pub fn max_over_range<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n)
            .into_par_iter()
            .map(f)
            .reduce(|| f64::NEG_INFINITY, f64::max)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Whether this build dispatches to rayon.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
