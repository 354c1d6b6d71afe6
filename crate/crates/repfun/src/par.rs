//! Thin dispatch layer between the rayon-backed build and the sequential one.
//!
//! Everything the library parallelizes is a pure map-reduce over an index
//! range, so a single helper suffices. With the `parallel` feature (default)
//! the work is spread over the rayon pool; without it the same closure runs on
//! a plain iterator, which keeps `--no-default-features` builds dependency-free
//! and makes the two modes directly comparable in the bench suite.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Collects `f(i)` for `i` in `0..n`, in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// True when this build dispatches onto the rayon pool.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
