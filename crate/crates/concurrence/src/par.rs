//! Data-parallel helper for independent trial batches.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, collecting results in index order.
///
/// With the `parallel` feature enabled and `parallel == true` the map
/// runs on the rayon pool; the output is identical either way because
/// results are collected by index, never by completion order.
pub(crate) fn map_indexed<T, F>(n: u64, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().map(f).collect();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    (0..n).map(f).collect()
}
