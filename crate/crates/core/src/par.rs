//! Thin switch between rayon and sequential execution.
//!
//! Every helper returns results in input order, so reductions performed by the
//! caller afterwards are independent of the thread count.

#[cfg(feature = "parallel")]
pub(crate) fn map_range<T, F>(start: usize, end: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (start..end).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<T, F>(start: usize, end: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (start..end).map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    F: Fn(&S) -> T,
{
    items.iter().map(f).collect()
}
