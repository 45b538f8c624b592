//! Order-preserving map over a slice: rayon when the `parallel` feature is
//! on, a plain iterator otherwise. Results come back in input order either
//! way, so callers see identical output in both builds.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// True when this build fans work out over rayon's pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
