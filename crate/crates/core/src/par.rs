//! Data-parallel helpers with a sequential fallback when the `parallel`
//! feature is off. Element-wise maps give bitwise-identical output either way.

/// Below this length the parallel path is not worth the scheduling overhead.
pub const PAR_THRESHOLD: usize = 4096;

#[cfg(feature = "parallel")]
pub fn map_indexed<T, U, F>(src: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    if src.len() < PAR_THRESHOLD {
        return src.iter().enumerate().map(|(i, x)| f(i, x)).collect();
    }
    src.par_iter().enumerate().map(|(i, x)| f(i, x)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, U, F>(src: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync + Send,
{
    src.iter().enumerate().map(|(i, x)| f(i, x)).collect()
}

/// Whether the crate was built with rayon support.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
