//! Data-parallel map helpers.
//!
//! With the `parallel` feature the maps run on rayon's pool; without it they
//! are ordinary sequential iterators. Results always come back in input order,
//! so every reduction downstream is deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "NBVSLAB_THREADS";

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_range<R, F>(range: std::ops::Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    range.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R, F>(range: std::ops::Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    range.map(f).collect()
}

/// Run `op` with all parallel maps forced onto a single thread.
#[cfg(feature = "parallel")]
pub fn sequential<R: Send>(op: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(1).build() {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn sequential<R: Send>(op: impl FnOnce() -> R + Send) -> R {
    op()
}

/// Size the global pool from `NBVSLAB_THREADS` if it is set to a positive
/// integer. Returns the thread count that ended up configured, if any.
pub fn init_from_env() -> Option<usize> {
    let n = std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok()?;
    if n == 0 {
        return None;
    }
    #[cfg(feature = "parallel")]
    {
        // a second call finds the pool already built; that is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Some(n)
}

pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let xs: Vec<usize> = (0..1000).collect();
        let ys = map(&xs, |x| x * 2);
        assert!(ys.iter().enumerate().all(|(i, y)| *y == 2 * i));
        let zs = sequential(|| map_range(0..1000, |i| i * 2));
        assert_eq!(ys, zs);
    }
}
