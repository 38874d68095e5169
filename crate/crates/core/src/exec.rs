//! Execution policy for the embarrassingly parallel loops in this crate.
//!
//! Every parallel loop goes through [`map_indexed`], which returns results in
//! input order. Work items never share floating-point accumulators, so the
//! output is bit-identical whichever policy runs it. Without the `parallel`
//! feature, [`Exec::Parallel`] silently degrades to the sequential loop.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Use the ambient rayon pool (see `rayon::ThreadPool::install`).
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Map `f` over `0..len`, collecting in index order.
pub fn map_indexed<R, F>(len: usize, exec: Exec, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Like [`map_indexed`] over a slice.
pub fn map_slice<T, R, F>(items: &[T], exec: Exec, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_indexed(items.len(), exec, |i| f(&items[i]))
}

/// Fallible map; the first error by index wins, not the first to finish.
pub fn try_map_slice<T, R, E, F>(items: &[T], exec: Exec, f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map_slice(items, exec, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let seq = map_indexed(1000, Exec::Sequential, |i| i * i);
        let par = map_indexed(1000, Exec::Parallel, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 999 * 999);
    }

    #[test]
    fn first_error_by_index() {
        let items: Vec<usize> = (0..100).collect();
        let r: Result<Vec<usize>, usize> = try_map_slice(&items, Exec::Parallel, |&i| {
            if i % 30 == 29 {
                Err(i)
            } else {
                Ok(i)
            }
        });
        assert_eq!(r, Err(29));
    }
}
