//! Sequential / data-parallel evaluation of independent points.
//!
//! With the `parallel` feature disabled, [`Execution::Parallel`] silently
//! runs sequentially. Output order always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Smallest run of points handed to one rayon task.
#[cfg(feature = "parallel")]
const MIN_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run points concurrently.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Applies `f` to every item; output order matches input order.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items.par_iter().with_min_len(MIN_CHUNK).map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<U, F>(self, count: usize, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return (0..count).into_par_iter().with_min_len(MIN_CHUNK).map(f).collect();
        }
        (0..count).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..10_000).collect();
        for exec in [Execution::Sequential, Execution::Parallel] {
            let ys = exec.map(&xs, |x| x * 3);
            assert!(ys.iter().enumerate().all(|(i, y)| *y == 3 * i as u64));
            let zs = exec.map_range(xs.len(), |i| i);
            assert_eq!(zs, (0..10_000).collect::<Vec<_>>());
        }
    }
}
