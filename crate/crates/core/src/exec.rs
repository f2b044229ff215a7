//! Sequential or data-parallel execution of independent work items.
//!
//! Results are always returned in input order, so output never depends on
//! the strategy. Without the `parallel` feature [`Exec::Parallel`] runs
//! sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `items`, keeping input order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.into_par_iter().map(f).collect(),
            _ => items.into_iter().map(f).collect(),
        }
    }

    /// Maps `f` over `lo..=hi`.
    pub fn map_range<R, F>(self, lo: u64, hi: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
    {
        if lo > hi {
            return Vec::new();
        }
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (lo..=hi).into_par_iter().map(f).collect(),
            _ => (lo..=hi).map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let seq = Exec::Sequential.map_range(1, 1000, |x| x * x % 97);
        let par = Exec::Parallel.map_range(1, 1000, |x| x * x % 97);
        assert_eq!(seq, par);
        assert!(Exec::Parallel.map_range(5, 4, |x| x).is_empty());
        assert_eq!(Exec::Parallel.map(vec![3, 1, 2], |x| x + 1), vec![4, 2, 3]);
    }
}
