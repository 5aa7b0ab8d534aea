//! Switch between rayon and plain iteration.
//!
//! With the `parallel` feature disabled every mode runs sequentially, so the
//! results never depend on the feature set.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        {
            if self == Exec::Parallel && items.len() > 1 {
                return items.par_iter().map(f).collect();
            }
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        {
            if self == Exec::Parallel && n > 1 {
                return (0..n).into_par_iter().map(f).collect();
            }
        }
        (0..n).map(f).collect()
    }
}
