//! Parallel/sequential execution switch.
//!
//! Everything routed through here is an order-preserving map, so the chosen
//! strategy never changes results, only wall time.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `f` over `items`, returning results in input order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Maps then folds with an associative `merge`.
    pub fn map_reduce<T, R, F, M>(self, items: &[T], identity: R, f: F, merge: M) -> R
    where
        T: Sync,
        R: Send + Clone + Sync,
        F: Fn(&T) -> R + Sync + Send,
        M: Fn(R, R) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items
                .par_iter()
                .map(f)
                .reduce(|| identity.clone(), &merge);
        }
        items.iter().map(f).fold(identity, merge)
    }
}
