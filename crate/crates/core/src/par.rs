//! Execution strategy for the exhaustive loops.
//!
//! Every hot loop in the crate (coalition scans, convexity pair scans,
//! per-graph agreement runs) goes through the helpers here. With the
//! `parallel` feature they run on the rayon pool; without it, or when the
//! caller asks for [`Strategy::Sequential`], they run on the calling thread.
//! Results are always returned in input order, so output never depends on
//! the strategy.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    /// Falls back to sequential execution when built without `parallel`.
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

pub(crate) fn map_range<R, F>(strategy: Strategy, range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = strategy;
    range.map(f).collect()
}

pub(crate) fn map_slice<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// First (lowest index) element of `range` for which `f` yields `Some`.
pub(crate) fn find_first<R, F>(strategy: Strategy, range: Range<u64>, f: F) -> Option<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return range.into_par_iter().find_map_first(f);
    }
    let _ = strategy;
    range.into_iter().find_map(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_on_order() {
        let seq = map_range(Strategy::Sequential, 0..1000, |x| x * x);
        let par = map_range(Strategy::Parallel, 0..1000, |x| x * x);
        assert_eq!(seq, par);
        let first = |x: u64| (x % 97 == 96 && x > 100).then_some(x);
        assert_eq!(
            find_first(Strategy::Sequential, 0..1000, first),
            find_first(Strategy::Parallel, 0..1000, first)
        );
    }
}
