//! Data-parallel helpers. With the `parallel` feature the loops run on the
//! current rayon pool; without it, or inside [`sequential`], they run on the
//! calling thread. Results are always merged in input order, so both paths
//! produce identical output.

use std::cell::Cell;
use std::ops::Range;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with every helper in this module forced onto the calling thread.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let prev = FORCE_SEQUENTIAL.with(|c| c.replace(true));
    let out = f();
    FORCE_SEQUENTIAL.with(|c| c.set(prev));
    out
}

/// Whether helpers called from this thread will fan out.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(Cell::get)
}

/// `range.map(f).collect()`, order preserved.
pub fn map_range<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    range.map(f).collect()
}

/// `items.iter().map(f).collect()`, order preserved.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Folds contiguous chunks of `range` into accumulators and merges them left
/// to right. `merge` must be associative for the two paths to agree.
pub fn fold_range<A, I, F, M>(range: Range<u64>, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, u64) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        let len = range.end.saturating_sub(range.start);
        let chunks = (rayon::current_num_threads() as u64 * 4).clamp(1, len.max(1));
        let step = len.div_ceil(chunks).max(1);
        let parts: Vec<A> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = range.start + c * step;
                let hi = (lo + step).min(range.end);
                (lo..hi).fold(init(), &fold)
            })
            .collect();
        return parts.into_iter().fold(init(), &merge);
    }
    let acc = range.fold(init(), &fold);
    merge(init(), acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let f = |x: u64| x * x % 97;
        let par = map_range(0..10_000, f);
        let seq = sequential(|| map_range(0..10_000, f));
        assert_eq!(par, seq);
        let sum = |r: Range<u64>| fold_range(r, || 0u64, |a, x| a + f(x), |a, b| a + b);
        assert_eq!(sum(0..10_000), sequential(|| sum(0..10_000)));
        assert_eq!(sum(5..5), 0);
        assert!(!sequential(is_parallel));
    }
}
