//! Data-parallel trial execution with a sequential fallback.
//!
//! Every trial owns its random streams (see [`crate::rng`]), so the
//! parallel and sequential paths produce identical results; only wall-clock
//! time differs. The `parallel` feature (default) routes the work through
//! rayon, `--no-default-features` compiles the sequential path only. The
//! `_seq` variants are always available so benchmarks can compare both.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Counts the trials in `0..trials` for which `is_error` returns true.
#[cfg(feature = "parallel")]
pub fn count_over_trials<F>(trials: u64, is_error: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    (0..trials).into_par_iter().filter(|&t| is_error(t)).count() as u64
}

#[cfg(not(feature = "parallel"))]
pub fn count_over_trials<F>(trials: u64, is_error: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    count_over_trials_seq(trials, is_error)
}

/// Sequential reference implementation of [`count_over_trials`].
pub fn count_over_trials_seq<F>(trials: u64, is_error: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    (0..trials).filter(|&t| is_error(t)).count() as u64
}

/// Maps `f` over `0..n`, preserving index order in the output.
#[cfg(feature = "parallel")]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Runs `f` inside a worker pool of the requested size; `None` uses the
/// default pool. Without the `parallel` feature the worker count is
/// irrelevant and `f` simply runs.
#[cfg(feature = "parallel")]
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        None => f(),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .expect("worker pool")
            .install(f),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<R: Send>(_workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_counts_agree() {
        let f = |t: u64| (t * t) % 7 == 1;
        assert_eq!(count_over_trials(10_000, f), count_over_trials_seq(10_000, f));
    }

    #[test]
    fn map_collect_preserves_order() {
        let v = map_collect(1000, |i| i * 3);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * 3));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let run = |workers| with_workers(workers, || count_over_trials(5000, |t| t % 13 == 0));
        assert_eq!(run(Some(1)), run(Some(4)));
        assert_eq!(run(None), run(Some(2)));
    }
}
