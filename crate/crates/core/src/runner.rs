//! Execution strategy for independent Monte Carlo trials.

use alloc::vec::Vec;

/// Runs `n` independent trials `f(0), ..., f(n - 1)` and returns the results
/// in trial order, whatever the execution order was.
pub trait TrialRunner: Sync {
    fn run<T, F>(&self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send;
}

/// Single-threaded runner.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl TrialRunner for Sequential {
    fn run<T, F>(&self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
