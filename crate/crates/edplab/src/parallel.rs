//! Thread-pool trial runner.

use std::sync::Arc;

use anyhow::{bail, Context};
use edplab_core::runner::TrialRunner;
use rayon::prelude::*;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "EDPLAB_THREADS";

/// Runs trials on a rayon pool. Results come back in trial order, so output
/// does not depend on the thread count.
#[derive(Clone)]
pub struct Parallel {
    pool: Arc<rayon::ThreadPool>,
}

impl Parallel {
    pub fn new(threads: usize) -> anyhow::Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .context("building the worker pool")?;
        Ok(Self {
            pool: Arc::new(pool),
        })
    }

    /// Pool sized by `EDPLAB_THREADS`, defaulting to the logical core count.
    pub fn from_env() -> anyhow::Result<Self> {
        Self::new(threads_from_env()?)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

/// Worker count from `EDPLAB_THREADS`, or the number of logical cores.
pub fn threads_from_env() -> anyhow::Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => bail!("{THREADS_ENV} must be a positive integer, got {v:?}"),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

impl TrialRunner for Parallel {
    fn run<T, F>(&self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(&f).collect())
    }
}
