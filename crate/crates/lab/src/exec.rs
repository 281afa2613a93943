//! Thread pool plumbing. Every parallel map collects in index order, so the
//! thread count never changes a result.

use anyhow::Context;
use fracpow_core::verifier::{run_trials, SearchConfig, SearchReport};
use rayon::prelude::*;

pub struct Exec {
    pool: Option<rayon::ThreadPool>,
    threads: usize,
}

impl Exec {
    pub fn new(threads: usize) -> anyhow::Result<Self> {
        anyhow::ensure!(threads >= 1, "--threads must be at least 1");
        let pool = if threads == 1 {
            None
        } else {
            Some(rayon::ThreadPoolBuilder::new().num_threads(threads).build().context("cannot start worker threads")?)
        };
        Ok(Self { pool, threads })
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// `f(0), …, f(n-1)` in order; the first error wins.
    pub fn map<T, F>(&self, n: u64, f: F) -> anyhow::Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64) -> anyhow::Result<T> + Sync + Send,
    {
        match &self.pool {
            None => (0..n).map(f).collect(),
            Some(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
        }
    }

    /// Trials `start..end` split into one contiguous piece per thread, merged in order.
    pub fn search(&self, cfg: &SearchConfig, dims: &[usize], seed: u64, start: u64, end: u64) -> anyhow::Result<SearchReport> {
        let pieces = self.threads as u64;
        let len = end - start;
        if pieces == 1 || len < 2 * pieces {
            return Ok(run_trials(cfg, dims, seed, start, end)?);
        }
        let bounds: Vec<(u64, u64)> = (0..pieces).map(|i| (start + len * i / pieces, start + len * (i + 1) / pieces)).collect();
        let reports = self.map(pieces, |i| {
            let (s, e) = bounds[i as usize];
            Ok(run_trials(cfg, dims, seed, s, e)?)
        })?;
        let mut it = reports.into_iter();
        let first = it.next().context("no pieces")?;
        it.try_fold(first, |acc, next| acc.merge(next)).map_err(Into::into)
    }
}
