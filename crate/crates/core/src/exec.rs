//! Batch execution shared by every sampler-driven computation.
//!
//! Work is cut into fixed-size batches; batch `i` draws from ChaCha8 stream
//! `i` of the run seed, so output depends only on `(seed, batch layout)`
//! and never on thread count or scheduling. Results come back in batch
//! order and callers merge them left to right.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples per batch.
pub const BATCH_SIZE: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon's global pool (or the pool installed by [`with_threads`]).
    /// Without the `parallel` feature this runs sequentially.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// The RNG for batch `batch` of a run seeded with `seed`.
pub fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

/// `(start, len)` of each batch covering `0..total`.
pub fn batches(total: u64) -> Vec<(u64, u64)> {
    (0..total.div_ceil(BATCH_SIZE))
        .map(|b| {
            let start = b * BATCH_SIZE;
            (start, BATCH_SIZE.min(total - start))
        })
        .collect()
}

/// Runs `f(batch_index, batch_len)` for every batch of `total` items and
/// returns the results in batch order.
pub fn map_batches<T, F>(exec: Execution, total: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    let layout = batches(total);
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            layout
                .into_par_iter()
                .enumerate()
                .map(|(i, (_, len))| f(i as u64, len))
                .collect()
        }
        _ => layout.into_iter().enumerate().map(|(i, (_, len))| f(i as u64, len)).collect(),
    }
}

/// Runs `f(i)` for `i` in `0..count` and returns the results in index order.
pub fn map_indices<T, F>(exec: Execution, count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

/// Runs `op` inside a dedicated pool of `threads` workers. Without the
/// `parallel` feature `threads` is ignored.
pub fn with_threads<R: Send>(threads: usize, op: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .expect("failed to build thread pool");
        pool.install(op)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        op()
    }
}
