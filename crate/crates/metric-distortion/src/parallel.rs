//! Deterministic fan-out over index ranges.
//!
//! Work is split into fixed-size chunks that do not depend on the worker
//! count; workers pull chunks from a shared counter and results are returned
//! in chunk order. Callers that fold the per-chunk results in that order get
//! output that is bit-identical for any `--workers` value.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

/// Number of threads to use when the caller did not ask for a specific count.
pub fn resolve_workers(requested: Option<usize>) -> usize {
    match requested {
        Some(n) if n >= 1 => n,
        _ => std::thread::available_parallelism().map_or(1, |n| n.get()),
    }
}

/// Applies `f` to consecutive chunks of `0..total` and returns the results
/// in chunk order. The chunking depends only on `chunk_size`, never on
/// `workers`, so a deterministic `f` yields identical output for any
/// worker count.
pub fn map_chunks<T, F>(total: u64, chunk_size: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync,
{
    assert!(chunk_size > 0, "chunk_size must be positive");
    let n_chunks = total.div_ceil(chunk_size);
    let mut slots: Vec<Option<T>> = Vec::new();
    slots.resize_with(n_chunks as usize, || None);
    if n_chunks == 0 {
        return Vec::new();
    }

    let next = AtomicU64::new(0);
    let slots = Mutex::new(&mut slots);
    let threads = workers.clamp(1, n_chunks as usize);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let chunk = next.fetch_add(1, Ordering::Relaxed);
                if chunk >= n_chunks {
                    break;
                }
                let lo = chunk * chunk_size;
                let hi = (lo + chunk_size).min(total);
                let out = f(lo..hi);
                slots.lock().unwrap()[chunk as usize] = Some(out);
            });
        }
    });

    slots
        .into_inner()
        .unwrap()
        .iter_mut()
        .map(|s| s.take().expect("chunk result missing"))
        .collect()
}
