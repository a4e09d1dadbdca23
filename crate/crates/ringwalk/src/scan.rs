//! Thread-partitioned exhaustive kernel scans.

use std::num::NonZeroUsize;
use std::thread;

use ringwalk_core::hamspace::{CountMethod, GroundCount, PenaltyHamiltonian, RangeCount};
use ringwalk_core::Result;

/// Environment variable capping scan parallelism.
pub const THREADS_VAR: &str = "RINGWALK_THREADS";

/// Available parallelism, capped by `RINGWALK_THREADS` when that is a
/// positive integer.
pub fn thread_count() -> usize {
    let avail = thread::available_parallelism().map_or(1, NonZeroUsize::get);
    match std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        Some(n) if n > 0 => n.min(avail),
        _ => avail,
    }
}

/// Exhaustive zero-penalty count split into contiguous index ranges, one per
/// worker. The merged result does not depend on the worker count.
pub fn parallel_exhaustive(h: &PenaltyHamiltonian, threads: usize) -> Result<GroundCount> {
    let total = h.exhaustive_len()?;
    let workers = (threads.max(1) as u64).min(total.max(1));
    let chunk = total.div_ceil(workers);
    let parts: Vec<Result<RangeCount>> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = (w * chunk).min(total);
                let hi = ((w + 1) * chunk).min(total);
                s.spawn(move || h.scan_range(lo..hi))
            })
            .collect();
        handles
            .into_iter()
            .map(|j| j.join().expect("scan worker panicked"))
            .collect()
    });
    let mut acc = RangeCount::default();
    for p in parts {
        acc = acc.merge(p?);
    }
    Ok(GroundCount {
        count: u128::from(acc.count),
        witness: acc.witness.map(|w| h.decode(w)),
        method: CountMethod::Exhaustive,
    })
}
