//! Thread-pool backed versions of the sampling routines. Work is split along
//! the fixed sampling blocks, so results do not depend on the thread count.

use rayon::prelude::*;
use weylkit_core::geometry::{
    cone_counts_block, inconvertibility, polytope_hits_block, report_from_counts, ConeCounts, HPolytope,
    InconvertibilityReport, VolumeMethod, VolumeResult,
};
use weylkit_core::spectra::block_layout;
use weylkit_core::{Result, Spectrum, Weight};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "WEYLKIT_THREADS";

/// Pool sized by `WEYLKIT_THREADS` (all cores when unset, empty or zero).
pub fn pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    pool_with(threads)
}

pub fn pool_with(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

pub fn volume_monte_carlo(p: &HPolytope<f64>, samples: usize, seed: u64) -> VolumeResult {
    let blocks: Vec<_> = block_layout(samples).collect();
    let hits = blocks.par_iter().map(|&(b, len)| polytope_hits_block(p, seed, b, len)).sum();
    VolumeResult::from_hits(hits, samples, seed)
}

pub fn cone_counts(r: &Spectrum, samples: usize, seed: u64) -> ConeCounts {
    let blocks: Vec<_> = block_layout(samples).collect();
    blocks
        .par_iter()
        .map(|&(b, len)| cone_counts_block(r, seed, b, len))
        .reduce(ConeCounts::default, ConeCounts::merge)
}

/// Same result as the sequential core routine; Monte Carlo blocks run in parallel.
pub fn inconvertibility_par<T: Weight>(r: &Spectrum<T>, method: VolumeMethod) -> Result<InconvertibilityReport> {
    match method {
        VolumeMethod::MonteCarlo { samples, seed } if r.dim() > 1 => {
            Ok(report_from_counts(cone_counts(&r.to_f64(), samples, seed), seed))
        }
        _ => inconvertibility(r, method),
    }
}
