//! Deterministic fan-out. `SALEMGEN_THREADS` caps the worker count; the
//! work partition and the combination order are fixed in advance, so the
//! output bytes do not depend on the thread count or the scheduler.

use salem_core::gensalem::{quadrature_frontier, quadrature_subtree, GenSalemSpec};
use salem_core::rvdist::draw_one;
use salem_core::{Error, Result};

pub fn threads() -> usize {
    std::env::var("SALEMGEN_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
        .min(64)
}

/// Map `job` over `0..n` into a vector, splitting contiguous chunks across
/// workers. Entry `i` depends only on `i`, so the result is identical for
/// any worker count.
fn indexed_map<T, F>(n: usize, workers: usize, job: F) -> Vec<T>
where
    T: Default + Clone + Send,
    F: Fn(usize) -> T + Sync,
{
    let mut out = vec![T::default(); n];
    if n == 0 {
        return out;
    }
    let workers = workers.clamp(1, n);
    let per = n.div_ceil(workers);
    std::thread::scope(|scope| {
        for (chunk_index, chunk) in out.chunks_mut(per).enumerate() {
            let job = &job;
            scope.spawn(move || {
                let start = chunk_index * per;
                for (offset, slot) in chunk.iter_mut().enumerate() {
                    *slot = job(start + offset);
                }
            });
        }
    });
    out
}

/// Quadrature over a fixed frontier of 256 subtrees, summed in frontier
/// order with compensated addition. The frontier and per-subtree sums do
/// not depend on the worker count.
pub fn quadrature(spec: &GenSalemSpec, max_cell_len: f64, eval_tol: f64) -> f64 {
    let frontier = quadrature_frontier(spec, max_cell_len, 256);
    let parts = indexed_map(frontier.len(), threads(), |i| {
        quadrature_subtree(spec, &frontier[i], max_cell_len, eval_tol)
    });
    let mut sum = 0.0;
    let mut carry = 0.0;
    for x in parts {
        let y = x - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Draw `n` samples; sample `i` is a pure function of `(seed, i)`.
pub fn samples(spec: &GenSalemSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !spec.coeffs().is_distributional() {
        return Err(Error::NotDistributional);
    }
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(indexed_map(n, threads(), |i| draw_one(spec, seed, i as u64)))
}
