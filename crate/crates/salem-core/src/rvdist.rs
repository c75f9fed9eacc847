//! Sampling the random variable whose distribution function a
//! distributional generalized Salem function is, and comparing the
//! empirical distribution against the model CDF on a grid.

use alloc::vec::Vec;

use crate::gensalem::{eval_series, GenSalemSpec};
use crate::numrep::encode;
use crate::rng;
use crate::{Error, Result};

/// Sampling truncates digit strings at this depth; the induced value error
/// is below `max_weight^64`, far under any KS resolution.
const SAMPLE_DEPTH: u32 = 64;

/// Outcome of one empirical-vs-model comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub n: usize,
    pub seed: u64,
    pub ks_statistic: f64,
    pub pass: bool,
}

/// Draw `n` realizations: the digit fed to position `n_k` is drawn from the
/// coefficient distribution independently for each `k`, the digits are
/// assembled through the index sequence, truncated at depth 64, and decoded
/// under the weight vector.
///
/// Every digit is a pure function of `(seed, sample index, draw index)`, so
/// the output is reproducible and independent of any work scheduling.
pub fn draw_samples(spec: &GenSalemSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !spec.coeffs().is_distributional() {
        return Err(Error::NotDistributional);
    }
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(draw_one(spec, seed, i as u64));
    }
    Ok(out)
}

/// The single sample with index `i` under `seed`; exposed so callers can
/// fan sampling out across workers without changing the result.
pub fn draw_one(spec: &GenSalemSpec, seed: u64, i: u64) -> f64 {
    let mut value = 0.0;
    let mut prod = 1.0;
    for pos in 1..=SAMPLE_DEPTH {
        let draw_index = spec.perm().preimage(pos) as u64;
        let u = rng::u01(seed, i, draw_index);
        let digit = spec.coeffs().digit_for(u);
        value += spec.weights().cum_weight(digit) * prod;
        prod *= spec.weights().weight(digit);
    }
    value
}

/// Model CDF at `s`: zero below the unit interval, one above, the series
/// value of the encoded argument inside.
pub fn model_cdf(spec: &GenSalemSpec, s: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let d = encode(s, &spec.schedule(), SAMPLE_DEPTH).expect("s in [0,1)");
    eval_series(&d, spec, 1e-12).value
}

/// Sup over `grid_size` equispaced points of the gap between the empirical
/// CDF of the samples and the model CDF; passes when it stays within
/// `threshold`. `seed` is recorded for provenance.
pub fn ks_compare(
    samples: &[f64],
    spec: &GenSalemSpec,
    grid_size: usize,
    threshold: f64,
    seed: u64,
) -> SampleReport {
    assert!(!samples.is_empty(), "samples must be nonempty");
    assert!(grid_size >= 1);
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    let mut ks = 0.0f64;
    for g in 1..=grid_size {
        let s = g as f64 / grid_size as f64;
        let below = sorted.partition_point(|&x| x < s);
        let empirical = below as f64 / n as f64;
        let model = model_cdf(spec, s);
        let gap = crate::fx::abs(empirical - model);
        if gap > ks {
            ks = gap;
        }
    }
    SampleReport {
        n,
        seed,
        ks_statistic: ks,
        pass: ks <= threshold,
    }
}
