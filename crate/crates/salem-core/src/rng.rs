//! Counter-based pseudo-random generation.
//!
//! Every draw is a pure function of its key, so digit streams and samplers
//! are reproducible and race-free regardless of evaluation order.

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic word for the key `(seed, stream, index)`.
pub fn keyed(seed: u64, stream: u64, index: u64) -> u64 {
    mix64(mix64(seed ^ mix64(stream)).wrapping_add(index))
}

/// Uniform value in `[0, 1)` for the key `(seed, stream, index)`.
pub fn u01(seed: u64, stream: u64, index: u64) -> f64 {
    // 53 high-quality bits into the mantissa.
    (keyed(seed, stream, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
