//! Seed derivation for independent deterministic RNG streams.

/// splitmix64 mix of a base seed and a stream tag. Used to derive
/// independent substreams (parallel Monte Carlo chunks, point processes)
/// from one user-facing seed.
pub(crate) fn subseed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
