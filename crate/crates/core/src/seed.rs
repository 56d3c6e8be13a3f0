//! Seed derivation.
//!
//! Every random stream in the crate is keyed by mixing a parent seed with an
//! index through the SplitMix64 finalizer, so streams do not depend on the
//! order in which they are consumed. The same function derives per-pattern,
//! per-trial and per-cell seeds in the experiment harness.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for stream `index` under `parent`.
#[inline]
pub fn derive(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index.wrapping_mul(GOLDEN)))
}
