//! Deterministic derivation of per-trial seeds from a master seed.

/// Derives an independent 64-bit seed for `index` under `master`.
///
/// SplitMix64 finalization over the combined words; the same
/// `(master, index)` pair always yields the same seed, so trial
/// streams reproduce exactly regardless of execution order.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
