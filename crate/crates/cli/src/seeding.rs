//! Per-trial seed schedule for sweeps.
//!
//! Trial `i` of a sweep with master seed `S` uses the `i`-th output of the
//! SplitMix64 sequence seeded at `S`:
//!
//! ```text
//! z = S + (i + 1) · 0x9E3779B97F4A7C15          (wrapping)
//! z = (z ^ (z >> 30)) · 0xBF58476D1CE4E5B9      (wrapping)
//! z = (z ^ (z >> 27)) · 0x94D049BB133111EB      (wrapping)
//! seed_i = z ^ (z >> 31)
//! ```
//!
//! The schedule is order-free, so trials can run on any number of workers and
//! still see identical seeds; it is also fixed here bit-for-bit so other
//! implementations can reproduce sweep outputs exactly.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed for trial `index` under `master_seed`.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
