//! Per-sample seeds.
//!
//! `seed = mix(mix(master ^ mix(cell)) ^ sample)` where `mix` is the
//! SplitMix64 step (add the golden-ratio increment, then the variant-13
//! finalizer). The result depends only on the three inputs, never on the
//! order in which samples are scheduled.

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn sample_seed(master: u64, cell: u64, sample: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(cell)) ^ sample)
}
