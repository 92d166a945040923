//! Deterministic per-element random streams.
//!
//! Every draw comes from a ChaCha8 stream selected by `(seed, key)`, where the
//! key is a hash of the element's canonical encoding. An element's labels
//! therefore do not depend on which other elements share its window.

use std::collections::HashSet;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::group::GroupElement;

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `i`-th sample in a batch drawn under `seed`.
pub fn sample_seed(seed: u64, i: u64) -> u64 {
    mix64(mix64(seed) ^ i)
}

/// Derived seed for an independent purpose, e.g. coset labels.
pub fn domain_seed(seed: u64, domain: &str) -> u64 {
    domain.bytes().fold(mix64(seed), |h, b| mix64(h ^ b as u64))
}

/// 64-bit key of the canonical encoding `(group tag, payload)`.
pub fn element_key(g: &GroupElement) -> u64 {
    let mut h = g.group().tag().bytes().fold(0u64, |h, b| mix64(h ^ b as u64));
    let payload = g.payload();
    h = mix64(h ^ payload.len() as u64);
    for v in payload {
        h = mix64(h ^ v as u64);
    }
    h
}

/// The stream of `g` under `seed`.
pub fn element_stream(seed: u64, g: &GroupElement) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(element_key(g));
    rng
}

/// One distinct 64-bit label per key.
///
/// Keys are processed in the given order. A key whose first draw repeats an
/// earlier label keeps drawing from its own stream until the label is new.
pub fn distinct_labels<'a, I>(seed: u64, keys: I) -> Vec<u64>
where
    I: IntoIterator<Item = &'a GroupElement>,
{
    let mut used = HashSet::new();
    keys.into_iter()
        .map(|g| {
            let mut rng = element_stream(seed, g);
            loop {
                let v = rng.next_u64();
                if used.insert(v) {
                    return v;
                }
            }
        })
        .collect()
}

/// First draw of each key, without collision handling.
pub fn raw_labels<'a, I>(seed: u64, keys: I) -> Vec<u64>
where
    I: IntoIterator<Item = &'a GroupElement>,
{
    keys.into_iter()
        .map(|g| element_stream(seed, g).next_u64())
        .collect()
}
