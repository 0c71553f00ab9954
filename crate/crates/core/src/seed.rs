//! Splittable seed derivation.
//!
//! Every random stream in an experiment is addressed by a path of labels
//! hanging off one base seed, e.g. `base / "arm" / replication / arm_index`.
//! A child seed is `mix(parent ^ mix(component))`, where `mix` is the
//! SplitMix64 finalizer and string components are first hashed with 64-bit
//! FNV-1a. Streams keyed by a policy's name therefore do not move when other
//! policies are added to or removed from a configuration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// A node in the seed tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedPath(u64);

impl SeedPath {
    pub fn root(base_seed: u64) -> Self {
        SeedPath(mix(base_seed))
    }

    pub fn child(self, index: u64) -> Self {
        SeedPath(mix(self.0 ^ mix(index)))
    }

    pub fn named(self, label: &str) -> Self {
        self.child(fnv1a(label.as_bytes()))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn children_are_distinct_and_stable() {
        let root = SeedPath::root(42);
        assert_ne!(root.child(0), root.child(1));
        assert_ne!(root.named("ucb"), root.named("softmax"));
        assert_eq!(root.named("ucb").child(3), SeedPath::root(42).named("ucb").child(3));
    }
}
