//! Optional keyed XOR pad over the secret bits.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use sha2::{Digest, Sha256};

/// XORs `bits` with a pseudorandom pad derived from `key`. Self-inverse.
pub fn apply_key(bits: &[bool], key: &str) -> Vec<bool> {
    let seed: [u8; 32] = Sha256::digest(key.as_bytes()).into();
    let mut rng = Xoshiro256PlusPlus::from_seed(seed);
    let mut word = 0u64;
    bits.iter()
        .enumerate()
        .map(|(k, &b)| {
            if k % 64 == 0 {
                word = rng.next_u64();
            }
            b ^ ((word >> (k % 64)) & 1 == 1)
        })
        .collect()
}
