//! Deterministic random streams keyed by `(master_seed, key, stage)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix_str(mut h: u64, s: &str) -> u64 {
    for b in s.bytes() {
        h = splitmix64(h ^ u64::from(b));
    }
    splitmix64(h ^ s.len() as u64)
}

/// Seed for an independent stream. Streams with different keys or stages never share state.
pub fn derive_seed(master: u64, key: &str, stage: &str) -> u64 {
    mix_str(mix_str(splitmix64(master), key), stage)
}

pub fn stream(master: u64, key: &str, stage: &str) -> Rng {
    Rng::seed_from_u64(derive_seed(master, key, stage))
}

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}
