//! Random streams addressed by `(seed, chain, purpose, sweep, group)`.
//!
//! Each address selects a ChaCha8 key and stream; within a stream the
//! `i`-th update draws exactly one `u64` at word offset `2 i`. Any partition
//! of a group into chunks therefore reproduces the sequential draws.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Distinguishes independent uses of one seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Gauge = 1,
    Clock = 2,
    Transform = 3,
}

pub fn stream(seed: u64, chain: u64, purpose: Purpose, sweep: u64, group: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&chain.to_le_bytes());
    key[16..24].copy_from_slice(&(purpose as u64).to_le_bytes());
    key[24..32].copy_from_slice(&group.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(sweep);
    rng
}

/// Position the stream at the `i`-th draw.
pub fn seek(rng: &mut ChaCha8Rng, i: usize) {
    rng.set_word_pos(2 * i as u128);
}

/// Uniform in `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Index drawn from unnormalised log weights using one uniform.
#[inline]
pub fn categorical(logw: &[f64], u: f64) -> usize {
    let m = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut w = [0f64; 256];
    let mut z = 0.0;
    for (i, &l) in logw.iter().enumerate() {
        w[i] = (l - m).exp();
        z += w[i];
    }
    let target = u * z;
    let mut acc = 0.0;
    for (i, &wi) in w[..logw.len()].iter().enumerate() {
        acc += wi;
        if target < acc {
            return i;
        }
    }
    // rounding at the top end: last category with positive weight
    (0..logw.len()).rev().find(|&i| w[i] > 0.0).unwrap_or(0)
}
