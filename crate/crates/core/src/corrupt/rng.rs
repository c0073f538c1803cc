//! Seeded sampling for corruption simulation.
//!
//! The generator is PCG32 (`PCG-XSH-RR`, 64-bit LCG state, 32-bit output),
//! constructed as `Pcg32::new(seed, STREAM)`. Every draw is built from 32-bit
//! outputs only:
//!
//! - a 64-bit word is `(first << 32) | second`;
//! - `below(n)` for `n > 0` uses Lemire's widening multiply with rejection on
//!   64-bit words, which is exact (unbiased);
//! - `below(0)` returns a raw 64-bit word (the full `2^64` range).
//!
//! Any implementation following these rules reproduces the same corruptions
//! bit-for-bit.

use rand_pcg::rand_core::Rng;
use rand_pcg::Pcg32;

/// PCG stream selector (the reference implementation's default increment).
pub const STREAM: u64 = 0xda3e_39cb_94b9_5bdb;

#[derive(Debug, Clone)]
pub struct CorruptionRng {
    inner: Pcg32,
}

impl CorruptionRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Pcg32::new(seed, STREAM),
        }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    pub fn next_u64(&mut self) -> u64 {
        let hi = self.next_u32() as u64;
        let lo = self.next_u32() as u64;
        (hi << 32) | lo
    }

    /// Uniform integer in `[0, n)`; `n == 0` means the whole `u64` range.
    pub fn below(&mut self, n: u64) -> u64 {
        if n == 0 {
            return self.next_u64();
        }
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = self.next_u64() as u128 * n as u128;
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo.wrapping_add(self.below((hi - lo).wrapping_add(1)))
    }
}
