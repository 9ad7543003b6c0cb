//! A tiny seeded generator shared by every randomized operation in the crate.
//!
//! The generator is a 64-bit multiplicative congruential generator (MCG):
//!
//! ```text
//! state0 = (seed << 1) | 1                  (wrapping; the state is always odd)
//! next   = state = state * 0x5851F42D4C957F2D  (mod 2^64)
//! below(n) = ((next >> 32) * n) >> 32
//! ```
//!
//! `below` takes the high 32 bits of the fresh state and maps them onto
//! `0..n` by multiply-shift. Any reimplementation following these three
//! lines reproduces the same choices for the same seed.

/// Multiplier of the generator (Knuth's MMIX constant, `5 mod 8`).
pub const MULTIPLIER: u64 = 0x5851_F42D_4C95_7F2D;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mcg64 {
    state: u64,
}

impl Mcg64 {
    pub fn new(seed: u64) -> Self {
        Self { state: (seed << 1) | 1 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER);
        self.state
    }

    /// Uniform-ish index in `0..n`. `n` must be non-zero and fit in 32 bits.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0 && n as u64 <= u32::MAX as u64, "below() needs 0 < n <= u32::MAX");
        (((self.next_u64() >> 32) * n as u64) >> 32) as usize
    }
}

/// FNV-1a over a string, used to derive per-record seeds.
pub fn fnv1a(text: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in text.bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
