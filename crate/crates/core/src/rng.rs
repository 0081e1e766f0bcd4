//! SplitMix64 stream with unbiased bounded draws.
//!
//! The stream is fixed so that a seed names the same instance on every
//! platform and in every reimplementation.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` by rejection: outputs at or above
    /// `2^64 - (2^64 mod bound)` are redrawn.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        // 2^64 mod bound
        let rem = (u64::MAX % bound + 1) % bound;
        loop {
            let r = self.next_u64();
            if rem == 0 || r < 0u64.wrapping_sub(rem) {
                return r % bound;
            }
        }
    }
}
