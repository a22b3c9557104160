use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// The portable random stream behind scenario generation: plain SplitMix64
/// with the state initialised to the seed, plus the two derived draws the
/// generator needs. Any implementation of the reference algorithm replays
/// the same files.
#[derive(Clone, Debug)]
pub struct ScenarioRng(SplitMix64);

impl ScenarioRng {
    pub fn new(seed: u64) -> Self {
        ScenarioRng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..n` by rejection: draws at or above the largest
    /// multiple of `n` are discarded so every residue is equally likely.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % n + 1) % n;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % n;
            }
        }
    }

    /// Fair coin from the top bit of one draw.
    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}
