//! Deterministic pseudo-randomness.
//!
//! All sampling in this crate flows through [`Rng`], a SplitMix64 generator:
//! a 64-bit counter advanced by the golden-ratio constant and finalized with
//! two xor-multiply rounds. It is platform independent, trivially seedable,
//! and good enough for picking field elements; nothing here is cryptographic.
//!
//! Parallel workers use [`Rng::split`] keyed by a stable index (for example a
//! Grassmannian cell index), so serial and parallel runs of the same seeded
//! computation visit identical samples.

/// SplitMix64 state.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
    seed: u64,
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed, seed }
    }

    /// The seed this generator was created with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child generator for worker `index`.
    pub fn split(&self, index: u64) -> Rng {
        Rng::new(mix(self.seed ^ mix(index.wrapping_add(0xA0761D6478BD642F))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        mix(self.state)
    }

    /// Uniform value in `0..n` via rejection sampling; exact, no modulo bias.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }
}
