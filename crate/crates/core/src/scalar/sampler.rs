use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random source shared by every randomized routine.
///
/// ChaCha8 is used instead of `StdRng` because its stream is fixed across
/// `rand` releases, which keeps witnesses reproducible from a seed.
#[derive(Debug, Clone)]
pub struct DeterministicSampler {
    seed: u64,
    height: u32,
    max_retries: usize,
    rng: ChaCha8Rng,
}

impl DeterministicSampler {
    pub const DEFAULT_HEIGHT: u32 = 9;
    pub const DEFAULT_RETRIES: usize = 1000;

    pub fn new(seed: u64) -> Self {
        Self::with_bounds(seed, Self::DEFAULT_HEIGHT, Self::DEFAULT_RETRIES)
    }

    pub fn with_bounds(seed: u64, height: u32, max_retries: usize) -> Self {
        assert!(height > 0, "height bound must be positive");
        assert!(max_retries > 0, "retry budget must be positive");
        Self {
            seed,
            height,
            max_retries,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn max_retries(&self) -> usize {
        self.max_retries
    }

    /// Integer in `[-height, height]`.
    pub fn signed(&mut self) -> i64 {
        let h = i64::from(self.height);
        self.rng.random_range(-h..=h)
    }

    /// Integer in `[1, height]`.
    pub fn positive(&mut self) -> i64 {
        self.rng.random_range(1..=i64::from(self.height))
    }

    /// Uniform integer in `[0, bound)`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.rng.random_range(0..bound)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    /// Uniform index in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }
}
