//! Seeded random points for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::C64;

/// Radius of the sampling disk around `1/2`; strictly inside the polydisk
/// `|x - 1/2| < 1/2` so every sample has modulus below 0.95.
pub const SAMPLE_RADIUS: f64 = 0.45;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Uniform point of the disk `|z - center| < radius`.
    pub fn disk(&mut self, center: C64, radius: f64) -> C64 {
        let r = radius * self.rng.gen::<f64>().sqrt();
        let th = self.rng.gen_range(0.0..std::f64::consts::TAU);
        center + C64::from_polar(r, th)
    }

    /// Point of the shrunk polydisk `|x_i - 1/2| < 0.45`.
    pub fn polydisk(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.disk(C64::new(0.5, 0.0), SAMPLE_RADIUS)).collect()
    }

    /// Rejection sampling in the shrunk polydisk.
    pub fn polydisk_where(&mut self, n: usize, max_tries: usize, accept: impl Fn(&[C64]) -> bool) -> Result<Vec<C64>> {
        for _ in 0..max_tries {
            let x = self.polydisk(n);
            if accept(&x) {
                return Ok(x);
            }
        }
        Err(Error::Precondition(format!("no acceptable sample in {max_tries} tries")))
    }

    /// Complex vector with independent components in the square `[-s, s]^2`.
    pub fn vector(&mut self, n: usize, s: f64) -> Vec<C64> {
        (0..n).map(|_| C64::new(self.rng.gen_range(-s..s), self.rng.gen_range(-s..s))).collect()
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.gen()
    }
}

/// Whether `z` lies in the disk `|z - 1/2| < 1/2 - margin`.
pub fn in_polydisk(z: C64, margin: f64) -> bool {
    (z - C64::new(0.5, 0.0)).norm() < 0.5 - margin
}
