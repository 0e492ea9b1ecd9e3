//! Addressable random streams.
//!
//! A stream is a `(seed, stream)` pair feeding a ChaCha8 generator: the seed
//! selects the key, the stream index selects ChaCha's 64-bit stream word.
//! Child streams are derived by hashing, so a replication can be handed its
//! own stream without consuming anything from the parent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    seed: u64,
    stream: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// The `index`-th child stream, independent of scheduling order.
    pub fn substream(&self, index: u64) -> Self {
        Self {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d))),
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// `n` draws from N(mu, sigma²), generated as `mu + sigma * z` with z standard.
pub fn sample_normal(stream: RngStream, mu: f64, sigma: f64, n: usize) -> Result<Vec<f64>> {
    ensure_positive("sigma", sigma)?;
    if !mu.is_finite() {
        return Err(Error::Domain(format!("mu must be finite, got {mu}")));
    }
    let mut rng = stream.generator();
    Ok(fill_normal(&mut rng, mu, sigma, n))
}

pub(crate) fn fill_normal<R: Rng>(rng: &mut R, mu: f64, sigma: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            mu + sigma * z
        })
        .collect()
}
