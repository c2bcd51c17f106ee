//! Convoy scenario generation.
//!
//! Vehicles sit on a single lane; the gap between neighbours follows a
//! shifted exponential distribution with minimum `d_min` and mean `d_avg`,
//! the standard freeway headway model. VUE indices follow position order
//! along the lane.

use crate::error::ConfigError;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// A sampled convoy: strictly increasing longitudinal coordinates in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvoyScenario {
    positions: Vec<f64>,
    rng_seed: u64,
}

impl ConvoyScenario {
    /// Sample `n` vehicles with i.i.d. shifted-exponential gaps. The first
    /// vehicle sits at coordinate 0. Deterministic for a fixed seed.
    pub fn sample(n: usize, d_min: f64, d_avg: f64, seed: u64) -> Result<Self, ConfigError> {
        if n < 2 {
            return Err(ConfigError::invalid("a convoy needs at least two vehicles"));
        }
        if !(d_min > 0.0 && d_min.is_finite() && d_avg.is_finite()) {
            return Err(ConfigError::invalid("spacing parameters must be positive"));
        }
        if d_avg <= d_min {
            return Err(ConfigError::invalid(
                "average spacing must exceed minimum spacing",
            ));
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let excess = rand_distr::Exp::new(1.0 / (d_avg - d_min))
            .map_err(|_| ConfigError::invalid("bad exponential rate"))?;
        let mut positions = Vec::with_capacity(n);
        let mut x = 0.0;
        positions.push(x);
        for _ in 1..n {
            x += d_min + rng.sample(excess);
            positions.push(x);
        }
        Ok(ConvoyScenario {
            positions,
            rng_seed: seed,
        })
    }

    /// Deterministic equally spaced convoy (handy for worked examples).
    pub fn equally_spaced(n: usize, gap: f64) -> Self {
        ConvoyScenario {
            positions: (0..n).map(|k| k as f64 * gap).collect(),
            rng_seed: 0,
        }
    }

    /// Wrap externally supplied coordinates (file input, tests). Positions
    /// must be strictly increasing.
    pub fn from_positions(positions: Vec<f64>, rng_seed: u64) -> Result<Self, ConfigError> {
        if positions.len() < 2 {
            return Err(ConfigError::invalid("a convoy needs at least two vehicles"));
        }
        if !positions.windows(2).all(|w| w[1] > w[0]) {
            return Err(ConfigError::invalid(
                "positions must be strictly increasing",
            ));
        }
        Ok(ConvoyScenario {
            positions,
            rng_seed,
        })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        (self.positions[i] - self.positions[j]).abs()
    }

    /// Vehicles strictly between `i` and `j` on the lane. Each one adds a
    /// fixed penetration loss to the channel between the pair.
    pub fn blockers_between(&self, i: usize, j: usize) -> usize {
        i.abs_diff(j).saturating_sub(1)
    }
}
