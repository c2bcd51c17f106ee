//! Average channel power gains between vehicles.
//!
//! The gain from VUE `i` to VUE `j` combines log-distance pathloss,
//! log-normal shadowing and a fixed penetration loss per vehicle standing
//! between the pair. Small-scale fading is not modeled here; it is folded
//! into the SINR threshold.

use crate::convoy::ConvoyScenario;
use crate::error::ConfigError;
use crate::mat::Mat2;
use crate::math;
use crate::params::Duplex;
use crate::units::db_to_linear;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Large-scale channel model parameters (dB domain).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    /// Pathloss at the reference distance, dB.
    pub pl0_db: f64,
    /// Pathloss exponent.
    pub exponent: f64,
    /// Reference distance, meters.
    pub d0_m: f64,
    /// Shadowing standard deviation, dB.
    pub sigma_db: f64,
    /// Penetration loss per blocking vehicle, dB.
    pub penetration_db: f64,
    /// Draw one shadowing value per unordered pair and mirror it. The
    /// measurement literature is silent on reciprocity; mirrored draws are
    /// the default, independent draws are available for comparison.
    pub symmetric_shadowing: bool,
}

impl ChannelParams {
    /// Highway measurement defaults: 63.3 dB at 10 m, exponent 1.77,
    /// 3.1 dB shadowing, 10 dB per blocker.
    pub fn highway() -> Self {
        ChannelParams {
            pl0_db: 63.3,
            exponent: 1.77,
            d0_m: 10.0,
            sigma_db: 3.1,
            penetration_db: 10.0,
            symmetric_shadowing: true,
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !self.d0_m.is_finite() || self.d0_m <= 0.0 {
            return Err(ConfigError::invalid("reference distance must be positive"));
        }
        if !self.sigma_db.is_finite() || self.sigma_db < 0.0 {
            return Err(ConfigError::invalid(
                "shadowing deviation must be nonnegative",
            ));
        }
        Ok(())
    }
}

/// How the self-channel (diagonal) entries are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalMode {
    /// Unit self-gain (0 dB loopback): a full-duplex radio hears its own
    /// transmission at full power, which naturally drowns simultaneous
    /// reception unless gains are extreme.
    FullDuplexSelfGain,
    /// Zero diagonal. Half-duplex is enforced on the evaluation side, so
    /// keeping the huge self-gain out of the matrix avoids the dynamic-range
    /// blowup it would cause in downstream arithmetic.
    HalfDuplexZeroDiagonal,
}

/// N×N matrix of average channel power gains, linear scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    n: usize,
    gains: Mat2<f64>,
    diagonal_mode: DiagonalMode,
}

impl ChannelMatrix {
    /// Generate gains for a convoy. Shadowing is drawn from the given seed;
    /// the diagonal is filled according to the duplex mode.
    pub fn generate(
        scenario: &ConvoyScenario,
        params: &ChannelParams,
        duplex: Duplex,
        seed: u64,
    ) -> Result<Self, ConfigError> {
        params.validate()?;
        let n = scenario.n();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let shadow = if params.sigma_db > 0.0 {
            Some(
                rand_distr::Normal::new(0.0, params.sigma_db)
                    .map_err(|_| ConfigError::invalid("bad shadowing deviation"))?,
            )
        } else {
            None
        };

        let diagonal_mode = match duplex {
            Duplex::Half => DiagonalMode::HalfDuplexZeroDiagonal,
            Duplex::Full => DiagonalMode::FullDuplexSelfGain,
        };
        let mut gains = Mat2::filled(
            n,
            n,
            match diagonal_mode {
                DiagonalMode::HalfDuplexZeroDiagonal => 0.0,
                DiagonalMode::FullDuplexSelfGain => 1.0,
            },
        );

        let pair_gain = |scenario: &ConvoyScenario, rng: &mut ChaCha12Rng, i, j| {
            let d = scenario.distance(i, j);
            let shadow_db = shadow.map_or(0.0, |s| rng.sample(s));
            let blockers = scenario.blockers_between(i, j) as f64;
            let loss_db = params.pl0_db
                + 10.0 * params.exponent * math::log10(d / params.d0_m)
                + shadow_db
                + params.penetration_db * blockers;
            db_to_linear(-loss_db)
        };

        if params.symmetric_shadowing {
            for i in 0..n {
                for j in (i + 1)..n {
                    let g = pair_gain(scenario, &mut rng, i, j);
                    gains[(i, j)] = g;
                    gains[(j, i)] = g;
                }
            }
        } else {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        gains[(i, j)] = pair_gain(scenario, &mut rng, i, j);
                    }
                }
            }
        }

        Ok(ChannelMatrix {
            n,
            gains,
            diagonal_mode,
        })
    }

    /// Build directly from a gain matrix (tests, file input).
    pub fn from_gains(gains: Mat2<f64>, diagonal_mode: DiagonalMode) -> Self {
        debug_assert_eq!(gains.rows(), gains.cols());
        ChannelMatrix {
            n: gains.rows(),
            gains,
            diagonal_mode,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonal_mode(&self) -> DiagonalMode {
        self.diagonal_mode
    }

    /// Linear power gain from transmitter `i` to receiver `j`.
    #[inline]
    pub fn gain(&self, i: usize, j: usize) -> f64 {
        self.gains[(i, j)]
    }

    /// Copy with the diagonal forced to zero.
    pub fn with_zero_diagonal(&self) -> Self {
        let mut gains = self.gains.clone();
        for i in 0..self.n {
            gains[(i, i)] = 0.0;
        }
        ChannelMatrix {
            n: self.n,
            gains,
            diagonal_mode: DiagonalMode::HalfDuplexZeroDiagonal,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_shadow() -> ChannelParams {
        ChannelParams {
            sigma_db: 0.0,
            ..ChannelParams::highway()
        }
    }

    #[test]
    fn gain_at_reference_distance() {
        let s = ConvoyScenario::equally_spaced(2, 10.0);
        let h = ChannelMatrix::generate(&s, &no_shadow(), Duplex::Half, 0).unwrap();
        // 63.3 dB loss -> 10^-6.33
        assert!((h.gain(0, 1) - 4.677351412871981e-7).abs() < 1e-19);
    }

    #[test]
    fn gain_at_100m() {
        let s = ConvoyScenario::equally_spaced(2, 100.0);
        let h = ChannelMatrix::generate(&s, &no_shadow(), Duplex::Half, 0).unwrap();
        // 63.3 + 17.7 = 81.0 dB loss
        assert!((h.gain(0, 1) - 7.943282347242822e-9).abs() < 1e-20);
    }

    #[test]
    fn one_blocker_costs_10_db() {
        // 0-1 spacing 20 m (adjacent); 1-3 also 20 m apart but with VUE 2
        // in between.
        let s = ConvoyScenario::from_positions(alloc::vec![0.0, 20.0, 30.0, 40.0], 0).unwrap();
        let h = ChannelMatrix::generate(&s, &no_shadow(), Duplex::Half, 0).unwrap();
        let ratio = h.gain(0, 1) / h.gain(1, 3);
        assert!((10.0 * ratio.log10() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_when_mirrored() {
        let s = ConvoyScenario::sample(10, 10.0, 48.6, 5).unwrap();
        let h = ChannelMatrix::generate(&s, &ChannelParams::highway(), Duplex::Half, 9).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(h.gain(i, j), h.gain(j, i));
            }
        }
    }

    #[test]
    fn independent_draws_differ() {
        let s = ConvoyScenario::sample(6, 10.0, 48.6, 5).unwrap();
        let params = ChannelParams {
            symmetric_shadowing: false,
            ..ChannelParams::highway()
        };
        let h = ChannelMatrix::generate(&s, &params, Duplex::Half, 9).unwrap();
        let asymmetric = (0..6)
            .flat_map(|i| (0..6).map(move |j| (i, j)))
            .filter(|&(i, j)| i < j)
            .any(|(i, j)| h.gain(i, j) != h.gain(j, i));
        assert!(asymmetric);
    }

    #[test]
    fn diagonal_per_duplex_mode() {
        let s = ConvoyScenario::equally_spaced(3, 30.0);
        let half = ChannelMatrix::generate(&s, &no_shadow(), Duplex::Half, 0).unwrap();
        let full = ChannelMatrix::generate(&s, &no_shadow(), Duplex::Full, 0).unwrap();
        for i in 0..3 {
            assert_eq!(half.gain(i, i), 0.0);
            assert_eq!(full.gain(i, i), 1.0);
        }
        assert_eq!(half.diagonal_mode(), DiagonalMode::HalfDuplexZeroDiagonal);
    }

    #[test]
    fn monotone_in_distance_and_blockers() {
        let s = ConvoyScenario::equally_spaced(6, 40.0);
        let h = ChannelMatrix::generate(&s, &no_shadow(), Duplex::Half, 0).unwrap();
        // Farther neighbour (and more blockers) always means less gain.
        for j in 2..6 {
            assert!(h.gain(0, j) < h.gain(0, j - 1));
        }
    }

    #[test]
    fn off_diagonal_positive() {
        let s = ConvoyScenario::sample(12, 10.0, 48.6, 11).unwrap();
        let h = ChannelMatrix::generate(&s, &ChannelParams::highway(), Duplex::Half, 2).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                if i != j {
                    assert!(h.gain(i, j) > 0.0);
                }
            }
        }
    }
}
