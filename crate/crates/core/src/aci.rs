//! Adjacent-channel interference model.
//!
//! ACI is quantified by the adjacent channel interference ratio (ACIR); the
//! leakage matrix stored here is its element-wise inverse: entry `(f', f)` is
//! the fraction of power transmitted on frequency slot `f'` that is received
//! on slot `f`. Leakage depends only on the slot offset, so the matrix is
//! Toeplitz with a unit diagonal (same-slot "leakage" is the co-channel case).

use crate::error::ConfigError;
use crate::mat::Mat2;
use alloc::vec::Vec;

/// Leakage-versus-offset model used to build an [`AciMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub enum AciModel {
    /// Stepwise mask specified for the LTE uplink by 3GPP (TS 36.942):
    /// −30 dB for offsets 1..=4, −45 dB beyond.
    Gpp3Mask,
    /// No adjacent-channel leakage at all (co-channel interference only).
    NoAci,
    /// User-supplied stepwise mask: `(max_offset, linear_ratio)` levels with
    /// strictly increasing offsets and ratios in (0, 1]. Offsets past the
    /// last level saturate at the last ratio.
    CustomStep(Vec<(u32, f64)>),
}

impl AciModel {
    /// Linear power ratio leaked at a given slot offset.
    fn ratio(&self, offset: u32) -> f64 {
        if offset == 0 {
            return 1.0;
        }
        match self {
            AciModel::Gpp3Mask => {
                if offset <= 4 {
                    1e-3
                } else {
                    // 10^-4.5
                    3.1622776601683795e-5
                }
            }
            AciModel::NoAci => 0.0,
            AciModel::CustomStep(levels) => {
                for &(max_offset, ratio) in levels {
                    if offset <= max_offset {
                        return ratio;
                    }
                }
                levels.last().map(|&(_, r)| r).unwrap_or(0.0)
            }
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if let AciModel::CustomStep(levels) = self {
            if levels.is_empty() {
                return Err(ConfigError::invalid("custom ACI mask has no levels"));
            }
            let mut prev_offset = 0u32;
            for &(max_offset, ratio) in levels {
                if max_offset <= prev_offset && prev_offset != 0 || max_offset == 0 {
                    return Err(ConfigError::invalid(
                        "custom ACI mask offsets must be strictly increasing and positive",
                    ));
                }
                if !(ratio > 0.0 && ratio <= 1.0) {
                    return Err(ConfigError::invalid(
                        "custom ACI mask ratios must lie in (0, 1]",
                    ));
                }
                prev_offset = max_offset;
            }
        }
        Ok(())
    }
}

/// F×F inverse-ACIR leakage matrix, linear scale.
#[derive(Debug, Clone, PartialEq)]
pub struct AciMatrix {
    f: usize,
    values: Mat2<f64>,
}

impl AciMatrix {
    /// Build a leakage matrix for `f` frequency slots.
    pub fn build(f: usize, model: &AciModel) -> Result<Self, ConfigError> {
        if f == 0 {
            return Err(ConfigError::invalid("need at least one frequency slot"));
        }
        model.validate()?;
        let mut values = Mat2::filled(f, f, 0.0);
        for from in 0..f {
            for to in 0..f {
                let offset = from.abs_diff(to) as u32;
                values[(from, to)] = model.ratio(offset);
            }
        }
        Ok(AciMatrix { f, values })
    }

    pub fn f(&self) -> usize {
        self.f
    }

    /// Fraction of power sent on slot `from` that lands on slot `to`
    /// (0-based slot indices).
    #[inline]
    pub fn leakage(&self, from: usize, to: usize) -> f64 {
        self.values[(from, to)]
    }
}
