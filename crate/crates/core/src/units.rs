//! dB/dBm conversions.
//!
//! All internal arithmetic is carried out in linear scale with powers in
//! milliwatts; decibels appear only at configuration and reporting
//! boundaries. Keeping everything in mW leaves even the noise floor
//! (−95.2 dBm ≈ 3.02e-10 mW) comfortably inside f64 range despite the high
//! dynamic range of channel gains and leakage ratios.

use crate::math;

/// Dimensionless ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    math::powf(10.0, db / 10.0)
}

/// Linear ratio to dB.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * math::log10(x)
}

/// Power in dBm to milliwatts.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}

/// Power in milliwatts to dBm.
pub fn mw_to_dbm(mw: f64) -> f64 {
    linear_to_db(mw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_and_known_points() {
        assert!((dbm_to_mw(0.0) - 1.0).abs() < 1e-12);
        assert!((dbm_to_mw(24.0) - 251.18864315095797).abs() < 1e-9);
        assert!((mw_to_dbm(dbm_to_mw(-95.2)) + 95.2).abs() < 1e-12);
        assert!((db_to_linear(-3.0) - 0.501187233627272).abs() < 1e-12);
    }
}
