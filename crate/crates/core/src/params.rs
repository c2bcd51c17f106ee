//! Problem constants and their derivation from dB-domain inputs.

use crate::error::ConfigError;
use crate::units::dbm_to_mw;

/// Duplexing capability of the radios.
///
/// Half-duplex radios cannot receive during a timeslot in which they
/// transmit; full-duplex radios can, subject to self-interference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Duplex {
    Half,
    Full,
}

/// Raw problem constants as they appear in configuration files: powers in
/// dBm, the SINR threshold in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct RawParams {
    pub n: usize,
    pub f: usize,
    pub t: usize,
    pub sinr_threshold_db: f64,
    pub noise_dbm: f64,
    pub max_power_dbm: f64,
    /// Initial power for iterative power control. Defaults to one tenth of
    /// the maximum power (10 dB below it).
    pub initial_power_dbm: Option<f64>,
    /// Weight of total power in the power-control objective, per mW.
    /// Defaults to 1/(N·T·Pmax), small enough never to trade a link for
    /// power savings.
    pub beta_per_mw: Option<f64>,
    /// Broken-link strike limit for iterative power control.
    pub c_max: u32,
    pub duplex: Duplex,
}

impl RawParams {
    /// 3GPP-freeway-style defaults: 5 dB SINR target, 24 dBm transmit power
    /// cap, −95.2 dBm noise per RB, half-duplex.
    pub fn benchmark(n: usize, f: usize, t: usize) -> Self {
        RawParams {
            n,
            f,
            t,
            sinr_threshold_db: 5.0,
            noise_dbm: -95.2,
            max_power_dbm: 24.0,
            initial_power_dbm: None,
            beta_per_mw: None,
            c_max: 100,
            duplex: Duplex::Half,
        }
    }

    /// Convert to linear scale and derive the dependent constants.
    pub fn derive(&self) -> Result<Params, ConfigError> {
        for (name, v) in [
            ("sinr_threshold_db", self.sinr_threshold_db),
            ("noise_dbm", self.noise_dbm),
            ("max_power_dbm", self.max_power_dbm),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::NonFinite(name));
            }
        }
        if self.n == 0 || self.f == 0 || self.t == 0 {
            return Err(ConfigError::invalid("N, F and T must all be at least 1"));
        }
        let sinr_threshold = dbm_to_mw(self.sinr_threshold_db);
        let noise_mw = dbm_to_mw(self.noise_dbm);
        let max_power_mw = dbm_to_mw(self.max_power_dbm);
        let initial_power_mw = match self.initial_power_dbm {
            Some(dbm) if !dbm.is_finite() => {
                return Err(ConfigError::NonFinite("initial_power_dbm"));
            }
            Some(dbm) => dbm_to_mw(dbm),
            None => max_power_mw / 10.0,
        };
        if initial_power_mw > max_power_mw {
            return Err(ConfigError::invalid(
                "initial power must not exceed the maximum power",
            ));
        }
        let sinr_fraction = sinr_threshold / (1.0 + sinr_threshold);
        let big_m = sinr_fraction * (self.n as f64 * max_power_mw + noise_mw);
        let beta_per_mw = match self.beta_per_mw {
            Some(b) if !(b.is_finite() && b >= 0.0) => {
                return Err(ConfigError::invalid("beta must be finite and nonnegative"));
            }
            Some(b) => b,
            None => 1.0 / (self.n as f64 * self.t as f64 * max_power_mw),
        };
        Ok(Params {
            n: self.n,
            f: self.f,
            t: self.t,
            sinr_threshold,
            sinr_fraction,
            noise_mw,
            max_power_mw,
            initial_power_mw,
            big_m,
            beta_per_mw,
            c_max: self.c_max,
            duplex: self.duplex,
        })
    }
}

/// Problem constants in linear scale (powers in mW).
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub n: usize,
    pub f: usize,
    pub t: usize,
    /// SINR success threshold, linear.
    pub sinr_threshold: f64,
    /// Threshold on the signal share of total received power,
    /// `sinr_threshold / (1 + sinr_threshold)`; used by the linearized form
    /// of the SINR constraint. Always in (0, 1).
    pub sinr_fraction: f64,
    /// Noise power per RB, mW.
    pub noise_mw: f64,
    /// Maximum transmit power per RB, mW.
    pub max_power_mw: f64,
    /// Starting power for iterative power control, mW.
    pub initial_power_mw: f64,
    /// Big-M constant deactivating a SINR row when its success indicator is
    /// zero: `sinr_fraction * (N * max_power + noise)`, mW. An upper bound on
    /// the row's violation under any schedule and power assignment.
    pub big_m: f64,
    /// Power-consumption weight in the power-control objective, 1/mW.
    pub beta_per_mw: f64,
    /// Broken-link strike limit for iterative power control.
    pub c_max: u32,
    pub duplex: Duplex,
}

impl Params {
    /// Number of resource blocks in the allocation grid.
    pub fn rb_count(&self) -> usize {
        self.f * self.t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derives_linear_constants() {
        let p = RawParams::benchmark(20, 20, 2).derive().unwrap();
        assert!((p.sinr_threshold - 3.1622776601683795).abs() < 1e-14);
        assert!((p.sinr_fraction - 0.7597469266479578).abs() < 1e-14);
        assert!((p.max_power_mw - 251.18864315095797).abs() < 1e-10);
        assert!((p.initial_power_mw - 25.118_864_315_095_8).abs() < 1e-11);
        assert!((p.noise_mw - 3.0199517204020158e-10).abs() < 1e-22);
        assert!(p.sinr_fraction > 0.0 && p.sinr_fraction < 1.0);
    }

    #[test]
    fn big_m_at_benchmark_size() {
        // sinr_fraction * (20 * 251.18864315... + 3.0199517e-10)
        let p = RawParams::benchmark(20, 20, 2).derive().unwrap();
        assert!((p.big_m - 3816.795992856448).abs() < 1e-8);
        assert!(p.big_m > 0.0);
    }

    #[test]
    fn beta_default_stays_below_link_value() {
        let p = RawParams::benchmark(20, 20, 2).derive().unwrap();
        assert!((p.beta_per_mw - 9.952679263837431e-5).abs() < 1e-16);
        // A single link is always worth more than the largest possible
        // total-power penalty.
        assert!(p.beta_per_mw * (p.n * p.t) as f64 * p.max_power_mw <= 1.0 + 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut raw = RawParams::benchmark(2, 1, 1);
        raw.sinr_threshold_db = f64::NAN;
        assert!(matches!(raw.derive(), Err(ConfigError::NonFinite(_))));

        let mut raw = RawParams::benchmark(2, 1, 1);
        raw.initial_power_dbm = Some(30.0); // above the 24 dBm cap
        assert!(raw.derive().is_err());

        let raw = RawParams::benchmark(0, 1, 1);
        assert!(raw.derive().is_err());
    }
}
