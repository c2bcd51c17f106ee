//! Experiment configuration.
//!
//! A TOML file whose keys mirror the benchmark evaluation setup; every key
//! has the benchmark value as its default, so an empty file (or no file)
//! reproduces the standard 20-vehicle, 20x2-grid half-duplex scenario with
//! the 3GPP uplink ACI mask.

use serde::{Deserialize, Serialize};
use std::path::Path;
use v2vsim_core::{AciModel, ChannelParams, ConfigError, Duplex, RawParams};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    // problem dimensions
    pub n: usize,
    pub f: usize,
    pub t: usize,
    // radio parameters
    pub sinr_threshold_db: f64,
    pub max_power_dbm: f64,
    /// Defaults to 10 dB below the maximum power.
    pub initial_power_dbm: Option<f64>,
    pub noise_dbm: f64,
    pub duplex: DuplexKey,
    pub c_max: u32,
    /// Power weight of the power-control objective, per mW. Defaults to
    /// 1/(N*T*Pmax).
    pub beta_per_mw: Option<f64>,
    pub aci_model: AciModelKey,
    /// Stepwise mask levels for `aci_model = "custom"`.
    pub aci_custom: Vec<AciStep>,
    // channel model
    pub pl0_db: f64,
    pub pathloss_exponent: f64,
    pub d0_m: f64,
    pub sigma_db: f64,
    pub penetration_db: f64,
    pub symmetric_shadowing: bool,
    // convoy
    pub d_avg_m: f64,
    pub d_min_m: f64,
    // harness
    pub reps: usize,
    pub seed: u64,
    pub algorithms: Vec<AlgoConfig>,
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum DuplexKey {
    Half,
    Full,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum AciModelKey {
    Gpp3,
    None,
    Custom,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct AciStep {
    pub max_offset: u32,
    pub ratio: f64,
}

/// One scheduler/power-controller pairing to evaluate.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields, default)]
pub struct AlgoConfig {
    pub scheduler: SchedulerKey,
    /// Interleaver width for `scheduler = "bis"`.
    pub w: usize,
    pub power: PowerKey,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig {
            scheduler: SchedulerKey::Bis,
            w: 1,
            power: PowerKey::Equal,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SchedulerKey {
    Bis,
    /// BIS with the interleaver width chosen per run to maximize the mean
    /// link count under equal power.
    BisOptW,
    Heuristic,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum PowerKey {
    Equal,
    Heuristic,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    T,
    F,
    N,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n: 20,
            f: 20,
            t: 2,
            sinr_threshold_db: 5.0,
            max_power_dbm: 24.0,
            initial_power_dbm: None,
            noise_dbm: -95.2,
            duplex: DuplexKey::Half,
            c_max: 100,
            beta_per_mw: None,
            aci_model: AciModelKey::Gpp3,
            aci_custom: Vec::new(),
            pl0_db: 63.3,
            pathloss_exponent: 1.77,
            d0_m: 10.0,
            sigma_db: 3.1,
            penetration_db: 10.0,
            symmetric_shadowing: true,
            d_avg_m: 48.6,
            d_min_m: 10.0,
            reps: 500,
            seed: 1,
            algorithms: vec![
                AlgoConfig {
                    scheduler: SchedulerKey::Bis,
                    w: 1,
                    power: PowerKey::Equal,
                },
                AlgoConfig {
                    scheduler: SchedulerKey::BisOptW,
                    w: 1,
                    power: PowerKey::Equal,
                },
                AlgoConfig {
                    scheduler: SchedulerKey::Heuristic,
                    w: 1,
                    power: PowerKey::Equal,
                },
                AlgoConfig {
                    scheduler: SchedulerKey::Bis,
                    w: 1,
                    power: PowerKey::Heuristic,
                },
            ],
            sweep: None,
        }
    }
}

impl SimConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: SimConfig =
            toml::from_str(text).map_err(|e| ConfigError::invalid(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.reps == 0 {
            return Err(ConfigError::invalid("reps must be at least 1"));
        }
        if self.aci_model == AciModelKey::Custom && self.aci_custom.is_empty() {
            return Err(ConfigError::invalid(
                "custom ACI model needs aci_custom levels",
            ));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(ConfigError::invalid("sweep values must be nonempty"));
            }
            if sweep.values.contains(&0) {
                return Err(ConfigError::invalid("sweep values must be positive"));
            }
        }
        if self.algorithms.is_empty() {
            return Err(ConfigError::invalid("need at least one algorithm entry"));
        }
        // Surface unit errors early rather than mid-run.
        self.raw_params(self.n, self.f, self.t).derive()?;
        let _ = v2vsim_core::AciMatrix::build(self.f.max(1), &self.aci())?;
        Ok(())
    }

    pub fn duplex(&self) -> Duplex {
        match self.duplex {
            DuplexKey::Half => Duplex::Half,
            DuplexKey::Full => Duplex::Full,
        }
    }

    pub fn aci(&self) -> AciModel {
        match self.aci_model {
            AciModelKey::Gpp3 => AciModel::Gpp3Mask,
            AciModelKey::None => AciModel::NoAci,
            AciModelKey::Custom => AciModel::CustomStep(
                self.aci_custom
                    .iter()
                    .map(|s| (s.max_offset, s.ratio))
                    .collect(),
            ),
        }
    }

    /// Problem constants for the given grid size (sweeps override one axis).
    pub fn raw_params(&self, n: usize, f: usize, t: usize) -> RawParams {
        RawParams {
            n,
            f,
            t,
            sinr_threshold_db: self.sinr_threshold_db,
            noise_dbm: self.noise_dbm,
            max_power_dbm: self.max_power_dbm,
            initial_power_dbm: self.initial_power_dbm,
            beta_per_mw: self.beta_per_mw,
            c_max: self.c_max,
            duplex: self.duplex(),
        }
    }

    pub fn channel_params(&self) -> ChannelParams {
        ChannelParams {
            pl0_db: self.pl0_db,
            exponent: self.pathloss_exponent,
            d0_m: self.d0_m,
            sigma_db: self.sigma_db,
            penetration_db: self.penetration_db,
            symmetric_shadowing: self.symmetric_shadowing,
        }
    }
}
