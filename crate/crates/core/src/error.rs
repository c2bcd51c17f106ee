//! Error types shared across the crate.

use alloc::string::String;

/// Invalid configuration input (dimensions, units, distribution parameters).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),
}

impl ConfigError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        ConfigError::Invalid(msg.into())
    }
}

/// Malformed allocation grid.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleError {
    #[error("VUE id {id} out of range (N = {n})")]
    VueOutOfRange { id: u16, n: usize },
    #[error("VUE {id} scheduled more than once in timeslot {t}")]
    DuplicateInTimeslot { id: u16, t: usize },
    #[error("grid is {rows}x{cols}, expected {f}x{t}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        f: usize,
        t: usize,
    },
}

/// Power-control failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PowerError {
    #[error("power {value} mW outside [0, {max} mW]")]
    OutOfRange { value: f64, max: f64 },
    #[error("initial power must be positive when candidate links exist")]
    ZeroInitialPower,
    #[error("iteration count exceeded the convergence bound {bound}")]
    ConvergenceBoundExceeded { bound: u64 },
}

/// Exhaustive-search oracle refusals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("instance too large for exhaustive search: ~{estimate} evaluations (cap {cap})")]
    InstanceTooLarge { estimate: u128, cap: u128 },
    #[error("power grid needs at least two levels, got {0}")]
    GridTooSmall(usize),
}
