//! Link-level simulator and resource allocators for V2V broadcast
//! communication under co-channel and adjacent-channel interference.
//!
//! A convoy of `N` vehicles (VUEs) broadcasts periodic safety messages over a
//! grid of `F` frequency slots by `T` timeslots (resource blocks). Each VUE
//! transmits in at most one RB per timeslot; a link succeeds when its SINR
//! clears a threshold. Adjacent-channel leakage couples transmissions on
//! different frequency slots within a timeslot, which makes scheduling and
//! power control interact in ways a co-channel-only model misses.
//!
//! The crate provides, in rough dependency order:
//!
//! - scenario generation: convoy layouts, channel gains (pathloss, shadowing,
//!   blocker penetration) and inverse-ACIR leakage matrices ([`convoy`],
//!   [`channel`], [`aci`], [`links`]);
//! - the allocation grid and power representations ([`schedule`]);
//! - SINR computation (RB-centric and link-centric), link success and
//!   connectivity metrics ([`sinr`], [`success`], [`metrics`]);
//! - schedulers: the channel-oblivious block interleaver scheduler and a
//!   greedy channel-aware heuristic ([`bis`], [`greedy`]);
//! - power controllers: equal power and an iterative SINR-target heuristic
//!   ([`power`]);
//! - desk-scale exhaustive oracles for schedules, power grids and the joint
//!   problem ([`exact`]).
//!
//! Everything is deterministic given explicit seeds, allocates up front and
//! holds no global state, so values can be shared freely across threads.
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature and enable `libm` for the float math.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("v2vsim-core requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod aci;
pub mod bis;
pub mod channel;
pub mod convoy;
pub mod error;
pub mod exact;
pub mod greedy;
pub mod links;
mod mat;
mod math;
pub mod metrics;
pub mod params;
pub mod power;
pub mod schedule;
pub mod sinr;
pub mod success;
pub mod units;

pub use aci::{AciMatrix, AciModel};
pub use channel::{ChannelMatrix, ChannelParams, DiagonalMode};
pub use convoy::ConvoyScenario;
pub use error::{ConfigError, ExactError, PowerError, ScheduleError};
pub use exact::{ExactConfig, ExactOutcome, Objective};
pub use links::LinkSets;
pub use mat::Mat2;
pub use metrics::{metrics, MetricsReport, ReplicationOutcome};
pub use params::{Duplex, Params, RawParams};
pub use power::{equal_power, heuristic_power, PowerControlRun};
pub use schedule::{u_to_x, PowerMatrix, Schedule};
pub use success::{success_matrix, SuccessMatrix};
