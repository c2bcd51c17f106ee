//! SINR computation.
//!
//! Two views of the same radio environment:
//!
//! - the RB-centric form asks what receiver `j` sees in a given RB: desired
//!   power from its intended transmitters on that slot, co-channel power
//!   from everyone else on the slot, and adjacent-channel leakage from every
//!   transmitter on the other slots of the timeslot;
//! - the link-centric form asks how a specific transmitter-receiver pair
//!   fares in a timeslot: the transmitter occupies at most one RB there, and
//!   every other active VUE interferes through the leakage matrix (same-slot
//!   leakage being 1, i.e. plain co-channel interference).
//!
//! When exactly one intended transmitter of `j` occupies the RB, the two
//! views coincide; the link-centric value is what the schedulers, the power
//! controller and the success evaluation all consume.

use crate::aci::AciMatrix;
use crate::channel::ChannelMatrix;
use crate::links::LinkSets;
use crate::schedule::{PowerMatrix, Schedule};
use alloc::vec::Vec;

/// Desired signal and interference power (mW) received by VUE `j` in RB
/// `(f, t)`. The signal sums the intended transmitters scheduled on the RB;
/// the interference sums co-channel power from unintended VUEs plus leakage
/// from every transmitter on other frequency slots of the timeslot.
#[allow(clippy::too_many_arguments)]
pub fn rb_signal_interference(
    j: usize,
    f: usize,
    t: usize,
    schedule: &Schedule,
    power: &PowerMatrix,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
) -> (f64, f64) {
    let mut signal = 0.0;
    for &i in links.transmitters_of(j) {
        if schedule.is_scheduled(i, f, t) {
            signal += power.get(i, t) * h.gain(i, j);
        }
    }
    let mut interference = 0.0;
    // Co-channel power from VUEs outside the intended set (self included).
    for k in 0..schedule.n() {
        if !links.is_intended(k, j) && schedule.is_scheduled(k, f, t) {
            interference += power.get(k, t) * h.gain(k, j);
        }
    }
    // Leakage from every transmitter on the other frequency slots.
    for fp in 0..schedule.f() {
        if fp == f {
            continue;
        }
        for k in 0..schedule.n() {
            if schedule.is_scheduled(k, fp, t) {
                interference += aci.leakage(fp, f) * power.get(k, t) * h.gain(k, j);
            }
        }
    }
    (signal, interference)
}

/// RB-centric SINR of receiver `j` in RB `(f, t)`.
#[allow(clippy::too_many_arguments)]
pub fn rb_sinr(
    j: usize,
    f: usize,
    t: usize,
    schedule: &Schedule,
    power: &PowerMatrix,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
    noise_mw: f64,
) -> f64 {
    let (s, i) = rb_signal_interference(j, f, t, schedule, power, h, aci, links);
    s / (noise_mw + i)
}

/// Link-centric SINR of the pair `(i, j)` during timeslot `t`; zero when `i`
/// does not transmit in `t`.
#[allow(clippy::too_many_arguments)]
pub fn link_sinr(
    i: usize,
    j: usize,
    t: usize,
    schedule: &Schedule,
    power: &PowerMatrix,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    noise_mw: f64,
) -> f64 {
    TimeslotSinr::new(schedule, power, h, aci, noise_mw, t).link_sinr(i, j)
}

/// Batched link-SINR evaluation for one timeslot.
///
/// Caches the active transmitter list and each transmitter's received power
/// at every VUE, so a link SINR costs one pass over the active set. The
/// interference sum skips the transmitter itself rather than subtracting its
/// contribution, which keeps the value exact even when the desired signal
/// dominates the total.
pub struct TimeslotSinr<'a> {
    n: usize,
    active: Vec<(usize, usize)>, // (vue 0-based, freq), frequency order
    rx_power: Vec<f64>,          // active_idx * n + j -> P_k * H_{k,j}
    slot_of: Vec<Option<u32>>,   // vue -> active index
    aci: &'a AciMatrix,
    noise_mw: f64,
}

impl<'a> TimeslotSinr<'a> {
    pub fn new(
        schedule: &Schedule,
        power: &PowerMatrix,
        h: &ChannelMatrix,
        aci: &'a AciMatrix,
        noise_mw: f64,
        t: usize,
    ) -> Self {
        let n = schedule.n();
        let active = schedule.transmitters(t);
        let mut rx_power = Vec::with_capacity(active.len() * n);
        let mut slot_of = alloc::vec![None; n];
        for (idx, &(k, _)) in active.iter().enumerate() {
            slot_of[k] = Some(idx as u32);
            let p = power.get(k, t);
            for j in 0..n {
                rx_power.push(p * h.gain(k, j));
            }
        }
        TimeslotSinr {
            n,
            active,
            rx_power,
            slot_of,
            aci,
            noise_mw,
        }
    }

    /// Active transmitters of the timeslot as `(vue, freq)` pairs.
    pub fn active(&self) -> &[(usize, usize)] {
        &self.active
    }

    /// Whether VUE `i` transmits in this timeslot.
    pub fn is_active(&self, i: usize) -> bool {
        self.slot_of[i].is_some()
    }

    /// SINR of link `(i, j)`; zero when `i` is silent here.
    pub fn link_sinr(&self, i: usize, j: usize) -> f64 {
        let Some(idx) = self.slot_of[i] else {
            return 0.0;
        };
        let idx = idx as usize;
        let f_i = self.active[idx].1;
        let signal = self.rx_power[idx * self.n + j];
        let mut denom = self.noise_mw;
        for (kdx, &(k, f_k)) in self.active.iter().enumerate() {
            if k != i {
                denom += self.aci.leakage(f_k, f_i) * self.rx_power[kdx * self.n + j];
            }
        }
        signal / denom
    }
}
