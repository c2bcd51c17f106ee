//! Link success determination.
//!
//! A wanted link `(i, j)` succeeds when the link SINR clears the threshold
//! in at least one timeslot — and, for half-duplex radios, receiver `j` is
//! silent throughout that timeslot. Success is recorded once per ordered
//! pair no matter how many RBs would have worked.

use crate::aci::AciMatrix;
use crate::channel::ChannelMatrix;
use crate::links::LinkSets;
use crate::params::{Duplex, Params};
use crate::schedule::{PowerMatrix, Schedule};
use crate::sinr::TimeslotSinr;
use alloc::vec;
use alloc::vec::Vec;

/// Realized link successes of one evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessMatrix {
    n: usize,
    f: usize,
    t: usize,
    z: Vec<bool>, // n*n, transmitter-major
    y: Vec<bool>, // n*f*t receiver-indexed marks at the first successful RB
}

impl SuccessMatrix {
    /// Whether link `i -> j` succeeded.
    #[inline]
    pub fn link(&self, i: usize, j: usize) -> bool {
        self.z[i * self.n + j]
    }

    /// Number of successful links from VUE `i`.
    pub fn links_from(&self, i: usize) -> usize {
        self.z[i * self.n..(i + 1) * self.n]
            .iter()
            .filter(|&&b| b)
            .count()
    }

    /// Total number of successful links.
    pub fn total_links(&self) -> usize {
        self.z.iter().filter(|&&b| b).count()
    }

    /// Whether receiver `j` decoded a packet in RB `(f, t)` (marked at the
    /// first successful RB of each link).
    #[inline]
    pub fn decoded(&self, j: usize, f: usize, t: usize) -> bool {
        self.y[(j * self.f + f) * self.t + t]
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Evaluate every wanted link of a schedule/power assignment.
pub fn success_matrix(
    schedule: &Schedule,
    power: &PowerMatrix,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
    params: &Params,
) -> SuccessMatrix {
    let (n, f, t) = (schedule.n(), schedule.f(), schedule.t());
    let mut z = vec![false; n * n];
    let mut y = vec![false; n * f * t];
    for tt in 0..t {
        let eval = TimeslotSinr::new(schedule, power, h, aci, params.noise_mw, tt);
        for &(i, f_i) in eval.active() {
            for &j in links.receivers_of(i) {
                if z[i * n + j] {
                    continue; // count each pair once, keep the earliest RB
                }
                if params.duplex == Duplex::Half && schedule.transmits_in(j, tt) {
                    continue; // half-duplex: j cannot listen while sending
                }
                if eval.link_sinr(i, j) >= params.sinr_threshold {
                    z[i * n + j] = true;
                    y[(j * f + f_i) * t + tt] = true;
                }
            }
        }
    }
    SuccessMatrix { n, f, t, z, y }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aci::AciModel;
    use crate::channel::DiagonalMode;
    use crate::mat::Mat2;
    use crate::params::RawParams;

    fn strong_pair(duplex: Duplex) -> (ChannelMatrix, AciMatrix, LinkSets, Params) {
        let mut gains = Mat2::filled(2, 2, 0.0);
        gains[(0, 1)] = 1e-6;
        gains[(1, 0)] = 1e-6;
        let h = ChannelMatrix::from_gains(gains, DiagonalMode::HalfDuplexZeroDiagonal);
        let aci = AciMatrix::build(2, &AciModel::Gpp3Mask).unwrap();
        let links = LinkSets::from_transmitter_sets(alloc::vec![alloc::vec![1], alloc::vec![0]]);
        let mut raw = RawParams::benchmark(2, 2, 2);
        raw.duplex = duplex;
        (h, aci, links, raw.derive().unwrap())
    }

    #[test]
    fn all_silent_means_no_links() {
        let (h, aci, links, params) = strong_pair(Duplex::Half);
        let schedule = Schedule::empty(2, 2, 2);
        let power = PowerMatrix::uniform(2, 2, params.max_power_mw).unwrap();
        let s = success_matrix(&schedule, &power, &h, &aci, &links, &params);
        assert_eq!(s.total_links(), 0);
    }

    #[test]
    fn half_duplex_blocks_simultaneous_pairs() {
        // Both VUEs transmit in the sole timeslot: nobody can listen,
        // regardless of channel gains.
        let (h, aci, links, params) = strong_pair(Duplex::Half);
        let mut grid = Mat2::filled(2, 1, 0u16);
        grid[(0, 0)] = 1;
        grid[(1, 0)] = 2;
        let schedule = Schedule::from_grid(2, grid).unwrap();
        let power = PowerMatrix::uniform(2, 1, params.max_power_mw).unwrap();
        let s = success_matrix(&schedule, &power, &h, &aci, &links, &params);
        assert_eq!(s.total_links(), 0);
    }

    #[test]
    fn split_timeslots_connect_both_ways() {
        let (h, aci, links, params) = strong_pair(Duplex::Half);
        let mut grid = Mat2::filled(1, 2, 0u16);
        grid[(0, 0)] = 1;
        grid[(0, 1)] = 2;
        let schedule = Schedule::from_grid(2, grid).unwrap();
        let power = PowerMatrix::uniform(2, 2, params.max_power_mw).unwrap();
        let s = success_matrix(&schedule, &power, &h, &aci, &links, &params);
        assert!(s.link(0, 1) && s.link(1, 0));
        assert_eq!(s.total_links(), 2);
        assert!(s.decoded(1, 0, 0));
        assert!(s.decoded(0, 0, 1));
    }

    #[test]
    fn scaling_powers_and_noise_leaves_success_unchanged() {
        // SINR is a ratio: scaling every power and the noise floor by the
        // same factor changes nothing.
        let (h, aci, links, params) = strong_pair(Duplex::Half);
        let mut grid = Mat2::filled(2, 2, 0u16);
        grid[(0, 0)] = 1;
        grid[(1, 1)] = 2;
        let schedule = Schedule::from_grid(2, grid).unwrap();
        let power = PowerMatrix::uniform(2, 2, params.max_power_mw).unwrap();
        let base = success_matrix(&schedule, &power, &h, &aci, &links, &params);
        for c in [1e-3, 7.5, 1e4] {
            let scaled_power = PowerMatrix::uniform(2, 2, params.max_power_mw * c).unwrap();
            let mut scaled = params.clone();
            scaled.noise_mw *= c;
            let s = success_matrix(&schedule, &scaled_power, &h, &aci, &links, &scaled);
            assert_eq!(s, base);
        }
    }

    #[test]
    fn deterministic_and_boolean() {
        let (h, aci, links, params) = strong_pair(Duplex::Half);
        let mut grid = Mat2::filled(1, 2, 0u16);
        grid[(0, 0)] = 1;
        grid[(0, 1)] = 2;
        let schedule = Schedule::from_grid(2, grid).unwrap();
        let power = PowerMatrix::uniform(2, 2, params.max_power_mw).unwrap();
        let a = success_matrix(&schedule, &power, &h, &aci, &links, &params);
        let b = success_matrix(&schedule, &power, &h, &aci, &links, &params);
        assert_eq!(a, b);
        for i in 0..2 {
            assert!(!a.link(i, i));
        }
    }
}
