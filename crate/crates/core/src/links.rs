//! Intended transmitter and receiver sets.
//!
//! Every VUE wants to reach the vehicles around it. With a grid of `F*T`
//! RBs the evaluation restricts each receiver `j` to the closest
//! `min(N-1, F*T-1)` transmitters; the receiver sets follow by reciprocity
//! (`j` listens to `i` exactly when `i` targets `j`).

use crate::convoy::ConvoyScenario;
use alloc::vec;
use alloc::vec::Vec;

/// Per-VUE intended sets, 0-based VUE indices, ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkSets {
    transmitters_of: Vec<Vec<usize>>,
    receivers_of: Vec<Vec<usize>>,
    intended: Vec<bool>, // n*n row-major: i -> j is a wanted link
    n: usize,
}

impl LinkSets {
    /// Choose each receiver's transmitter set as its `min(N-1, F*T-1)`
    /// nearest vehicles; distance ties break toward the lower VUE index.
    pub fn intended_sets(scenario: &ConvoyScenario, f: usize, t: usize) -> Self {
        let n = scenario.n();
        let keep = (n - 1).min(f * t - 1);
        let mut transmitters_of = vec![Vec::new(); n];
        for (j, slot) in transmitters_of.iter_mut().enumerate() {
            let mut candidates: Vec<usize> = (0..n).filter(|&i| i != j).collect();
            candidates.sort_by(|&a, &b| {
                scenario
                    .distance(a, j)
                    .partial_cmp(&scenario.distance(b, j))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            candidates.truncate(keep);
            candidates.sort_unstable();
            *slot = candidates;
        }
        Self::from_transmitter_sets(transmitters_of)
    }

    /// Build from explicit transmitter sets; receiver sets are derived by
    /// reciprocity.
    pub fn from_transmitter_sets(transmitters_of: Vec<Vec<usize>>) -> Self {
        let n = transmitters_of.len();
        let mut receivers_of = vec![Vec::new(); n];
        let mut intended = vec![false; n * n];
        for (j, txs) in transmitters_of.iter().enumerate() {
            for &i in txs {
                debug_assert!(i != j && i < n);
                receivers_of[i].push(j);
                intended[i * n + j] = true;
            }
        }
        for r in &mut receivers_of {
            r.sort_unstable();
        }
        LinkSets {
            transmitters_of,
            receivers_of,
            intended,
            n,
        }
    }

    /// Unicast restriction: each VUE keeps only its nearest receiver.
    pub fn unicast(scenario: &ConvoyScenario) -> Self {
        let n = scenario.n();
        let mut transmitters_of = vec![Vec::new(); n];
        for i in 0..n {
            let j = (0..n)
                .filter(|&j| j != i)
                .min_by(|&a, &b| {
                    scenario
                        .distance(i, a)
                        .partial_cmp(&scenario.distance(i, b))
                        .unwrap()
                        .then(a.cmp(&b))
                })
                .expect("n >= 2");
            transmitters_of[j].push(i);
        }
        Self::from_transmitter_sets(transmitters_of)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// VUEs that receiver `j` wants to hear from.
    pub fn transmitters_of(&self, j: usize) -> &[usize] {
        &self.transmitters_of[j]
    }

    /// VUEs that transmitter `i` wants to reach.
    pub fn receivers_of(&self, i: usize) -> &[usize] {
        &self.receivers_of[i]
    }

    /// Whether `i -> j` is a wanted link.
    #[inline]
    pub fn is_intended(&self, i: usize, j: usize) -> bool {
        self.intended[i * self.n + j]
    }

    /// Total number of wanted links.
    pub fn link_count(&self) -> usize {
        self.receivers_of.iter().map(Vec::len).sum()
    }
}
