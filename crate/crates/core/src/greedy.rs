//! Channel-aware greedy scheduler.
//!
//! Two stages. First the frequency slots are ordered so that each newly
//! visited slot receives the least leakage from the slots already in use
//! (ties prefer the slot farthest on average from the used ones, then the
//! highest slot). Then the RBs are visited in that order, timeslot by
//! timeslot within each slot, and for every RB the candidate whose placement
//! maximizes the total number of successful links is committed — including
//! the "leave it empty" candidate, which wins ties so that nothing transmits
//! without paying for itself.
//!
//! Candidate evaluation assumes every scheduled VUE transmits at the same
//! given power. Only the timeslot under edit needs re-evaluation per
//! candidate; a full re-evaluation mode exists to cross-check that shortcut.

use crate::aci::AciMatrix;
use crate::channel::ChannelMatrix;
use crate::links::LinkSets;
use crate::params::{Duplex, Params};
use crate::schedule::{PowerMatrix, Schedule};
use crate::sinr::TimeslotSinr;
use alloc::vec;
use alloc::vec::Vec;

/// Greedy frequency-slot visit order (0-based slots).
///
/// Starts from slot 0; each next slot minimizes the summed leakage received
/// from the already chosen slots, assuming unit power and unit gain from
/// every interferer.
pub fn scheduling_order(f: usize, aci: &AciMatrix) -> Vec<usize> {
    let mut chosen = Vec::with_capacity(f);
    chosen.push(0);
    let mut remaining: Vec<usize> = (1..f).collect();
    while !remaining.is_empty() {
        let leakage_into =
            |cand: usize| -> f64 { chosen.iter().map(|&c| aci.leakage(c, cand)).sum() };
        let min_leak = remaining
            .iter()
            .map(|&cand| leakage_into(cand))
            .fold(f64::INFINITY, f64::min);
        let distance = |cand: usize| -> usize { chosen.iter().map(|&c| c.abs_diff(cand)).sum() };
        let best = remaining
            .iter()
            .copied()
            .filter(|&cand| leakage_into(cand) == min_leak)
            .max_by_key(|&cand| (distance(cand), cand))
            .expect("remaining is nonempty");
        chosen.push(best);
        remaining.retain(|&cand| cand != best);
    }
    chosen
}

/// How candidate placements are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Re-evaluate only the timeslot under edit, reusing cached per-link
    /// results for the others.
    Incremental,
    /// Re-evaluate every timeslot for every candidate (slow; cross-check).
    FullRecompute,
}

/// Greedy scheduler at equal candidate power `p_bar_mw`.
pub fn heuristic_schedule(
    params: &Params,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
    p_bar_mw: f64,
) -> Schedule {
    heuristic_schedule_with_mode(params, h, aci, links, p_bar_mw, EvalMode::Incremental)
}

pub fn heuristic_schedule_with_mode(
    params: &Params,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
    p_bar_mw: f64,
    mode: EvalMode,
) -> Schedule {
    let (n, f, t) = (params.n, params.f, params.t);
    assert!(
        t <= 64,
        "per-link success cache uses a 64-bit timeslot mask"
    );
    let power = PowerMatrix::uniform(n, t, p_bar_mw).expect("nonnegative candidate power");
    let mut schedule = Schedule::empty(n, f, t);
    // Per ordered pair: bitmask of timeslots in which the link succeeds
    // under the committed partial schedule.
    let mut success = vec![0u64; n * n];
    let mut scheduled_somewhere = vec![false; n];

    for &row in &scheduling_order(f, aci) {
        for tt in 0..t {
            let bit = 1u64 << tt;
            let committed_elsewhere = success.iter().filter(|&&m| m & !bit != 0).count();

            let mut scores = Vec::with_capacity(n + 1);
            for cand in 0..=n as u16 {
                // A VUE already holding an RB in this timeslot is not a
                // candidate for a second one.
                if cand != 0 && schedule.transmits_in(cand as usize - 1, tt) {
                    scores.push(None);
                    continue;
                }
                schedule.set(row, tt, cand);
                let score = match mode {
                    EvalMode::Incremental => {
                        let slice = eval_timeslot(&schedule, &power, h, aci, links, params, tt);
                        committed_elsewhere
                            + slice
                                .iter()
                                .filter(|&&link| success[link] & !bit == 0)
                                .count()
                    }
                    EvalMode::FullRecompute => {
                        let mut total = 0usize;
                        let mut seen = vec![0u64; n * n];
                        for t2 in 0..t {
                            for link in eval_timeslot(&schedule, &power, h, aci, links, params, t2)
                            {
                                if seen[link] == 0 {
                                    total += 1;
                                }
                                seen[link] |= 1 << t2;
                            }
                        }
                        total
                    }
                };
                scores.push(Some(score));
                schedule.set(row, tt, 0);
            }

            let best_score = scores.iter().flatten().copied().max().unwrap_or(0);
            // Empty wins ties; among real candidates prefer one not yet
            // scheduled anywhere, then the lowest id.
            let winner = if scores[0] == Some(best_score) {
                0u16
            } else {
                let tied = || (1..=n as u16).filter(|&c| scores[c as usize] == Some(best_score));
                tied()
                    .find(|&c| !scheduled_somewhere[c as usize - 1])
                    .unwrap_or_else(|| tied().next().expect("some candidate attains the max"))
            };

            if winner != 0 {
                schedule.set(row, tt, winner);
                scheduled_somewhere[winner as usize - 1] = true;
            }
            // Refresh the cached slice for this timeslot.
            for mask in success.iter_mut() {
                *mask &= !bit;
            }
            for link in eval_timeslot(&schedule, &power, h, aci, links, params, tt) {
                success[link] |= bit;
            }
        }
    }
    schedule
}

/// Links (as `i*n + j` indices) that succeed in timeslot `tt` under the
/// given schedule.
fn eval_timeslot(
    schedule: &Schedule,
    power: &PowerMatrix,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
    params: &Params,
    tt: usize,
) -> Vec<usize> {
    let n = schedule.n();
    let eval = TimeslotSinr::new(schedule, power, h, aci, params.noise_mw, tt);
    let mut out = Vec::new();
    for &(i, _) in eval.active() {
        for &j in links.receivers_of(i) {
            if params.duplex == Duplex::Half && schedule.transmits_in(j, tt) {
                continue;
            }
            if eval.link_sinr(i, j) >= params.sinr_threshold {
                out.push(i * n + j);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aci::AciModel;
    use crate::channel::ChannelParams;
    use crate::convoy::ConvoyScenario;
    use crate::params::RawParams;
    use crate::success::success_matrix;

    #[test]
    fn order_degenerate_cases() {
        let a1 = AciMatrix::build(1, &AciModel::Gpp3Mask).unwrap();
        assert_eq!(scheduling_order(1, &a1), alloc::vec![0]);
        let a2 = AciMatrix::build(2, &AciModel::Gpp3Mask).unwrap();
        assert_eq!(scheduling_order(2, &a2), alloc::vec![0, 1]);
    }

    #[test]
    fn order_six_slots_under_3gpp_mask() {
        // Hand-traced: the far edge first, then the ties resolve by average
        // distance and finally by the higher slot.
        let a = AciMatrix::build(6, &AciModel::Gpp3Mask).unwrap();
        let order_1based: Vec<usize> = scheduling_order(6, &a).iter().map(|s| s + 1).collect();
        assert_eq!(order_1based, alloc::vec![1, 6, 5, 2, 4, 3]);
    }

    fn benchmark_instance(
        n: usize,
        f: usize,
        t: usize,
    ) -> (Params, ChannelMatrix, AciMatrix, LinkSets) {
        let params = RawParams::benchmark(n, f, t).derive().unwrap();
        let scenario = ConvoyScenario::equally_spaced(n, 48.6);
        let channel_params = ChannelParams {
            sigma_db: 0.0,
            ..ChannelParams::highway()
        };
        let h = ChannelMatrix::generate(&scenario, &channel_params, params.duplex, 0).unwrap();
        let aci = AciMatrix::build(f, &AciModel::Gpp3Mask).unwrap();
        let links = LinkSets::intended_sets(&scenario, f, t);
        (params, h, aci, links)
    }

    #[test]
    fn unreachable_threshold_leaves_grid_empty() {
        let (mut params, h, aci, links) = benchmark_instance(4, 3, 2);
        params.noise_mw = 1e12; // nothing can clear the threshold
        let s = heuristic_schedule(&params, &h, &aci, &links, params.max_power_mw);
        assert_eq!(s.placements(), 0);
    }

    #[test]
    fn two_vues_split_the_timeslots() {
        let (params, h, aci, links) = benchmark_instance(2, 1, 2);
        let s = heuristic_schedule(&params, &h, &aci, &links, params.max_power_mw);
        let power = PowerMatrix::uniform(2, 2, params.max_power_mw).unwrap();
        let z = success_matrix(&s, &power, &h, &aci, &links, &params);
        assert_eq!(z.total_links(), 2);
        // one VUE per timeslot
        assert_eq!(s.transmitters(0).len(), 1);
        assert_eq!(s.transmitters(1).len(), 1);
        assert_ne!(s.transmitters(0), s.transmitters(1));
    }

    #[test]
    fn eight_vue_grid_keeps_spread_rows_and_beats_bis() {
        // Equal 48.6 m spacing, no shadowing, 6x3 grid.
        let (params, h, aci, links) = benchmark_instance(8, 6, 3);
        let s = heuristic_schedule(&params, &h, &aci, &links, params.max_power_mw);
        assert!(Schedule::from_grid(8, s.grid().clone()).is_ok());
        // First visited row of the published worked example.
        let first_row: Vec<u16> = (0..3).map(|t| s.grid()[(0, t)]).collect();
        assert_eq!(first_row, alloc::vec![4, 5, 3]);
        let power = PowerMatrix::uniform(8, 3, params.max_power_mw).unwrap();
        let greedy_links = success_matrix(&s, &power, &h, &aci, &links, &params).total_links();
        let bis = crate::bis::bis_schedule(8, 6, 3, 1);
        let bis_links = success_matrix(&bis, &power, &h, &aci, &links, &params).total_links();
        assert!(greedy_links >= bis_links, "{greedy_links} < {bis_links}");
    }

    #[test]
    fn incremental_matches_full_recompute() {
        for seed in 0..8u64 {
            let n = 3 + (seed as usize % 4);
            let f = 2 + (seed as usize % 3);
            let t = 1 + (seed as usize % 3);
            let params = RawParams::benchmark(n, f, t).derive().unwrap();
            let scenario = ConvoyScenario::sample(n, 10.0, 48.6, seed).unwrap();
            let h = ChannelMatrix::generate(
                &scenario,
                &ChannelParams::highway(),
                params.duplex,
                seed ^ 0xabcd,
            )
            .unwrap();
            let aci = AciMatrix::build(f, &AciModel::Gpp3Mask).unwrap();
            let links = LinkSets::intended_sets(&scenario, f, t);
            let fast = heuristic_schedule_with_mode(
                &params,
                &h,
                &aci,
                &links,
                params.max_power_mw,
                EvalMode::Incremental,
            );
            let slow = heuristic_schedule_with_mode(
                &params,
                &h,
                &aci,
                &links,
                params.max_power_mw,
                EvalMode::FullRecompute,
            );
            assert_eq!(fast, slow, "seed {seed}");
        }
    }

    #[test]
    fn committed_score_never_below_empty() {
        // The dummy candidate is always available, so every commitment keeps
        // the running link count non-decreasing.
        let (params, h, aci, links) = benchmark_instance(6, 4, 2);
        let s = heuristic_schedule(&params, &h, &aci, &links, params.max_power_mw);
        let power = PowerMatrix::uniform(6, 2, params.max_power_mw).unwrap();
        let full = success_matrix(&s, &power, &h, &aci, &links, &params).total_links();
        let empty = success_matrix(&Schedule::empty(6, 4, 2), &power, &h, &aci, &links, &params)
            .total_links();
        assert!(full >= empty);
    }

    #[test]
    fn respects_one_rb_per_timeslot_even_when_repeating_vues() {
        let (params, h, aci, links) = benchmark_instance(3, 4, 2);
        let s = heuristic_schedule(&params, &h, &aci, &links, params.max_power_mw);
        assert!(Schedule::from_grid(3, s.grid().clone()).is_ok());
    }
}
