//! Block interleaver scheduler (BIS).
//!
//! A channel-oblivious baseline that needs only the grid dimensions and the
//! vehicles' position order. It packs the scheduled VUEs into as few
//! frequency slots as possible, spreads those slots evenly across the band
//! to keep adjacent-channel leakage down, and optionally permutes them with
//! a 3GPP-style block interleaver so that consecutive vehicle groups do not
//! sit on nearby frequencies.
//!
//! Scheduling more than `floor(N*T/2)` VUEs can never help a half-duplex
//! network (transmitters need listeners), so the number of scheduled VUEs is
//! `min(floor(N*T/2), N, F*T)`; when that is fewer than `N`, the scheduled
//! ids are spread evenly over the convoy.

use crate::error::ScheduleError;
use crate::schedule::Schedule;
use alloc::vec::Vec;

/// The derived quantities BIS plans with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisPlan {
    /// Number of VUEs scheduled.
    pub n_scheduled: usize,
    /// Number of frequency slots used.
    pub slots_used: usize,
    /// Selected frequency slots (0-based), already interleaved.
    pub freq_slots: Vec<usize>,
    /// Scheduled VUE ids (1-based), in placement order.
    pub vue_ids: Vec<u16>,
    /// Interleaver width the plan was built with.
    pub width: usize,
}

/// Round-half-up of the rational `p/q` (`q > 0`), in integers.
fn round_half_up(p: usize, q: usize) -> usize {
    (2 * p + q) / (2 * q)
}

/// Evenly spread `count` slots over `1..=f` (returned 1-based): the affine
/// map `1 + round((k-1)(F-1)/(count-1))`, which maximizes the minimum gap
/// between consecutive slots and always uses slots 1 and F.
pub fn bis_freq_slots(f: usize, count: usize) -> Result<Vec<usize>, ScheduleError> {
    if count > f {
        return Err(ScheduleError::DimensionMismatch {
            rows: count,
            cols: 1,
            f,
            t: 1,
        });
    }
    if count <= 1 {
        // Degenerate affine map: a single point.
        return Ok(if count == 0 {
            Vec::new()
        } else {
            alloc::vec![1]
        });
    }
    Ok((1..=count)
        .map(|k| 1 + round_half_up((k - 1) * (f - 1), count - 1))
        .collect())
}

/// Evenly spread `count` VUE ids over `1..=n` with the same affine map.
pub fn bis_vue_ids(n: usize, count: usize) -> Result<Vec<u16>, ScheduleError> {
    if count > n {
        return Err(ScheduleError::DimensionMismatch {
            rows: count,
            cols: 1,
            f: n,
            t: 1,
        });
    }
    if count <= 1 {
        return Ok(if count == 0 {
            Vec::new()
        } else {
            alloc::vec![1]
        });
    }
    Ok((1..=count)
        .map(|k| (1 + round_half_up((k - 1) * (n - 1), count - 1)) as u16)
        .collect())
}

/// Block interleaver: write `v` row-wise into a matrix of width `w`
/// (zero-padding the tail), read it back column-wise skipping the padding.
/// Width 1 is the identity.
pub fn block_interleave<T: Copy>(v: &[T], w: usize) -> Vec<T> {
    debug_assert!(w >= 1);
    let mut out = Vec::with_capacity(v.len());
    for col in 0..w {
        let mut idx = col;
        while idx < v.len() {
            out.push(v[idx]);
            idx += w;
        }
    }
    out
}

/// Compute the BIS plan for an `n`-VUE convoy on an `f`×`t` grid.
pub fn bis_plan(n: usize, f: usize, t: usize, width: usize) -> BisPlan {
    let n_scheduled = ((t * n) / 2).min(n).min(f * t);
    let slots_used = n_scheduled.div_ceil(t);
    let slots = bis_freq_slots(f, slots_used).expect("slots_used <= f");
    let freq_slots: Vec<usize> = block_interleave(&slots, width.max(1))
        .into_iter()
        .map(|s| s - 1)
        .collect();
    let vue_ids = bis_vue_ids(n, n_scheduled).expect("n_scheduled <= n");
    BisPlan {
        n_scheduled,
        slots_used,
        freq_slots,
        vue_ids,
        width: width.max(1),
    }
}

/// Run BIS: fill the selected (interleaved) rows of the grid left to right
/// with the scheduled ids in order.
pub fn bis_schedule(n: usize, f: usize, t: usize, width: usize) -> Schedule {
    let plan = bis_plan(n, f, t, width);
    let mut schedule = Schedule::empty(n, f, t);
    let mut next = 0;
    for &row in &plan.freq_slots {
        for tt in 0..t {
            if next < plan.vue_ids.len() {
                schedule.set(row, tt, plan.vue_ids[next]);
                next += 1;
            }
        }
    }
    schedule
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::Mat2;

    #[test]
    fn freq_slots_worked_example() {
        assert_eq!(bis_freq_slots(6, 3).unwrap(), alloc::vec![1, 4, 6]);
    }

    #[test]
    fn freq_slots_degenerate_single() {
        assert_eq!(bis_freq_slots(5, 1).unwrap(), alloc::vec![1]);
    }

    #[test]
    fn freq_slots_wide_grid() {
        assert_eq!(
            bis_freq_slots(20, 10).unwrap(),
            alloc::vec![1, 3, 5, 7, 9, 12, 14, 16, 18, 20]
        );
    }

    #[test]
    fn freq_slots_reject_overfull() {
        assert!(bis_freq_slots(3, 4).is_err());
    }

    #[test]
    fn freq_slots_maximize_min_gap() {
        // Exhaustive check against every subset containing slots 1 and F.
        fn min_gap(slots: &[usize]) -> usize {
            slots.windows(2).map(|w| w[1] - w[0]).min().unwrap()
        }
        fn best_min_gap(f: usize, count: usize, chosen: &mut Vec<usize>, best: &mut usize) {
            if chosen.len() == count {
                if chosen[0] == 1 && *chosen.last().unwrap() == f {
                    *best = (*best).max(min_gap(chosen));
                }
                return;
            }
            let start = chosen.last().map_or(1, |&l| l + 1);
            for next in start..=f {
                chosen.push(next);
                best_min_gap(f, count, chosen, best);
                chosen.pop();
            }
        }
        for f in 2..=10 {
            for count in 2..=f {
                let ours = bis_freq_slots(f, count).unwrap();
                assert!(ours.windows(2).all(|w| w[1] > w[0]));
                assert_eq!(ours[0], 1);
                assert_eq!(*ours.last().unwrap(), f);
                let mut best = 0;
                best_min_gap(f, count, &mut Vec::new(), &mut best);
                assert_eq!(min_gap(&ours), best, "F={f} count={count}");
            }
        }
    }

    #[test]
    fn vue_ids_identity_when_all_fit() {
        assert_eq!(bis_vue_ids(8, 8).unwrap(), (1..=8).collect::<Vec<u16>>());
    }

    #[test]
    fn vue_ids_endpoints_and_interior() {
        let ids = bis_vue_ids(25, 20).unwrap();
        assert_eq!(ids[0], 1);
        assert_eq!(ids[19], 25);
        // 1 + round(9 * 24 / 19) = 1 + round(11.368...) = 12
        assert_eq!(ids[9], 12);
    }

    #[test]
    fn interleaver_worked_examples() {
        assert_eq!(block_interleave(&[1, 4, 6], 2), alloc::vec![1, 6, 4]);
        assert_eq!(block_interleave(&[1, 4, 6], 1), alloc::vec![1, 4, 6]);
        assert_eq!(
            block_interleave(&[1, 2, 3, 4, 5], 2),
            alloc::vec![1, 3, 5, 2, 4]
        );
    }

    #[test]
    fn interleaver_is_a_permutation() {
        let v: Vec<usize> = (1..=17).collect();
        for w in 1..=6 {
            let mut out = block_interleave(&v, w);
            out.sort_unstable();
            assert_eq!(out, v);
        }
    }

    #[test]
    fn golden_8_vues_width_1() {
        let s = bis_schedule(8, 6, 3, 1);
        let expected = Mat2::from_rows(&[
            alloc::vec![1, 2, 3],
            alloc::vec![0, 0, 0],
            alloc::vec![0, 0, 0],
            alloc::vec![4, 5, 6],
            alloc::vec![0, 0, 0],
            alloc::vec![7, 8, 0],
        ]);
        assert_eq!(s.grid(), &expected);
        let x = s.to_x();
        assert_eq!(x.count_ones(), 8);
        for i in 0..8 {
            let ones = (0..6)
                .flat_map(|f| (0..3).map(move |t| (f, t)))
                .filter(|&(f, t)| x.get(i, f, t))
                .count();
            assert_eq!(ones, 1);
        }
    }

    #[test]
    fn golden_8_vues_width_2() {
        let s = bis_schedule(8, 6, 3, 2);
        let expected = Mat2::from_rows(&[
            alloc::vec![1, 2, 3],
            alloc::vec![0, 0, 0],
            alloc::vec![0, 0, 0],
            alloc::vec![7, 8, 0],
            alloc::vec![0, 0, 0],
            alloc::vec![4, 5, 6],
        ]);
        assert_eq!(s.grid(), &expected);
    }

    #[test]
    fn half_of_n_when_single_timeslot() {
        // T = 1: scheduling more than half the convoy only adds leakage.
        let plan = bis_plan(20, 20, 1, 1);
        assert_eq!(plan.n_scheduled, 10);
        assert_eq!(plan.vue_ids.len(), 10);
        let s = bis_schedule(20, 20, 1, 1);
        assert_eq!(s.placements(), 10);
    }

    #[test]
    fn deterministic_and_channel_free() {
        let a = bis_schedule(11, 7, 2, 3);
        let b = bis_schedule(11, 7, 2, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn single_vue_edge_cases() {
        // One VUE and one timeslot: nobody could listen, nothing scheduled.
        assert_eq!(bis_schedule(1, 3, 1, 1).placements(), 0);
        // With two timeslots the lone VUE gets one RB.
        assert_eq!(bis_schedule(1, 3, 2, 1).placements(), 1);
    }

    #[test]
    fn every_plan_respects_one_rb_per_timeslot() {
        for (n, f, t, w) in [(8, 6, 3, 2), (20, 20, 2, 5), (5, 2, 4, 1), (9, 3, 3, 2)] {
            let s = bis_schedule(n, f, t, w);
            // from_grid revalidates the uniqueness invariant
            assert!(Schedule::from_grid(n, s.grid().clone()).is_ok());
        }
    }
}
