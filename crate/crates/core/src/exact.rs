//! Desk-scale exhaustive oracles.
//!
//! Exact maximizers over tiny instances, used to certify the heuristics and
//! acceptance-test the rest of the crate: full enumeration of allocation
//! grids at fixed power, grid search over discretized power levels at a
//! fixed schedule, and the nested combination. Powers are drawn from an
//! evenly spaced lattice including 0 and the cap, so the power results are
//! lattice optima rather than continuous ones.
//!
//! Each search refuses instances whose enumeration estimate exceeds a cap
//! instead of grinding forever. Ties resolve deterministically: the
//! row-major-smallest grid first, then the lexicographically smallest power
//! matrix.

use crate::aci::AciMatrix;
use crate::channel::ChannelMatrix;
use crate::error::ExactError;
use crate::links::LinkSets;
use crate::params::Params;
use crate::schedule::{PowerMatrix, Schedule};
use crate::success::{success_matrix, SuccessMatrix};
use alloc::vec::Vec;

/// What the oracles maximize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Total number of successful links.
    SumLinks,
    /// The worst per-VUE link count.
    MaxMin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactConfig {
    pub objective: Objective,
    /// Power lattice size (including 0 and the cap).
    pub grid_levels: usize,
    /// Refuse searches whose enumeration estimate exceeds this.
    pub enumeration_cap: u128,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            objective: Objective::SumLinks,
            grid_levels: 8,
            enumeration_cap: 100_000_000,
        }
    }
}

/// An oracle result: the maximizer and its score.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactOutcome {
    pub schedule: Schedule,
    pub power: PowerMatrix,
    /// Link objective at the optimum (total links or min per-VUE count).
    pub objective_value: usize,
    pub total_power_mw: f64,
    /// Complete assignments evaluated.
    pub evaluations: u64,
}

fn score(success: &SuccessMatrix, objective: Objective) -> usize {
    match objective {
        Objective::SumLinks => success.total_links(),
        Objective::MaxMin => (0..success.n())
            .map(|i| success.links_from(i))
            .min()
            .unwrap_or(0),
    }
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    base.checked_pow(exp)
}

fn grid_estimate(n: usize, f: usize, t: usize) -> Option<u128> {
    checked_pow(n as u128 + 1, (f * t) as u32)
}

fn power_estimate(levels: usize, slots: usize) -> Option<u128> {
    checked_pow(levels as u128, slots as u32)
}

/// Exhaustive schedule search at fixed transmit powers.
pub fn exact_schedule(
    params: &Params,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
    fixed_power: &PowerMatrix,
    cfg: &ExactConfig,
) -> Result<ExactOutcome, ExactError> {
    let estimate =
        grid_estimate(params.n, params.f, params.t).ok_or(ExactError::InstanceTooLarge {
            estimate: u128::MAX,
            cap: cfg.enumeration_cap,
        })?;
    if estimate > cfg.enumeration_cap {
        return Err(ExactError::InstanceTooLarge {
            estimate,
            cap: cfg.enumeration_cap,
        });
    }

    let mut best: Option<(usize, Schedule, SuccessMatrix)> = None;
    let mut evaluations = 0u64;
    let mut schedule = Schedule::empty(params.n, params.f, params.t);
    enumerate_grids(params, &mut schedule, 0, &mut |s| {
        evaluations += 1;
        let success = success_matrix(s, fixed_power, h, aci, links, params);
        let value = score(&success, cfg.objective);
        if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
            best = Some((value, s.clone(), success));
        }
    });
    let (objective_value, schedule, _) = best.expect("at least the empty grid is evaluated");
    Ok(ExactOutcome {
        power: fixed_power.clone(),
        total_power_mw: fixed_power.total(),
        schedule,
        objective_value,
        evaluations,
    })
}

/// Visit every grid in row-major lexicographic order, pruning per-timeslot
/// duplicates as cells are assigned.
fn enumerate_grids(
    params: &Params,
    schedule: &mut Schedule,
    cell: usize,
    visit: &mut impl FnMut(&Schedule),
) {
    let (f, t) = (params.f, params.t);
    if cell == f * t {
        visit(schedule);
        return;
    }
    let (row, col) = (cell / t, cell % t);
    for id in 0..=params.n as u16 {
        if id != 0 && schedule.transmits_in(id as usize - 1, col) {
            continue;
        }
        schedule.set(row, col, id);
        enumerate_grids(params, schedule, cell + 1, visit);
        schedule.set(row, col, 0);
    }
}

/// Lattice search over transmit powers for a fixed schedule, maximizing the
/// link objective minus `beta * total power` (the weight is small enough
/// that power never buys a link).
pub fn exact_power(
    params: &Params,
    schedule: &Schedule,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
    cfg: &ExactConfig,
) -> Result<ExactOutcome, ExactError> {
    if cfg.grid_levels < 2 {
        return Err(ExactError::GridTooSmall(cfg.grid_levels));
    }
    let estimate = power_estimate(cfg.grid_levels, params.n * params.t).ok_or(
        ExactError::InstanceTooLarge {
            estimate: u128::MAX,
            cap: cfg.enumeration_cap,
        },
    )?;
    if estimate > cfg.enumeration_cap {
        return Err(ExactError::InstanceTooLarge {
            estimate,
            cap: cfg.enumeration_cap,
        });
    }

    let levels: Vec<f64> = (0..cfg.grid_levels)
        .map(|l| params.max_power_mw * l as f64 / (cfg.grid_levels - 1) as f64)
        .collect();
    // Row-major (vue, timeslot) pairs so earlier slots vary slowest: the
    // first maximum found is the lexicographically smallest power matrix.
    let slots: Vec<(usize, usize)> = (0..params.n)
        .flat_map(|i| (0..params.t).map(move |t| (i, t)))
        .filter(|&(i, t)| schedule.transmits_in(i, t))
        .collect();

    let mut best: Option<(f64, usize, PowerMatrix)> = None;
    let mut evaluations = 0u64;
    let mut power = PowerMatrix::zeros(params.n, params.t);
    enumerate_powers(&levels, &slots, 0, &mut power, &mut |p| {
        evaluations += 1;
        let success = success_matrix(schedule, p, h, aci, links, params);
        let links_value = score(&success, cfg.objective);
        let objective = links_value as f64 - params.beta_per_mw * p.total();
        if best.as_ref().is_none_or(|(b, _, _)| objective > *b) {
            best = Some((objective, links_value, p.clone()));
        }
    });
    let (_, objective_value, power) = best.expect("the all-zero lattice point always exists");
    Ok(ExactOutcome {
        schedule: schedule.clone(),
        total_power_mw: power.total(),
        power,
        objective_value,
        evaluations,
    })
}

fn enumerate_powers(
    levels: &[f64],
    slots: &[(usize, usize)],
    idx: usize,
    power: &mut PowerMatrix,
    visit: &mut impl FnMut(&PowerMatrix),
) {
    if idx == slots.len() {
        visit(power);
        return;
    }
    let (i, t) = slots[idx];
    for &level in levels {
        power.set(i, t, level);
        enumerate_powers(levels, slots, idx + 1, power, visit);
    }
    power.set(i, t, 0.0);
}

/// Nested exhaustive search over schedules and power lattices.
pub fn exact_joint(
    params: &Params,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
    cfg: &ExactConfig,
) -> Result<ExactOutcome, ExactError> {
    if cfg.grid_levels < 2 {
        return Err(ExactError::GridTooSmall(cfg.grid_levels));
    }
    let estimate = grid_estimate(params.n, params.f, params.t)
        .and_then(|g| {
            power_estimate(cfg.grid_levels, params.n * params.t).and_then(|p| g.checked_mul(p))
        })
        .ok_or(ExactError::InstanceTooLarge {
            estimate: u128::MAX,
            cap: cfg.enumeration_cap,
        })?;
    if estimate > cfg.enumeration_cap {
        return Err(ExactError::InstanceTooLarge {
            estimate,
            cap: cfg.enumeration_cap,
        });
    }

    let levels: Vec<f64> = (0..cfg.grid_levels)
        .map(|l| params.max_power_mw * l as f64 / (cfg.grid_levels - 1) as f64)
        .collect();

    let mut best: Option<(usize, Schedule, PowerMatrix)> = None;
    let mut evaluations = 0u64;
    let mut schedule = Schedule::empty(params.n, params.f, params.t);
    enumerate_grids(params, &mut schedule, 0, &mut |s| {
        let slots: Vec<(usize, usize)> = (0..params.n)
            .flat_map(|i| (0..params.t).map(move |t| (i, t)))
            .filter(|&(i, t)| s.transmits_in(i, t))
            .collect();
        let mut power = PowerMatrix::zeros(params.n, params.t);
        enumerate_powers(&levels, &slots, 0, &mut power, &mut |p| {
            evaluations += 1;
            let success = success_matrix(s, p, h, aci, links, params);
            let value = score(&success, cfg.objective);
            if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                best = Some((value, s.clone(), p.clone()));
            }
        });
    });
    let (objective_value, schedule, power) = best.expect("nonempty enumeration");
    Ok(ExactOutcome {
        total_power_mw: power.total(),
        schedule,
        power,
        objective_value,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aci::AciModel;
    use crate::channel::{ChannelMatrix, ChannelParams, DiagonalMode};
    use crate::convoy::ConvoyScenario;
    use crate::mat::Mat2;
    use crate::params::RawParams;

    fn strong_two_vue() -> (Params, ChannelMatrix, AciMatrix, LinkSets) {
        let params = RawParams::benchmark(2, 1, 2).derive().unwrap();
        let mut gains = Mat2::filled(2, 2, 0.0);
        gains[(0, 1)] = 1e-6;
        gains[(1, 0)] = 1e-6;
        let h = ChannelMatrix::from_gains(gains, DiagonalMode::HalfDuplexZeroDiagonal);
        let aci = AciMatrix::build(1, &AciModel::Gpp3Mask).unwrap();
        let links = LinkSets::from_transmitter_sets(alloc::vec![alloc::vec![1], alloc::vec![0]]);
        (params, h, aci, links)
    }

    #[test]
    fn strong_pair_connects_both_ways() {
        let (params, h, aci, links) = strong_two_vue();
        let power = PowerMatrix::uniform(2, 2, params.max_power_mw).unwrap();
        let out =
            exact_schedule(&params, &h, &aci, &links, &power, &ExactConfig::default()).unwrap();
        assert_eq!(out.objective_value, 2);
        // One VUE per timeslot; ties resolve to VUE 1 first.
        assert_eq!(out.schedule.grid()[(0, 0)], 1);
        assert_eq!(out.schedule.grid()[(0, 1)], 2);
    }

    #[test]
    fn half_duplex_caps_single_timeslot_instances_at_one_link() {
        // Two slots, one timeslot: transmitting both ways at once is
        // impossible, so one link is the best any schedule can do.
        let mut raw = RawParams::benchmark(2, 2, 1);
        raw.duplex = crate::params::Duplex::Half;
        let params = raw.derive().unwrap();
        let mut gains = Mat2::filled(2, 2, 0.0);
        gains[(0, 1)] = 1e-6;
        gains[(1, 0)] = 1e-6;
        let h = ChannelMatrix::from_gains(gains, DiagonalMode::HalfDuplexZeroDiagonal);
        let aci = AciMatrix::build(2, &AciModel::Gpp3Mask).unwrap();
        let links = LinkSets::from_transmitter_sets(alloc::vec![alloc::vec![1], alloc::vec![0]]);
        let power = PowerMatrix::uniform(2, 1, params.max_power_mw).unwrap();
        let out =
            exact_schedule(&params, &h, &aci, &links, &power, &ExactConfig::default()).unwrap();
        assert_eq!(out.objective_value, 1);
    }

    #[test]
    fn no_receivers_means_zero_links() {
        let params = RawParams::benchmark(1, 2, 2).derive().unwrap();
        let h = ChannelMatrix::from_gains(
            Mat2::filled(1, 1, 0.0),
            DiagonalMode::HalfDuplexZeroDiagonal,
        );
        let aci = AciMatrix::build(2, &AciModel::Gpp3Mask).unwrap();
        let links = LinkSets::from_transmitter_sets(alloc::vec![alloc::vec![]]);
        let power = PowerMatrix::uniform(1, 2, params.max_power_mw).unwrap();
        let out =
            exact_schedule(&params, &h, &aci, &links, &power, &ExactConfig::default()).unwrap();
        assert_eq!(out.objective_value, 0);
        let joint = exact_joint(&params, &h, &aci, &links, &ExactConfig::default()).unwrap();
        assert_eq!(joint.objective_value, 0);
    }

    #[test]
    fn refuses_oversized_instances() {
        let params = RawParams::benchmark(10, 10, 10).derive().unwrap();
        let scenario = ConvoyScenario::equally_spaced(10, 48.6);
        let h = ChannelMatrix::generate(&scenario, &ChannelParams::highway(), params.duplex, 0)
            .unwrap();
        let aci = AciMatrix::build(10, &AciModel::Gpp3Mask).unwrap();
        let links = LinkSets::intended_sets(&scenario, 10, 10);
        let power = PowerMatrix::uniform(10, 10, params.max_power_mw).unwrap();
        match exact_schedule(&params, &h, &aci, &links, &power, &ExactConfig::default()) {
            Err(ExactError::InstanceTooLarge { estimate, .. }) => {
                assert!(estimate > 100_000_000);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn power_grid_evaluation_count() {
        // Two scheduled slots at four levels: 16 lattice points.
        let params = RawParams::benchmark(2, 1, 1).derive().unwrap();
        let (_, h, aci, links) = strong_two_vue();
        let mut grid = Mat2::filled(1, 1, 0u16);
        grid[(0, 0)] = 1;
        let schedule = Schedule::from_grid(2, grid).unwrap();
        let cfg = ExactConfig {
            grid_levels: 4,
            ..ExactConfig::default()
        };
        // One scheduled slot here: 4 evaluations.
        let out = exact_power(&params, &schedule, &h, &aci, &links, &cfg).unwrap();
        assert_eq!(out.evaluations, 4);

        // With both VUEs scheduled in one timeslot each of a 2-timeslot
        // grid: 16 evaluations.
        let params2 = RawParams::benchmark(2, 1, 2).derive().unwrap();
        let mut grid2 = Mat2::filled(1, 2, 0u16);
        grid2[(0, 0)] = 1;
        grid2[(0, 1)] = 2;
        let schedule2 = Schedule::from_grid(2, grid2).unwrap();
        let out2 = exact_power(&params2, &schedule2, &h, &aci, &links, &cfg).unwrap();
        assert_eq!(out2.evaluations, 16);
    }

    #[test]
    fn infeasible_targets_select_zero_power() {
        let (mut params, h, aci, links) = strong_two_vue();
        params.noise_mw = 1e9; // unreachable threshold even at the cap
        let mut grid = Mat2::filled(1, 2, 0u16);
        grid[(0, 0)] = 1;
        grid[(0, 1)] = 2;
        let schedule = Schedule::from_grid(2, grid).unwrap();
        let out = exact_power(
            &params,
            &schedule,
            &h,
            &aci,
            &links,
            &ExactConfig::default(),
        )
        .unwrap();
        assert_eq!(out.objective_value, 0);
        assert_eq!(out.total_power_mw, 0.0);
    }

    #[test]
    fn single_link_picks_smallest_sufficient_level() {
        // Noise-limited single link: the optimum is the smallest lattice
        // level at or above the exact requirement.
        let params = RawParams::benchmark(2, 1, 1).derive().unwrap();
        let gain = 3.0 * params.sinr_threshold * params.noise_mw / params.max_power_mw;
        let mut gains = Mat2::filled(2, 2, 0.0);
        gains[(0, 1)] = gain;
        let h = ChannelMatrix::from_gains(gains, DiagonalMode::HalfDuplexZeroDiagonal);
        let aci = AciMatrix::build(1, &AciModel::Gpp3Mask).unwrap();
        let links = LinkSets::from_transmitter_sets(alloc::vec![alloc::vec![], alloc::vec![0]]);
        let mut grid = Mat2::filled(1, 1, 0u16);
        grid[(0, 0)] = 1;
        let schedule = Schedule::from_grid(2, grid).unwrap();
        let cfg = ExactConfig {
            grid_levels: 16,
            ..ExactConfig::default()
        };
        let out = exact_power(&params, &schedule, &h, &aci, &links, &cfg).unwrap();
        let needed = params.sinr_threshold * params.noise_mw / gain;
        let step = params.max_power_mw / 15.0;
        let expected = step * (needed / step).ceil();
        assert_eq!(out.objective_value, 1);
        assert!((out.power.get(0, 0) - expected).abs() < 1e-9);
    }

    #[test]
    fn joint_beats_or_matches_fixed_power_schedule_search() {
        for seed in 0..5u64 {
            let (n, f, t) = (2, 1, 2);
            let params = RawParams::benchmark(n, f, t).derive().unwrap();
            let scenario = ConvoyScenario::sample(n, 10.0, 48.6, seed).unwrap();
            let h =
                ChannelMatrix::generate(&scenario, &ChannelParams::highway(), params.duplex, seed)
                    .unwrap();
            let aci = AciMatrix::build(f, &AciModel::Gpp3Mask).unwrap();
            let links = LinkSets::intended_sets(&scenario, f, t);
            let cfg = ExactConfig {
                grid_levels: 2,
                ..ExactConfig::default()
            };
            let equal = PowerMatrix::uniform(n, t, params.max_power_mw).unwrap();
            let sched_only = exact_schedule(&params, &h, &aci, &links, &equal, &cfg).unwrap();
            let joint = exact_joint(&params, &h, &aci, &links, &cfg).unwrap();
            assert!(joint.objective_value >= sched_only.objective_value);
        }
    }

    #[test]
    fn joint_two_vue_split_at_full_power() {
        let (params, h, aci, links) = strong_two_vue();
        let cfg = ExactConfig {
            grid_levels: 2,
            ..ExactConfig::default()
        };
        let out = exact_joint(&params, &h, &aci, &links, &cfg).unwrap();
        assert_eq!(out.objective_value, 2);
        assert_eq!(out.schedule.grid()[(0, 0)], 1);
        assert_eq!(out.schedule.grid()[(0, 1)], 2);
        assert_eq!(out.power.get(0, 0), params.max_power_mw);
        assert_eq!(out.power.get(1, 1), params.max_power_mw);
    }

    #[test]
    fn maxmin_at_least_as_fair_as_sum() {
        for seed in 0..6u64 {
            let (n, f, t) = (3, 2, 2);
            let params = RawParams::benchmark(n, f, t).derive().unwrap();
            let scenario = ConvoyScenario::sample(n, 10.0, 30.0, seed).unwrap();
            let h = ChannelMatrix::generate(
                &scenario,
                &ChannelParams::highway(),
                params.duplex,
                seed ^ 0xff,
            )
            .unwrap();
            let aci = AciMatrix::build(f, &AciModel::Gpp3Mask).unwrap();
            let links = LinkSets::intended_sets(&scenario, f, t);
            let equal = PowerMatrix::uniform(n, t, params.max_power_mw).unwrap();
            let sum_cfg = ExactConfig::default();
            let maxmin_cfg = ExactConfig {
                objective: Objective::MaxMin,
                ..ExactConfig::default()
            };
            let sum = exact_schedule(&params, &h, &aci, &links, &equal, &sum_cfg).unwrap();
            let fair = exact_schedule(&params, &h, &aci, &links, &equal, &maxmin_cfg).unwrap();
            let min_links = |s: &Schedule| {
                let success = success_matrix(s, &equal, &h, &aci, &links, &params);
                (0..n).map(|i| success.links_from(i)).min().unwrap()
            };
            assert!(
                min_links(&fair.schedule) >= min_links(&sum.schedule),
                "seed {seed}"
            );
        }
    }
}
