//! Monte Carlo experiment driver.
//!
//! Each replication derives its own seed from the base seed XOR the
//! replication index, then runs scenario -> channel -> schedule -> power ->
//! success. Replications are independent and run in parallel; results do
//! not depend on execution order because every stream is derived from the
//! replication seed alone.

use crate::config::{AlgoConfig, PowerKey, SchedulerKey, SimConfig, SweepAxis};
use rayon::prelude::*;
use std::time::Instant;
use v2vsim_core::{
    bis, equal_power, greedy, heuristic_power, metrics, success_matrix, AciMatrix, ChannelMatrix,
    ConfigError, ConvoyScenario, LinkSets, MetricsReport, Params, PowerError, ReplicationOutcome,
};

/// SplitMix64 finalizer; used to derive independent sub-streams from one
/// replication seed.
fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One sampled world: convoy, channel, leakage and link sets.
pub struct Instance {
    pub params: Params,
    pub scenario: ConvoyScenario,
    pub h: ChannelMatrix,
    pub aci: AciMatrix,
    pub links: LinkSets,
}

/// Build the deterministic instance for one replication.
pub fn build_instance(
    cfg: &SimConfig,
    n: usize,
    f: usize,
    t: usize,
    rep_index: u64,
) -> Result<Instance, ConfigError> {
    let rep_seed = cfg.seed ^ rep_index;
    let params = cfg.raw_params(n, f, t).derive()?;
    let scenario = ConvoyScenario::sample(n, cfg.d_min_m, cfg.d_avg_m, mix(rep_seed, 1))?;
    let h = ChannelMatrix::generate(
        &scenario,
        &cfg.channel_params(),
        params.duplex,
        mix(rep_seed, 2),
    )?;
    let aci = AciMatrix::build(f, &cfg.aci())?;
    let links = LinkSets::intended_sets(&scenario, f, t);
    Ok(Instance {
        params,
        scenario,
        h,
        aci,
        links,
    })
}

/// A scheduler with its interleaver width already resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvedScheduler {
    Bis { w: usize },
    Heuristic,
}

/// Run one algorithm pairing on one instance.
pub fn run_algorithm(
    instance: &Instance,
    scheduler: ResolvedScheduler,
    power_key: PowerKey,
) -> Result<ReplicationOutcome, PowerError> {
    let p = &instance.params;
    let schedule = match scheduler {
        ResolvedScheduler::Bis { w } => bis::bis_schedule(p.n, p.f, p.t, w),
        ResolvedScheduler::Heuristic => greedy::heuristic_schedule(
            p,
            &instance.h,
            &instance.aci,
            &instance.links,
            p.max_power_mw,
        ),
    };
    let power = match power_key {
        PowerKey::Equal => equal_power(p, p.max_power_mw)?,
        PowerKey::Heuristic => {
            heuristic_power(p, &schedule, &instance.h, &instance.aci, &instance.links)?.power
        }
    };
    let success = success_matrix(
        &schedule,
        &power,
        &instance.h,
        &instance.aci,
        &instance.links,
        p,
    );
    Ok(ReplicationOutcome {
        schedule,
        power,
        success,
    })
}

/// Single-replication entry point: deterministic in
/// `(config, rep_index)`.
pub fn run_replication(
    cfg: &SimConfig,
    algo: &AlgoConfig,
    rep_index: u64,
) -> anyhow::Result<ReplicationOutcome> {
    let instance = build_instance(cfg, cfg.n, cfg.f, cfg.t, rep_index)?;
    let scheduler = match algo.scheduler {
        SchedulerKey::Bis => ResolvedScheduler::Bis { w: algo.w },
        SchedulerKey::Heuristic => ResolvedScheduler::Heuristic,
        SchedulerKey::BisOptW => {
            anyhow::bail!("optimized-w BIS needs the multi-replication driver")
        }
    };
    Ok(run_algorithm(&instance, scheduler, algo.power)?)
}

/// Per-algorithm results at one grid size.
pub struct PointResult {
    pub label: String,
    pub report: MetricsReport,
    /// Interleaver width actually used (BIS variants).
    pub resolved_w: Option<usize>,
    pub wall_clock_s: f64,
}

pub fn algo_label(algo: &AlgoConfig) -> String {
    let sched = match algo.scheduler {
        SchedulerKey::Bis => format!("bis_w{}", algo.w),
        SchedulerKey::BisOptW => "bis_opt_w".to_string(),
        SchedulerKey::Heuristic => "heuristic".to_string(),
    };
    match algo.power {
        PowerKey::Equal => sched,
        PowerKey::Heuristic => format!("{sched}_heurpow"),
    }
}

/// Interleaver widths worth trying: `1..=slots_used-1`, or just 1 when the
/// plan uses a single slot.
pub fn candidate_widths(n: usize, f: usize, t: usize) -> Vec<usize> {
    let slots_used = bis::bis_plan(n, f, t, 1).slots_used;
    if slots_used <= 2 {
        vec![1]
    } else {
        (1..slots_used).collect()
    }
}

/// Pick the interleaver width maximizing the mean link count under equal
/// power (lowest width wins ties).
pub fn optimize_width(instances: &[Instance], n: usize, f: usize, t: usize) -> usize {
    let mut best = (f64::NEG_INFINITY, 1usize);
    for w in candidate_widths(n, f, t) {
        let total: usize = instances
            .par_iter()
            .map(|inst| {
                let outcome = run_algorithm(inst, ResolvedScheduler::Bis { w }, PowerKey::Equal)
                    .expect("equal power is always in range");
                outcome.success.total_links()
            })
            .sum();
        let mean = total as f64 / instances.len() as f64;
        if mean > best.0 {
            best = (mean, w);
        }
    }
    best.1
}

/// Evaluate every configured algorithm at one grid size over shared
/// replication draws.
pub fn run_point(
    cfg: &SimConfig,
    n: usize,
    f: usize,
    t: usize,
    reps: usize,
) -> anyhow::Result<Vec<PointResult>> {
    let instances: Vec<Instance> = (0..reps as u64)
        .into_par_iter()
        .map(|r| build_instance(cfg, n, f, t, r))
        .collect::<Result<_, _>>()?;

    let needs_opt_w = cfg
        .algorithms
        .iter()
        .any(|a| a.scheduler == SchedulerKey::BisOptW);
    let opt_w = if needs_opt_w {
        Some(optimize_width(&instances, n, f, t))
    } else {
        None
    };

    let mut results = Vec::with_capacity(cfg.algorithms.len());
    for algo in &cfg.algorithms {
        let started = Instant::now();
        let (scheduler, resolved_w) = match algo.scheduler {
            SchedulerKey::Bis => (ResolvedScheduler::Bis { w: algo.w }, Some(algo.w)),
            SchedulerKey::BisOptW => {
                let w = opt_w.expect("resolved above");
                (ResolvedScheduler::Bis { w }, Some(w))
            }
            SchedulerKey::Heuristic => (ResolvedScheduler::Heuristic, None),
        };
        let outcomes: Vec<ReplicationOutcome> = instances
            .par_iter()
            .map(|inst| run_algorithm(inst, scheduler, algo.power))
            .collect::<Result<_, _>>()?;
        let report = metrics(&outcomes)?;
        results.push(PointResult {
            label: algo_label(algo),
            report,
            resolved_w,
            wall_clock_s: started.elapsed().as_secs_f64(),
        });
    }
    Ok(results)
}

/// One sweep point: the axis value and the per-algorithm results.
pub struct SweepPoint {
    pub value: usize,
    pub results: Vec<PointResult>,
}

/// Run the configured sweep: one `run_point` per axis value, holding the
/// other two dimensions at their configured sizes.
pub fn run_sweep(
    cfg: &SimConfig,
    axis: SweepAxis,
    values: &[usize],
) -> anyhow::Result<Vec<SweepPoint>> {
    if values.is_empty() {
        anyhow::bail!(ConfigError::invalid("sweep values must be nonempty"));
    }
    let mut points = Vec::with_capacity(values.len());
    for &value in values {
        let (n, f, t) = match axis {
            SweepAxis::T => (cfg.n, cfg.f, value),
            SweepAxis::F => (cfg.n, value, cfg.t),
            SweepAxis::N => (value, cfg.f, cfg.t),
        };
        let results = run_point(cfg, n, f, t, cfg.reps)?;
        points.push(SweepPoint { value, results });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> SimConfig {
        SimConfig {
            n: 5,
            f: 4,
            t: 2,
            reps: 4,
            seed: 11,
            ..SimConfig::default()
        }
    }

    #[test]
    fn replications_are_deterministic() {
        let cfg = small_cfg();
        let algo = AlgoConfig::default();
        let a = run_replication(&cfg, &algo, 3).unwrap();
        let b = run_replication(&cfg, &algo, 3).unwrap();
        assert_eq!(a.schedule, b.schedule);
        assert_eq!(a.power, b.power);
        assert_eq!(a.success, b.success);
        // A different replication draws a different world.
        let w3 = build_instance(&cfg, cfg.n, cfg.f, cfg.t, 3).unwrap();
        let w4 = build_instance(&cfg, cfg.n, cfg.f, cfg.t, 4).unwrap();
        assert_ne!(w3.scenario.positions(), w4.scenario.positions());
    }

    #[test]
    fn no_aci_isolated_slots_connect_everything_in_range() {
        // Without leakage, with every VUE on its own frequency slot and
        // both timeslots available, every wanted link with enough SNR
        // succeeds; at short range with no shadowing that is all of them.
        let cfg = SimConfig {
            n: 3,
            f: 6,
            t: 3,
            sigma_db: 0.0,
            d_avg_m: 12.0,
            aci_model: crate::config::AciModelKey::None,
            reps: 2,
            seed: 5,
            ..SimConfig::default()
        };
        let algo = AlgoConfig::default(); // BIS w=1, equal power
        for rep in 0..2 {
            let outcome = run_replication(&cfg, &algo, rep).unwrap();
            assert_eq!(outcome.success.total_links(), 3 * 2);
        }
    }

    #[test]
    fn point_results_cover_all_algorithms() {
        let cfg = small_cfg();
        let results = run_point(&cfg, cfg.n, cfg.f, cfg.t, cfg.reps).unwrap();
        let labels: Vec<&str> = results.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(
            labels,
            vec!["bis_w1", "bis_opt_w", "heuristic", "bis_w1_heurpow"]
        );
        for r in &results {
            assert_eq!(r.report.reps, 4);
            assert!(r.report.mean_links >= 0.0);
        }
    }

    #[test]
    fn parallel_and_serial_agree() {
        // Force a single rayon thread and compare against the default pool.
        let cfg = small_cfg();
        let parallel = run_point(&cfg, cfg.n, cfg.f, cfg.t, cfg.reps).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| run_point(&cfg, cfg.n, cfg.f, cfg.t, cfg.reps).unwrap());
        for (a, b) in parallel.iter().zip(&serial) {
            assert_eq!(a.report.mean_links, b.report.mean_links);
            assert_eq!(a.report.mean_links_per_vue, b.report.mean_links_per_vue);
        }
    }

    #[test]
    fn sweep_rejects_empty_values() {
        let cfg = small_cfg();
        assert!(run_sweep(&cfg, SweepAxis::T, &[]).is_err());
    }

    #[test]
    fn mid_convoy_vues_connect_more_than_edge_vues() {
        // Vehicles in the middle of the convoy have close neighbours on
        // both sides, so their mean link count exceeds the convoy ends'.
        let cfg = SimConfig {
            n: 12,
            f: 12,
            t: 2,
            reps: 60,
            seed: 4,
            algorithms: vec![AlgoConfig::default()],
            ..SimConfig::default()
        };
        let results = run_point(&cfg, cfg.n, cfg.f, cfg.t, cfg.reps).unwrap();
        let per_vue = &results[0].report.mean_links_per_vue;
        let middle = (per_vue[5] + per_vue[6]) / 2.0;
        let edges = (per_vue[0] + per_vue[11]) / 2.0;
        assert!(middle > edges, "middle {middle} vs edges {edges}");
    }

    #[test]
    fn standard_error_shrinks_with_replications() {
        let base = SimConfig {
            reps: 100,
            ..small_cfg()
        };
        let few = run_point(&base, base.n, base.f, base.t, 25).unwrap();
        let many = run_point(&base, base.n, base.f, base.t, 100).unwrap();
        // 4x the replications should roughly halve the standard error;
        // allow generous slack for sampling noise.
        let (se_few, se_many) = (few[0].report.std_error, many[0].report.std_error);
        assert!(se_many < se_few, "{se_many} !< {se_few}");
    }
}
