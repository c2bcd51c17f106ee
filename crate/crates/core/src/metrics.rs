//! Connectivity metrics aggregated over Monte Carlo replications.

use crate::error::ConfigError;
use crate::math;
use crate::schedule::{PowerMatrix, Schedule};
use crate::success::SuccessMatrix;
use crate::units::mw_to_dbm;
use alloc::vec;
use alloc::vec::Vec;

/// Everything one replication produces that the metrics need.
#[derive(Debug, Clone)]
pub struct ReplicationOutcome {
    pub schedule: Schedule,
    pub power: PowerMatrix,
    pub success: SuccessMatrix,
}

/// Aggregated connectivity report.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub n: usize,
    pub reps: usize,
    /// Mean successful links per VUE index, averaged over replications.
    pub mean_links_per_vue: Vec<f64>,
    /// Grand mean: successful links per VUE, averaged over VUEs and
    /// replications.
    pub mean_links: f64,
    /// Standard error of the per-replication mean (sample std / sqrt(reps)).
    pub std_error: f64,
    /// Empirical CDF of the per-VUE link count pooled over replications;
    /// entry `k` is P(links <= k).
    pub cdf: Vec<f64>,
    /// Mean transmit power over scheduled (VUE, timeslot) pairs, dBm.
    pub avg_tx_power_dbm: f64,
}

/// Aggregate replication outcomes into a [`MetricsReport`].
pub fn metrics(outcomes: &[ReplicationOutcome]) -> Result<MetricsReport, ConfigError> {
    let Some(first) = outcomes.first() else {
        return Err(ConfigError::invalid(
            "metrics need at least one replication",
        ));
    };
    let n = first.success.n();
    let reps = outcomes.len();

    let mut per_vue_sum = vec![0.0f64; n];
    let mut rep_means = Vec::with_capacity(reps);
    let mut pooled_counts: Vec<usize> = Vec::with_capacity(reps * n);
    let mut power_sum_mw = 0.0;
    let mut power_slots = 0usize;

    for outcome in outcomes {
        let mut rep_total = 0usize;
        for (i, sum) in per_vue_sum.iter_mut().enumerate() {
            let links = outcome.success.links_from(i);
            *sum += links as f64;
            pooled_counts.push(links);
            rep_total += links;
        }
        rep_means.push(rep_total as f64 / n as f64);
        for i in 0..n {
            for t in 0..outcome.schedule.t() {
                if outcome.schedule.transmits_in(i, t) {
                    power_sum_mw += outcome.power.get(i, t);
                    power_slots += 1;
                }
            }
        }
    }

    let mean_links_per_vue: Vec<f64> = per_vue_sum.iter().map(|s| s / reps as f64).collect();
    let mean_links = rep_means.iter().sum::<f64>() / reps as f64;
    let std_error = if reps > 1 {
        let var = rep_means
            .iter()
            .map(|m| (m - mean_links) * (m - mean_links))
            .sum::<f64>()
            / (reps - 1) as f64;
        math::sqrt(var / reps as f64)
    } else {
        0.0
    };

    let max_links = pooled_counts.iter().copied().max().unwrap_or(0);
    let mut cdf = vec![0.0f64; max_links + 1];
    for &c in &pooled_counts {
        cdf[c] += 1.0;
    }
    let total = pooled_counts.len() as f64;
    let mut acc = 0.0;
    for entry in &mut cdf {
        acc += *entry;
        *entry = acc / total;
    }

    let avg_tx_power_dbm = if power_slots > 0 {
        mw_to_dbm(power_sum_mw / power_slots as f64)
    } else {
        f64::NEG_INFINITY
    };

    Ok(MetricsReport {
        n,
        reps,
        mean_links_per_vue,
        mean_links,
        std_error,
        cdf,
        avg_tx_power_dbm,
    })
}
