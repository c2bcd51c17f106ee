//! File outputs for the simulate/sweep front ends.
//!
//! Data CSVs are fully determined by the configuration (reruns are
//! byte-identical); wall-clock timings and the config echo go to a separate
//! metadata file so they never perturb the data files.

use crate::config::SimConfig;
use crate::csvio::{table_csv, write_string};
use crate::harness::{PointResult, SweepPoint};
use serde::Serialize;
use std::io;
use std::path::Path;

#[derive(Serialize)]
struct Metadata<'a> {
    seed: u64,
    reps: usize,
    algorithms: Vec<AlgoMeta>,
    config: &'a SimConfig,
}

#[derive(Serialize)]
struct AlgoMeta {
    label: String,
    resolved_w: Option<usize>,
    wall_clock_s: f64,
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Single-point outputs: metrics, fairness CDF, per-VUE means, metadata.
pub fn write_point_outputs(dir: &Path, cfg: &SimConfig, results: &[PointResult]) -> io::Result<()> {
    let labels: Vec<String> = results.iter().map(|r| r.label.clone()).collect();

    let metric_rows = ["mean_links", "std_error", "avg_tx_power_dbm"];
    let series: Vec<(String, Vec<String>)> = labels
        .iter()
        .zip(results)
        .map(|(label, r)| {
            (
                label.clone(),
                vec![
                    fmt(r.report.mean_links),
                    fmt(r.report.std_error),
                    fmt(r.report.avg_tx_power_dbm),
                ],
            )
        })
        .collect();
    let x: Vec<String> = metric_rows.iter().map(|s| s.to_string()).collect();
    write_string(&dir.join("metrics.csv"), &table_csv("metric", &x, &series))?;

    // Pooled CDF of the per-VUE link count, padded to a common support.
    let max_links = results
        .iter()
        .map(|r| r.report.cdf.len())
        .max()
        .unwrap_or(1);
    let x: Vec<String> = (0..max_links).map(|k| k.to_string()).collect();
    let series: Vec<(String, Vec<String>)> = labels
        .iter()
        .zip(results)
        .map(|(label, r)| {
            let col: Vec<String> = (0..max_links)
                .map(|k| fmt(r.report.cdf.get(k).copied().unwrap_or(1.0)))
                .collect();
            (label.clone(), col)
        })
        .collect();
    write_string(
        &dir.join("fairness_cdf.csv"),
        &table_csv("xValues", &x, &series),
    )?;

    // Mean links per VUE index.
    let n = results.first().map_or(0, |r| r.report.n);
    let x: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let series: Vec<(String, Vec<String>)> = labels
        .iter()
        .zip(results)
        .map(|(label, r)| {
            (
                label.clone(),
                r.report
                    .mean_links_per_vue
                    .iter()
                    .map(|&v| fmt(v))
                    .collect(),
            )
        })
        .collect();
    write_string(
        &dir.join("fairness_per_vue.csv"),
        &table_csv("xValues", &x, &series),
    )?;

    write_metadata(dir, cfg, results)
}

/// Sweep outputs: one CSV per metric with `xValues` plus a column per
/// algorithm, and the shared metadata file.
pub fn write_sweep_outputs(
    dir: &Path,
    cfg: &SimConfig,
    axis_name: &str,
    points: &[SweepPoint],
) -> io::Result<()> {
    let Some(first) = points.first() else {
        return Ok(());
    };
    let labels: Vec<String> = first.results.iter().map(|r| r.label.clone()).collect();
    let x: Vec<String> = points.iter().map(|p| p.value.to_string()).collect();

    let collect = |extract: &dyn Fn(&PointResult) -> String| -> Vec<(String, Vec<String>)> {
        labels
            .iter()
            .enumerate()
            .map(|(idx, label)| {
                (
                    label.clone(),
                    points.iter().map(|p| extract(&p.results[idx])).collect(),
                )
            })
            .collect()
    };

    write_string(
        &dir.join(format!("sweep_{axis_name}_zbar.csv")),
        &table_csv("xValues", &x, &collect(&|r| fmt(r.report.mean_links))),
    )?;
    write_string(
        &dir.join(format!("sweep_{axis_name}_se.csv")),
        &table_csv("xValues", &x, &collect(&|r| fmt(r.report.std_error))),
    )?;
    write_string(
        &dir.join(format!("sweep_{axis_name}_power_dbm.csv")),
        &table_csv("xValues", &x, &collect(&|r| fmt(r.report.avg_tx_power_dbm))),
    )?;
    write_string(
        &dir.join(format!("sweep_{axis_name}_w.csv")),
        &table_csv(
            "xValues",
            &x,
            &collect(&|r| {
                r.resolved_w
                    .map_or_else(|| "-".to_string(), |w| w.to_string())
            }),
        ),
    )?;

    let all_results: Vec<&PointResult> = points.iter().flat_map(|p| p.results.iter()).collect();
    write_metadata_refs(dir, cfg, &all_results)
}

fn write_metadata(dir: &Path, cfg: &SimConfig, results: &[PointResult]) -> io::Result<()> {
    write_metadata_refs(dir, cfg, &results.iter().collect::<Vec<_>>())
}

fn write_metadata_refs(dir: &Path, cfg: &SimConfig, results: &[&PointResult]) -> io::Result<()> {
    let meta = Metadata {
        seed: cfg.seed,
        reps: cfg.reps,
        algorithms: results
            .iter()
            .map(|r| AlgoMeta {
                label: r.label.clone(),
                resolved_w: r.resolved_w,
                wall_clock_s: r.wall_clock_s,
            })
            .collect(),
        config: cfg,
    };
    let text = toml::to_string(&meta)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
    write_string(&dir.join("metadata.toml"), &text)
}
