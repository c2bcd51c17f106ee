//! Command-line front end.

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use v2vsim::config::{SimConfig, SweepAxis};
use v2vsim::csvio;
use v2vsim::harness;
use v2vsim::model::{self, ModelKind, ModelSpec};
use v2vsim::output;
use v2vsim_core::{
    equal_power, exact, heuristic_power, ConfigError, Duplex, PowerMatrix, Schedule,
};

#[derive(Parser)]
#[command(
    name = "v2vsim",
    version,
    about = "V2V broadcast scheduling and power control simulator"
)]
struct Cli {
    /// TOML experiment configuration; benchmark defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base RNG seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an allocation grid and emit it as CSV.
    Schedule {
        #[arg(long, value_enum, default_value = "bis")]
        algo: ScheduleAlgo,
        /// Block interleaver width (BIS only).
        #[arg(long, default_value_t = 1)]
        w: usize,
        /// Search objective for the exhaustive scheduler.
        #[arg(long, value_enum, default_value = "sum")]
        objective: ObjectiveArg,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute transmit powers for a given schedule and emit them as CSV.
    Power {
        #[arg(long, value_enum, default_value = "equal")]
        algo: PowerAlgo,
        /// Schedule CSV produced by the `schedule` subcommand.
        #[arg(long)]
        schedule: PathBuf,
        /// Lattice size for the exhaustive power search.
        #[arg(long, default_value_t = 8)]
        grid_levels: usize,
        #[arg(long, value_enum, default_value = "sum")]
        objective: ObjectiveArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serialize the optimization problem in LP format.
    EmitModel {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Add half-duplex rows and zero the self-channel (defaults to the
        /// configured duplex mode).
        #[arg(long)]
        half_duplex: bool,
        /// Maximize the minimum per-VUE link count instead of the total.
        #[arg(long)]
        maxmin: bool,
        /// Restrict each VUE to its nearest receiver.
        #[arg(long)]
        unicast: bool,
        /// Fixed schedule CSV (required for `milp`).
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the registry counts as JSON to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Run the configured algorithms at the configured grid size.
    Simulate {
        #[arg(long)]
        reps: Option<usize>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Sweep one grid dimension and tabulate per-algorithm metrics.
    Sweep {
        #[arg(long, value_enum)]
        axis: Option<AxisArg>,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<usize>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleAlgo {
    Bis,
    Heuristic,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum PowerAlgo {
    Equal,
    Heuristic,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Sum,
    Maxmin,
}

impl From<ObjectiveArg> for exact::Objective {
    fn from(value: ObjectiveArg) -> Self {
        match value {
            ObjectiveArg::Sum => exact::Objective::SumLinks,
            ObjectiveArg::Maxmin => exact::Objective::MaxMin,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Joint,
    Blp,
    Milp,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    T,
    F,
    N,
}

impl From<AxisArg> for SweepAxis {
    fn from(value: AxisArg) -> Self {
        match value {
            AxisArg::T => SweepAxis::T,
            AxisArg::F => SweepAxis::F,
            AxisArg::N => SweepAxis::N,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn load_config(cli_config: &Option<PathBuf>, cli_seed: Option<u64>) -> anyhow::Result<SimConfig> {
    let mut cfg = match cli_config {
        Some(path) => SimConfig::from_path(path)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = cli_seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn read_schedule(path: &Path, instance: &harness::Instance) -> anyhow::Result<Schedule> {
    let file = File::open(path)
        .map_err(|e| ConfigError::invalid(format!("cannot open {}: {e}", path.display())))?;
    let schedule = csvio::read_schedule_csv(file)?;
    let p = &instance.params;
    if schedule.n() != p.n || schedule.f() != p.f || schedule.t() != p.t {
        return Err(ConfigError::invalid(format!(
            "schedule is {}x{} for {} VUEs, config expects {}x{} for {}",
            schedule.f(),
            schedule.t(),
            schedule.n(),
            p.f,
            p.t,
            p.n
        ))
        .into());
    }
    Ok(schedule)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = load_config(&cli.config, cli.seed)?;
    match cli.command {
        Command::Schedule {
            algo,
            w,
            objective,
            out,
        } => {
            let instance = harness::build_instance(&cfg, cfg.n, cfg.f, cfg.t, 0)?;
            let p = &instance.params;
            let (schedule, note) = match algo {
                ScheduleAlgo::Bis => (
                    v2vsim_core::bis::bis_schedule(p.n, p.f, p.t, w),
                    format!("algo=bis w={w}"),
                ),
                ScheduleAlgo::Heuristic => (
                    v2vsim_core::greedy::heuristic_schedule(
                        p,
                        &instance.h,
                        &instance.aci,
                        &instance.links,
                        p.max_power_mw,
                    ),
                    "algo=heuristic".to_string(),
                ),
                ScheduleAlgo::Exact => {
                    let exact_cfg = exact::ExactConfig {
                        objective: objective.into(),
                        ..exact::ExactConfig::default()
                    };
                    let power = equal_power(p, p.max_power_mw)?;
                    let outcome = exact::exact_schedule(
                        p,
                        &instance.h,
                        &instance.aci,
                        &instance.links,
                        &power,
                        &exact_cfg,
                    )?;
                    (
                        outcome.schedule,
                        format!(
                            "algo=exact objective_value={} evaluations={}",
                            outcome.objective_value, outcome.evaluations
                        ),
                    )
                }
            };
            let comments = vec![note, format!("seed={}", cfg.seed)];
            csvio::emit(out.as_deref(), &csvio::schedule_csv(&schedule, &comments))?;
        }

        Command::Power {
            algo,
            schedule,
            grid_levels,
            objective,
            out,
        } => {
            let instance = harness::build_instance(&cfg, cfg.n, cfg.f, cfg.t, 0)?;
            let p = &instance.params;
            let schedule = read_schedule(&schedule, &instance)?;
            let (power, note): (PowerMatrix, String) = match algo {
                PowerAlgo::Equal => (equal_power(p, p.max_power_mw)?, "algo=equal".to_string()),
                PowerAlgo::Heuristic => {
                    let run =
                        heuristic_power(p, &schedule, &instance.h, &instance.aci, &instance.links)?;
                    (
                        run.power,
                        format!(
                            "algo=heuristic iterations={} bound={}",
                            run.iterations, run.iteration_bound
                        ),
                    )
                }
                PowerAlgo::Exact => {
                    let exact_cfg = exact::ExactConfig {
                        objective: objective.into(),
                        grid_levels,
                        ..exact::ExactConfig::default()
                    };
                    let outcome = exact::exact_power(
                        p,
                        &schedule,
                        &instance.h,
                        &instance.aci,
                        &instance.links,
                        &exact_cfg,
                    )?;
                    (
                        outcome.power,
                        format!(
                            "algo=exact objective_value={} total_power_mw={} evaluations={}",
                            outcome.objective_value, outcome.total_power_mw, outcome.evaluations
                        ),
                    )
                }
            };
            let comments = vec![note, format!("seed={}", cfg.seed)];
            csvio::emit(out.as_deref(), &csvio::power_csv(&power, &comments))?;
        }

        Command::EmitModel {
            kind,
            half_duplex,
            maxmin,
            unicast,
            schedule,
            out,
            stats,
        } => {
            let instance = harness::build_instance(&cfg, cfg.n, cfg.f, cfg.t, 0)?;
            let p = &instance.params;
            let fixed_power;
            let fixed_schedule;
            let kind = match kind {
                KindArg::Joint => ModelKind::Joint,
                KindArg::Blp => {
                    fixed_power = equal_power(p, p.max_power_mw)?;
                    ModelKind::ScheduleBlp {
                        fixed_power: &fixed_power,
                    }
                }
                KindArg::Milp => {
                    let path = schedule.as_deref().ok_or_else(|| {
                        ConfigError::invalid("--kind milp needs --schedule <csv>")
                    })?;
                    fixed_schedule = read_schedule(path, &instance)?;
                    ModelKind::PowerMilp {
                        fixed_schedule: &fixed_schedule,
                    }
                }
            };
            let links_storage;
            let links = if unicast {
                links_storage = v2vsim_core::LinkSets::unicast(&instance.scenario);
                &links_storage
            } else {
                &instance.links
            };
            let spec = ModelSpec {
                kind,
                half_duplex: half_duplex || p.duplex == Duplex::Half,
                maxmin,
                unicast,
            };
            let model_stats = match out {
                Some(path) => {
                    let mut file = BufWriter::new(
                        File::create(&path)
                            .with_context(|| format!("cannot create {}", path.display()))?,
                    );
                    model::emit_model(&spec, p, &instance.h, &instance.aci, links, &mut file)?
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    model::emit_model(&spec, p, &instance.h, &instance.aci, links, &mut lock)?
                }
            };
            if stats {
                eprintln!("{}", serde_json::to_string(&model_stats)?);
            }
        }

        Command::Simulate { reps, out } => {
            let mut cfg = cfg;
            if let Some(reps) = reps {
                cfg.reps = reps;
            }
            cfg.validate()?;
            let results = harness::run_point(&cfg, cfg.n, cfg.f, cfg.t, cfg.reps)?;
            output::write_point_outputs(&out, &cfg, &results)?;
            for r in &results {
                println!(
                    "{}: mean_links={:.4} se={:.4} avg_power={:.2} dBm",
                    r.label, r.report.mean_links, r.report.std_error, r.report.avg_tx_power_dbm
                );
            }
        }

        Command::Sweep {
            axis,
            values,
            reps,
            out,
        } => {
            let mut cfg = cfg;
            if let Some(reps) = reps {
                cfg.reps = reps;
            }
            let (axis, values) = match (axis, values, cfg.sweep.clone()) {
                (Some(axis), values, _) if !values.is_empty() => (axis.into(), values),
                (None, values, Some(sweep)) if values.is_empty() => (sweep.axis, sweep.values),
                _ => {
                    return Err(ConfigError::invalid(
                        "sweep needs --axis and --values (or a [sweep] config section)",
                    )
                    .into());
                }
            };
            cfg.validate()?;
            let points = harness::run_sweep(&cfg, axis, &values)?;
            let axis_name = match axis {
                SweepAxis::T => "t",
                SweepAxis::F => "f",
                SweepAxis::N => "n",
            };
            output::write_sweep_outputs(&out, &cfg, axis_name, &points)?;
            for point in &points {
                for r in &point.results {
                    println!(
                        "{axis_name}={}: {} mean_links={:.4} se={:.4}",
                        point.value, r.label, r.report.mean_links, r.report.std_error
                    );
                }
            }
        }
    }
    Ok(())
}
