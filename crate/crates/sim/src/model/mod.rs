//! Optimization-model emitter.
//!
//! Serializes the allocation problem to CPLEX-style LP text for external
//! solvers, in three flavors:
//!
//! - `Joint`: schedule and powers both free; the SINR rows carry bilinear
//!   schedule-power products (an MIQCP);
//! - `ScheduleBlp`: powers fixed, schedule free (a Boolean LP);
//! - `PowerMilp`: schedule fixed, powers free (an MILP); the link
//!   linearization collapses onto the fixed schedule and the objective
//!   additionally charges `beta` per mW of total power.
//!
//! Per receiver `j` and RB, a big-M row enforces the linearized SINR
//! condition whenever the success indicator `Y` is set; auxiliary variables
//! `V = X·Y` and `W = min(1, sum V)` turn per-RB successes into the counted
//! link objective. Options add half-duplex rows (`Y` forced off in any
//! timeslot where the receiver transmits, with the self-channel zeroed),
//! a max-min objective (maximize the worst per-VUE link sum `L`), and a
//! unicast restriction that shrinks the `W`/`V` index sets to the wanted
//! pairs.

mod read;
mod write;

pub use read::{parse_lp, LpError, LpModel, LpRow, Sense, Violation};
pub use write::write_lp;

use serde::Serialize;
use std::collections::BTreeMap;
use std::io;
use v2vsim_core::sinr::rb_sinr;
use v2vsim_core::{AciMatrix, ChannelMatrix, LinkSets, Params, PowerMatrix, Schedule};

/// Which formulation to emit.
#[derive(Debug, Clone, Copy)]
pub enum ModelKind<'a> {
    Joint,
    ScheduleBlp { fixed_power: &'a PowerMatrix },
    PowerMilp { fixed_schedule: &'a Schedule },
}

impl ModelKind<'_> {
    fn tag(&self) -> &'static str {
        match self {
            ModelKind::Joint => "joint",
            ModelKind::ScheduleBlp { .. } => "blp",
            ModelKind::PowerMilp { .. } => "milp",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ModelSpec<'a> {
    pub kind: ModelKind<'a>,
    pub half_duplex: bool,
    pub maxmin: bool,
    pub unicast: bool,
}

/// Registry sizes of an emitted model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelStats {
    pub binaries: usize,
    pub continuous: usize,
    pub linear_rows: usize,
    pub quadratic_rows: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("inconsistent model inputs: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn x_var(i: usize, f: usize, t: usize) -> String {
    format!("X_{}_{}_{}", i + 1, f + 1, t + 1)
}
fn y_var(j: usize, f: usize, t: usize) -> String {
    format!("Y_{}_{}_{}", j + 1, f + 1, t + 1)
}
fn p_var(i: usize, t: usize) -> String {
    format!("P_{}_{}", i + 1, t + 1)
}
fn v_var(i: usize, j: usize, f: usize, t: usize) -> String {
    format!("V_{}_{}_{}_{}", i + 1, j + 1, f + 1, t + 1)
}
fn w_var(i: usize, j: usize) -> String {
    format!("W_{}_{}", i + 1, j + 1)
}

/// The `(transmitter, receiver)` pairs carrying `W`/`V` variables: the full
/// square in broadcast mode, only the wanted links under unicast.
fn w_pairs(n: usize, unicast: bool, links: &LinkSets) -> Vec<(usize, usize)> {
    if unicast {
        (0..n)
            .flat_map(|i| links.receivers_of(i).iter().map(move |&j| (i, j)))
            .collect()
    } else {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
    }
}

/// Build the in-memory model. Most callers want [`emit_model`].
pub fn build_model(
    spec: &ModelSpec,
    params: &Params,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
) -> Result<LpModel, ModelError> {
    let (n, f_count, t_count) = (params.n, params.f, params.t);
    if h.n() != n || links.n() != n || aci.f() != f_count {
        return Err(ModelError::Inconsistent(
            "channel, link-set and leakage dimensions must match the constants".into(),
        ));
    }
    if spec.unicast && (0..n).any(|i| links.receivers_of(i).len() != 1) {
        return Err(ModelError::Inconsistent(
            "unicast emission needs singleton receiver sets".into(),
        ));
    }
    match spec.kind {
        ModelKind::ScheduleBlp { fixed_power } => {
            if fixed_power.n() != n || fixed_power.t() != t_count {
                return Err(ModelError::Inconsistent(
                    "fixed power has wrong shape".into(),
                ));
            }
        }
        ModelKind::PowerMilp { fixed_schedule } => {
            if fixed_schedule.n() != n
                || fixed_schedule.f() != f_count
                || fixed_schedule.t() != t_count
            {
                return Err(ModelError::Inconsistent(
                    "fixed schedule has wrong shape".into(),
                ));
            }
        }
        ModelKind::Joint => {}
    }

    // The big-M substitution assumes at most unit channel gains; zero the
    // self-channel under half-duplex exactly as the caller should have.
    let h_used = if spec.half_duplex {
        h.with_zero_diagonal()
    } else {
        h.clone()
    };

    let gamma_bar = params.sinr_fraction;
    let eta = params.big_m;
    let rhs_sinr = gamma_bar * params.noise_mw - eta;
    let pairs = w_pairs(n, spec.unicast, links);
    let has_x = !matches!(spec.kind, ModelKind::PowerMilp { .. });
    let has_v = has_x;
    let has_p = !matches!(spec.kind, ModelKind::ScheduleBlp { .. });

    let mut objective: Vec<(f64, String)> = Vec::new();
    if spec.maxmin {
        objective.push((1.0, "L".to_string()));
    } else {
        for i in 0..n {
            for &j in links.receivers_of(i) {
                objective.push((1.0, w_var(i, j)));
            }
        }
    }
    if let ModelKind::PowerMilp { .. } = spec.kind {
        for i in 0..n {
            for t in 0..t_count {
                objective.push((-params.beta_per_mw, p_var(i, t)));
            }
        }
    }

    let mut rows: Vec<LpRow> = Vec::new();

    // SINR rows: one per receiver and RB.
    for j in 0..n {
        for f in 0..f_count {
            for t in 0..t_count {
                let mut linear = vec![(-eta, y_var(j, f, t))];
                let mut quad = Vec::new();
                match spec.kind {
                    ModelKind::Joint => {
                        for k in 0..n {
                            for fp in 0..f_count {
                                let wanted = links.is_intended(k, j) && fp == f;
                                let coef = h_used.gain(k, j)
                                    * ((wanted as u8) as f64 - gamma_bar * aci.leakage(fp, f));
                                if coef != 0.0 {
                                    quad.push((coef, x_var(k, fp, t), p_var(k, t)));
                                }
                            }
                        }
                    }
                    ModelKind::ScheduleBlp { fixed_power } => {
                        for k in 0..n {
                            for fp in 0..f_count {
                                let wanted = links.is_intended(k, j) && fp == f;
                                let coef = fixed_power.get(k, t)
                                    * h_used.gain(k, j)
                                    * ((wanted as u8) as f64 - gamma_bar * aci.leakage(fp, f));
                                if coef != 0.0 {
                                    linear.push((coef, x_var(k, fp, t)));
                                }
                            }
                        }
                    }
                    ModelKind::PowerMilp { fixed_schedule } => {
                        for k in 0..n {
                            let mut coef = 0.0;
                            if links.is_intended(k, j) && fixed_schedule.is_scheduled(k, f, t) {
                                coef += h_used.gain(k, j);
                            }
                            for fp in 0..f_count {
                                if fixed_schedule.is_scheduled(k, fp, t) {
                                    coef -= gamma_bar * aci.leakage(fp, f) * h_used.gain(k, j);
                                }
                            }
                            if coef != 0.0 {
                                linear.push((coef, p_var(k, t)));
                            }
                        }
                    }
                }
                rows.push(LpRow {
                    name: format!("sinr_{}_{}_{}", j + 1, f + 1, t + 1),
                    linear,
                    quad,
                    sense: Sense::Ge,
                    rhs: rhs_sinr,
                });
            }
        }
    }

    // Link-counting linearization.
    for &(i, j) in &pairs {
        rows.push(LpRow {
            name: format!("wcap_{}_{}", i + 1, j + 1),
            linear: vec![(1.0, w_var(i, j))],
            quad: vec![],
            sense: Sense::Le,
            rhs: 1.0,
        });
        let mut linear = vec![(1.0, w_var(i, j))];
        match spec.kind {
            ModelKind::PowerMilp { fixed_schedule } => {
                for f in 0..f_count {
                    for t in 0..t_count {
                        if fixed_schedule.is_scheduled(i, f, t) {
                            linear.push((-1.0, y_var(j, f, t)));
                        }
                    }
                }
            }
            _ => {
                for f in 0..f_count {
                    for t in 0..t_count {
                        linear.push((-1.0, v_var(i, j, f, t)));
                    }
                }
            }
        }
        rows.push(LpRow {
            name: format!("wsum_{}_{}", i + 1, j + 1),
            linear,
            quad: vec![],
            sense: Sense::Le,
            rhs: 0.0,
        });
    }
    if has_v {
        for &(i, j) in &pairs {
            for f in 0..f_count {
                for t in 0..t_count {
                    rows.push(LpRow {
                        name: format!("vx_{}_{}_{}_{}", i + 1, j + 1, f + 1, t + 1),
                        linear: vec![(1.0, v_var(i, j, f, t)), (-1.0, x_var(i, f, t))],
                        quad: vec![],
                        sense: Sense::Le,
                        rhs: 0.0,
                    });
                    rows.push(LpRow {
                        name: format!("vy_{}_{}_{}_{}", i + 1, j + 1, f + 1, t + 1),
                        linear: vec![(1.0, v_var(i, j, f, t)), (-1.0, y_var(j, f, t))],
                        quad: vec![],
                        sense: Sense::Le,
                        rhs: 0.0,
                    });
                }
            }
        }
    }

    // At most one wanted transmitter per successfully received RB.
    for j in 0..n {
        for f in 0..f_count {
            for t in 0..t_count {
                let name = format!("share_{}_{}_{}", j + 1, f + 1, t + 1);
                match spec.kind {
                    ModelKind::PowerMilp { fixed_schedule } => {
                        let occupied: usize = links
                            .transmitters_of(j)
                            .iter()
                            .filter(|&&i| fixed_schedule.is_scheduled(i, f, t))
                            .count();
                        rows.push(LpRow {
                            name,
                            linear: vec![(n as f64, y_var(j, f, t))],
                            quad: vec![],
                            sense: Sense::Le,
                            rhs: (n + 1 - occupied) as f64,
                        });
                    }
                    _ => {
                        let mut linear = vec![(n as f64, y_var(j, f, t))];
                        for &i in links.transmitters_of(j) {
                            linear.push((1.0, x_var(i, f, t)));
                        }
                        rows.push(LpRow {
                            name,
                            linear,
                            quad: vec![],
                            sense: Sense::Le,
                            rhs: (n + 1) as f64,
                        });
                    }
                }
            }
        }
    }

    // One RB per VUE per timeslot.
    if has_x {
        for i in 0..n {
            for t in 0..t_count {
                rows.push(LpRow {
                    name: format!("onerb_{}_{}", i + 1, t + 1),
                    linear: (0..f_count).map(|f| (1.0, x_var(i, f, t))).collect(),
                    quad: vec![],
                    sense: Sense::Le,
                    rhs: 1.0,
                });
            }
        }
    }

    // Half-duplex: a receiver that transmits anywhere in a timeslot cannot
    // succeed in any RB of that timeslot.
    if spec.half_duplex {
        for j in 0..n {
            for f in 0..f_count {
                for fp in 0..f_count {
                    for t in 0..t_count {
                        let name = format!("hd_{}_{}_{}_{}", j + 1, f + 1, fp + 1, t + 1);
                        match spec.kind {
                            ModelKind::PowerMilp { fixed_schedule } => {
                                let transmitting = fixed_schedule.is_scheduled(j, fp, t) as usize;
                                rows.push(LpRow {
                                    name,
                                    linear: vec![(1.0, y_var(j, f, t))],
                                    quad: vec![],
                                    sense: Sense::Le,
                                    rhs: (1 - transmitting) as f64,
                                });
                            }
                            _ => {
                                rows.push(LpRow {
                                    name,
                                    linear: vec![(1.0, y_var(j, f, t)), (1.0, x_var(j, fp, t))],
                                    quad: vec![],
                                    sense: Sense::Le,
                                    rhs: 1.0,
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    // Max-min fairness: the objective variable is a floor under every
    // per-VUE link sum.
    if spec.maxmin {
        for i in 0..n {
            let mut linear: Vec<(f64, String)> = links
                .receivers_of(i)
                .iter()
                .map(|&j| (1.0, w_var(i, j)))
                .collect();
            linear.push((-1.0, "L".to_string()));
            rows.push(LpRow {
                name: format!("fair_{}", i + 1),
                linear,
                quad: vec![],
                sense: Sense::Ge,
                rhs: 0.0,
            });
        }
    }

    let mut bounds = Vec::new();
    if has_p {
        for i in 0..n {
            for t in 0..t_count {
                bounds.push((p_var(i, t), 0.0, params.max_power_mw));
            }
        }
    }

    let mut binaries = Vec::new();
    if has_x {
        for i in 0..n {
            for f in 0..f_count {
                for t in 0..t_count {
                    binaries.push(x_var(i, f, t));
                }
            }
        }
    }
    for j in 0..n {
        for f in 0..f_count {
            for t in 0..t_count {
                binaries.push(y_var(j, f, t));
            }
        }
    }

    Ok(LpModel {
        maximize: true,
        objective,
        rows,
        bounds,
        binaries,
    })
}

/// Emit the model as LP text and report the registry sizes actually
/// written.
pub fn emit_model(
    spec: &ModelSpec,
    params: &Params,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
    out: &mut impl io::Write,
) -> Result<ModelStats, ModelError> {
    let model = build_model(spec, params, h, aci, links)?;
    let comments = vec![
        "v2vsim optimization model".to_string(),
        format!(
            "kind={} half_duplex={} maxmin={} unicast={}",
            spec.kind.tag(),
            spec.half_duplex,
            spec.maxmin,
            spec.unicast
        ),
        format!("n={} f={} t={}", params.n, params.f, params.t),
        "powers in mW, gains linear".to_string(),
    ];
    write_lp(&model, &comments, out)?;
    out.flush()?;
    Ok(stats_of(&model))
}

/// Registry sizes of an in-memory model.
pub fn stats_of(model: &LpModel) -> ModelStats {
    ModelStats {
        binaries: model.binaries.len(),
        continuous: model.continuous_count(),
        linear_rows: model.linear_row_count(),
        quadratic_rows: model.quadratic_row_count(),
    }
}

/// Closed-form registry sizes. `kind_tag` is one of `joint`, `blp`, `milp`.
/// Unicast counts assume singleton receiver sets.
pub fn model_stats(
    kind_tag: &str,
    half_duplex: bool,
    maxmin: bool,
    unicast: bool,
    n: usize,
    f: usize,
    t: usize,
) -> ModelStats {
    let nft = n * f * t;
    let pair_count = if unicast { n } else { n * n };
    let v_count = pair_count * f * t;
    let l_count = maxmin as usize;
    let hd_rows = if half_duplex { n * f * f * t } else { 0 };
    let fair_rows = if maxmin { n } else { 0 };
    match kind_tag {
        "joint" => ModelStats {
            binaries: 2 * nft,
            continuous: n * t + v_count + pair_count + l_count,
            linear_rows: 2 * pair_count + 2 * v_count + nft + n * t + hd_rows + fair_rows,
            quadratic_rows: nft,
        },
        "blp" => ModelStats {
            binaries: 2 * nft,
            continuous: v_count + pair_count + l_count,
            linear_rows: nft + 2 * pair_count + 2 * v_count + nft + n * t + hd_rows + fair_rows,
            quadratic_rows: 0,
        },
        "milp" => ModelStats {
            binaries: nft,
            continuous: n * t + pair_count + l_count,
            linear_rows: nft + 2 * pair_count + nft + hd_rows + fair_rows,
            quadratic_rows: 0,
        },
        other => panic!("unknown model kind {other}"),
    }
}

/// Build a variable assignment from simulator outputs: the schedule and
/// powers verbatim, per-RB success indicators from the RB-centric SINR
/// (with the half-duplex exclusion when requested), and the auxiliary
/// variables at their link-counting maxima.
pub fn feasible_assignment(
    params: &Params,
    h: &ChannelMatrix,
    aci: &AciMatrix,
    links: &LinkSets,
    schedule: &Schedule,
    power: &PowerMatrix,
    half_duplex: bool,
) -> BTreeMap<String, f64> {
    let (n, f_count, t_count) = (params.n, params.f, params.t);
    let h_used = if half_duplex {
        h.with_zero_diagonal()
    } else {
        h.clone()
    };
    let mut assignment = BTreeMap::new();
    for i in 0..n {
        for f in 0..f_count {
            for t in 0..t_count {
                assignment.insert(x_var(i, f, t), schedule.is_scheduled(i, f, t) as u8 as f64);
            }
        }
    }
    for i in 0..n {
        for t in 0..t_count {
            assignment.insert(p_var(i, t), power.get(i, t));
        }
    }
    let mut y = vec![false; n * f_count * t_count];
    for j in 0..n {
        for t in 0..t_count {
            if half_duplex && schedule.transmits_in(j, t) {
                continue;
            }
            for f in 0..f_count {
                let sinr = rb_sinr(
                    j,
                    f,
                    t,
                    schedule,
                    power,
                    &h_used,
                    aci,
                    links,
                    params.noise_mw,
                );
                if sinr >= params.sinr_threshold {
                    y[(j * f_count + f) * t_count + t] = true;
                }
            }
        }
    }
    for j in 0..n {
        for f in 0..f_count {
            for t in 0..t_count {
                assignment.insert(
                    y_var(j, f, t),
                    y[(j * f_count + f) * t_count + t] as u8 as f64,
                );
            }
        }
    }
    let mut worst = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            let mut total = 0.0;
            for f in 0..f_count {
                for t in 0..t_count {
                    let v = (schedule.is_scheduled(i, f, t) && y[(j * f_count + f) * t_count + t])
                        as u8 as f64;
                    assignment.insert(v_var(i, j, f, t), v);
                    total += v;
                }
            }
            assignment.insert(w_var(i, j), total.min(1.0));
        }
        let row_sum: f64 = links
            .receivers_of(i)
            .iter()
            .map(|&j| assignment[&w_var(i, j)])
            .sum();
        worst = worst.min(row_sum);
    }
    assignment.insert("L".to_string(), if worst.is_finite() { worst } else { 0.0 });
    assignment
}
