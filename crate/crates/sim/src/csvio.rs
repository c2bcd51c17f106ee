//! CSV serialization.
//!
//! Comment lines start with `#`; matrices are row-major with a `# N=<n>`
//! header and seeds recorded alongside. Sweep and fairness files use an
//! `xValues` column followed by one column per algorithm, matching the
//! layout plotting scripts expect.

use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;
use v2vsim_core::{ChannelMatrix, ConfigError, ConvoyScenario, Mat2, PowerMatrix, Schedule};

/// Atomic file write: write to a temp sibling, then rename into place.
pub fn write_atomic(path: &Path, body: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, path)
}

pub fn scenario_csv(scenario: &ConvoyScenario) -> String {
    let mut out = String::new();
    out.push_str(&format!("# N={}\n", scenario.n()));
    out.push_str(&format!("# seed={}\n", scenario.rng_seed()));
    out.push_str("position_m\n");
    for p in scenario.positions() {
        out.push_str(&format!("{p}\n"));
    }
    out
}

pub fn channel_csv(h: &ChannelMatrix, seed: u64) -> String {
    let mut out = String::new();
    out.push_str(&format!("# N={}\n", h.n()));
    out.push_str(&format!("# seed={seed}\n"));
    for i in 0..h.n() {
        let row: Vec<String> = (0..h.n()).map(|j| format!("{}", h.gain(i, j))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Allocation grid as CSV: one row per frequency slot, one column per
/// timeslot, VUE ids with 0 meaning empty.
pub fn schedule_csv(schedule: &Schedule, comments: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# N={} F={} T={}\n",
        schedule.n(),
        schedule.f(),
        schedule.t()
    ));
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    for f in 0..schedule.f() {
        let row: Vec<String> = (0..schedule.t())
            .map(|t| schedule.grid()[(f, t)].to_string())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn read_schedule_csv(reader: impl Read) -> Result<Schedule, ConfigError> {
    let mut n = None;
    let mut rows: Vec<Vec<u16>> = Vec::new();
    for line in BufReader::new(reader).lines() {
        let line = line.map_err(|e| ConfigError::invalid(format!("read error: {e}")))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for token in rest.split_whitespace() {
                if let Some(v) = token.strip_prefix("N=") {
                    n = Some(
                        v.parse::<usize>()
                            .map_err(|_| ConfigError::invalid("bad N= header"))?,
                    );
                }
            }
            continue;
        }
        let row: Result<Vec<u16>, _> = line.split(',').map(|c| c.trim().parse::<u16>()).collect();
        rows.push(row.map_err(|_| ConfigError::invalid(format!("bad grid row: {line}")))?);
    }
    let n = n.ok_or_else(|| ConfigError::invalid("missing `# N=<n>` header"))?;
    if rows.is_empty() {
        return Err(ConfigError::invalid("empty schedule grid"));
    }
    let grid = Mat2::from_rows(&rows);
    Schedule::from_grid(n, grid).map_err(|e| ConfigError::invalid(format!("invalid grid: {e}")))
}

/// Power matrix as CSV: one row per VUE, one column per timeslot, mW.
pub fn power_csv(power: &PowerMatrix, comments: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# N={} T={}\n", power.n(), power.t()));
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    for i in 0..power.n() {
        let row: Vec<String> = (0..power.t())
            .map(|t| format!("{}", power.get(i, t)))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `xValues` column plus one column per labeled series.
pub fn table_csv(x_name: &str, x: &[String], series: &[(String, Vec<String>)]) -> String {
    let mut out = String::new();
    out.push_str(x_name);
    for (label, _) in series {
        out.push(',');
        out.push_str(label);
    }
    out.push('\n');
    for (idx, xv) in x.iter().enumerate() {
        out.push_str(xv);
        for (_, col) in series {
            out.push(',');
            out.push_str(&col[idx]);
        }
        out.push('\n');
    }
    out
}

pub fn write_string(path: &Path, body: &str) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_atomic(path, body.as_bytes())
}

/// Emit to a file, or stdout when no path is given.
pub fn emit(path: Option<&Path>, body: &str) -> io::Result<()> {
    match path {
        Some(p) => write_string(p, body),
        None => io::stdout().write_all(body.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_roundtrip() {
        let mut grid = Mat2::filled(3, 2, 0u16);
        grid[(0, 0)] = 2;
        grid[(2, 1)] = 1;
        let s = Schedule::from_grid(2, grid).unwrap();
        let text = schedule_csv(&s, &["algo=bis w=1 seed=7".into()]);
        assert!(text.starts_with("# N=2 F=3 T=2\n"));
        assert!(text.contains("# algo=bis w=1 seed=7"));
        let back = read_schedule_csv(text.as_bytes()).unwrap();
        assert_eq!(&back, &s);
    }

    #[test]
    fn schedule_read_rejects_garbage() {
        assert!(read_schedule_csv("1,2\n".as_bytes()).is_err()); // no header
        assert!(read_schedule_csv("# N=1\n9,9\n".as_bytes()).is_err()); // out of range
        assert!(read_schedule_csv("# N=2\n".as_bytes()).is_err()); // empty
        assert!(read_schedule_csv("# N=2\n1\n1\n".as_bytes()).is_err()); // duplicate in t
                                                                         // Same VUE in both timeslots of one row is legal.
        assert!(read_schedule_csv("# N=2\n1,1\n".as_bytes()).is_ok());
    }

    #[test]
    fn table_layout() {
        let text = table_csv(
            "xValues",
            &["1".into(), "2".into()],
            &[
                ("a".into(), vec!["0.5".into(), "0.75".into()]),
                ("b".into(), vec!["1".into(), "2".into()]),
            ],
        );
        assert_eq!(text, "xValues,a,b\n1,0.5,1\n2,0.75,2\n");
    }

    #[test]
    fn scenario_and_channel_headers() {
        let s = ConvoyScenario::sample(4, 10.0, 48.6, 3).unwrap();
        let text = scenario_csv(&s);
        assert!(text.starts_with("# N=4\n# seed=3\n"));
        let params = v2vsim_core::ChannelParams::highway();
        let h = ChannelMatrix::generate(&s, &params, v2vsim_core::Duplex::Half, 11).unwrap();
        let text = channel_csv(&h, 11);
        assert!(text.starts_with("# N=4\n# seed=11\n"));
        assert_eq!(text.lines().count(), 6);
    }
}
