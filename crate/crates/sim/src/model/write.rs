//! LP-format serialization.
//!
//! Numeric literals use 17 significant digits so every f64 coefficient
//! round-trips exactly; at 12 digits the big-M rows (constants in the
//! thousands of mW) pick up absolute errors of a few 1e-9, which is the
//! same order as the row-satisfaction tolerance the emitted models are
//! verified against.

use super::read::{LpModel, LpRow, Sense};
use std::io::{self, Write};

const LINE_WIDTH: usize = 76;

fn fmt_coef(value: f64) -> String {
    format!("{value:.16e}")
}

struct LineWriter<'a, W: Write> {
    out: &'a mut W,
    column: usize,
}

impl<'a, W: Write> LineWriter<'a, W> {
    fn new(out: &'a mut W) -> Self {
        LineWriter { out, column: 0 }
    }

    fn push(&mut self, piece: &str) -> io::Result<()> {
        if self.column + piece.len() + 1 > LINE_WIDTH && self.column > 0 {
            writeln!(self.out)?;
            write!(self.out, "   ")?;
            self.column = 3;
        }
        write!(self.out, " {piece}")?;
        self.column += piece.len() + 1;
        Ok(())
    }

    fn finish(self) -> io::Result<()> {
        writeln!(self.out)
    }
}

fn push_term<W: Write>(
    lw: &mut LineWriter<'_, W>,
    first: bool,
    coef: f64,
    body: &str,
) -> io::Result<()> {
    let sign = if coef < 0.0 {
        "-"
    } else if first {
        ""
    } else {
        "+"
    };
    let magnitude = coef.abs();
    let piece = if magnitude == 1.0 {
        format!(
            "{sign}{sep}{body}",
            sep = if sign.is_empty() { "" } else { " " }
        )
    } else {
        format!(
            "{sign}{sep}{} {body}",
            fmt_coef(magnitude),
            sep = if sign.is_empty() { "" } else { " " }
        )
    };
    lw.push(&piece)
}

fn write_expr<W: Write>(
    out: &mut W,
    label: &str,
    linear: &[(f64, String)],
    quad: &[(f64, String, String)],
    tail: Option<(Sense, f64)>,
) -> io::Result<()> {
    write!(out, " {label}:")?;
    let mut lw = LineWriter::new(out);
    lw.column = label.len() + 2;
    let mut first = true;
    for (c, v) in linear {
        push_term(&mut lw, first, *c, v)?;
        first = false;
    }
    if !quad.is_empty() {
        lw.push(if first { "[" } else { "+ [" })?;
        let mut qfirst = true;
        for (c, a, b) in quad {
            push_term(&mut lw, qfirst, *c, &format!("{a} * {b}"))?;
            qfirst = false;
        }
        lw.push("]")?;
        first = false;
    }
    if first {
        // An empty expression would be malformed; nothing we emit hits this.
        lw.push("0")?;
    }
    if let Some((sense, rhs)) = tail {
        lw.push(&format!("{sense} {}", fmt_coef(rhs)))?;
    }
    lw.finish()
}

/// Serialize a model in LP format.
pub fn write_lp(model: &LpModel, comments: &[String], out: &mut impl Write) -> io::Result<()> {
    for c in comments {
        writeln!(out, "\\ {c}")?;
    }
    writeln!(
        out,
        "{}",
        if model.maximize {
            "Maximize"
        } else {
            "Minimize"
        }
    )?;
    write_expr(out, "obj", &model.objective, &[], None)?;
    writeln!(out, "Subject To")?;
    for row in &model.rows {
        write_row(out, row)?;
    }
    if !model.bounds.is_empty() {
        writeln!(out, "Bounds")?;
        for (var, lo, hi) in &model.bounds {
            if lo.is_infinite() && hi.is_infinite() {
                writeln!(out, " {var} free")?;
            } else {
                writeln!(out, " {} <= {var} <= {}", fmt_coef(*lo), fmt_coef(*hi))?;
            }
        }
    }
    if !model.binaries.is_empty() {
        writeln!(out, "Binaries")?;
        let mut lw = LineWriter::new(out);
        for v in &model.binaries {
            lw.push(v)?;
        }
        lw.finish()?;
    }
    writeln!(out, "End")
}

fn write_row(out: &mut impl Write, row: &LpRow) -> io::Result<()> {
    write_expr(
        out,
        &row.name,
        &row.linear,
        &row.quad,
        Some((row.sense, row.rhs)),
    )
}
