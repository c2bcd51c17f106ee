//! LP-format model representation, reader and row evaluator.
//!
//! Covers the subset the emitter produces: a Maximize/Minimize objective,
//! `Subject To` rows with optional bilinear terms in a bracket section,
//! `Bounds`, `Binaries` and `End`. The evaluator substitutes a variable
//! assignment into every row, bound and integrality declaration, which is
//! how emitted models are checked against simulator outcomes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub name: String,
    pub linear: Vec<(f64, String)>,
    /// Bilinear terms `(coefficient, var_a, var_b)`.
    pub quad: Vec<(f64, String, String)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub maximize: bool,
    pub objective: Vec<(f64, String)>,
    pub rows: Vec<LpRow>,
    /// Explicit variable bounds `(var, lo, hi)`.
    pub bounds: Vec<(String, f64, f64)>,
    pub binaries: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("parse error at token {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("missing value for variable {0}")]
    MissingVariable(String),
}

/// A row, bound or integrality declaration an assignment fails to satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: String,
    pub lhs: f64,
    pub sense: Sense,
    pub rhs: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} violated",
            self.constraint, self.lhs, self.sense, self.rhs
        )
    }
}

impl LpModel {
    /// Every variable mentioned anywhere in the model.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        for (_, v) in &self.objective {
            vars.insert(v.clone());
        }
        for row in &self.rows {
            for (_, v) in &row.linear {
                vars.insert(v.clone());
            }
            for (_, a, b) in &row.quad {
                vars.insert(a.clone());
                vars.insert(b.clone());
            }
        }
        for (v, _, _) in &self.bounds {
            vars.insert(v.clone());
        }
        for v in &self.binaries {
            vars.insert(v.clone());
        }
        vars
    }

    pub fn continuous_count(&self) -> usize {
        let binaries: BTreeSet<&String> = self.binaries.iter().collect();
        self.variables()
            .iter()
            .filter(|v| !binaries.contains(v))
            .count()
    }

    pub fn linear_row_count(&self) -> usize {
        self.rows.iter().filter(|r| r.quad.is_empty()).count()
    }

    pub fn quadratic_row_count(&self) -> usize {
        self.rows.iter().filter(|r| !r.quad.is_empty()).count()
    }

    pub fn objective_value(&self, assignment: &BTreeMap<String, f64>) -> Result<f64, LpError> {
        let mut total = 0.0;
        for (c, v) in &self.objective {
            total += c * lookup(assignment, v)?;
        }
        Ok(total)
    }

    pub fn eval_row(
        &self,
        row: &LpRow,
        assignment: &BTreeMap<String, f64>,
    ) -> Result<f64, LpError> {
        let mut lhs = 0.0;
        for (c, v) in &row.linear {
            lhs += c * lookup(assignment, v)?;
        }
        for (c, a, b) in &row.quad {
            lhs += c * lookup(assignment, a)? * lookup(assignment, b)?;
        }
        Ok(lhs)
    }

    /// Check the assignment against every row, bound and binary declaration
    /// with the given absolute tolerance.
    pub fn check(
        &self,
        assignment: &BTreeMap<String, f64>,
        tol: f64,
    ) -> Result<Vec<Violation>, LpError> {
        let mut violations = Vec::new();
        let ok = |lhs: f64, sense: Sense, rhs: f64| match sense {
            Sense::Le => lhs <= rhs + tol,
            Sense::Ge => lhs >= rhs - tol,
            Sense::Eq => (lhs - rhs).abs() <= tol,
        };
        for row in &self.rows {
            let lhs = self.eval_row(row, assignment)?;
            if !ok(lhs, row.sense, row.rhs) {
                violations.push(Violation {
                    constraint: row.name.clone(),
                    lhs,
                    sense: row.sense,
                    rhs: row.rhs,
                });
            }
        }
        for (v, lo, hi) in &self.bounds {
            let x = lookup(assignment, v)?;
            if x < lo - tol || x > hi + tol {
                violations.push(Violation {
                    constraint: format!("bound({v})"),
                    lhs: x,
                    sense: Sense::Le,
                    rhs: *hi,
                });
            }
        }
        for v in &self.binaries {
            let x = lookup(assignment, v)?;
            if (x - 0.0).abs() > tol && (x - 1.0).abs() > tol {
                violations.push(Violation {
                    constraint: format!("binary({v})"),
                    lhs: x,
                    sense: Sense::Eq,
                    rhs: x.round(),
                });
            }
        }
        Ok(violations)
    }
}

fn lookup(assignment: &BTreeMap<String, f64>, var: &str) -> Result<f64, LpError> {
    assignment
        .get(var)
        .copied()
        .ok_or_else(|| LpError::MissingVariable(var.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Word(String),
    Number(f64),
    Plus,
    Minus,
    Star,
    Colon,
    LBracket,
    RBracket,
    Le,
    Ge,
    Eq,
}

fn tokenize(text: &str) -> Result<Vec<Token>, LpError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    let err = |at: usize, msg: &str| LpError::Parse {
        at,
        msg: msg.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            '\\' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            c if c.is_whitespace() => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            ':' => {
                tokens.push(Token::Colon);
                i += 1;
            }
            '[' => {
                tokens.push(Token::LBracket);
                i += 1;
            }
            ']' => {
                tokens.push(Token::RBracket);
                i += 1;
            }
            '<' | '>' | '=' => {
                let sense = match c {
                    '<' => Token::Le,
                    '>' => Token::Ge,
                    _ => Token::Eq,
                };
                i += 1;
                if c != '=' && i < bytes.len() && bytes[i] == b'=' {
                    i += 1;
                }
                tokens.push(sense);
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < bytes.len() {
                    let d = bytes[i] as char;
                    if d.is_ascii_digit() || d == '.' {
                        i += 1;
                    } else if (d == 'e' || d == 'E')
                        && i + 1 < bytes.len()
                        && (bytes[i + 1].is_ascii_digit()
                            || bytes[i + 1] == b'+'
                            || bytes[i + 1] == b'-')
                    {
                        i += 2;
                    } else {
                        break;
                    }
                }
                let number: f64 = text[start..i]
                    .parse()
                    .map_err(|_| err(start, "bad number"))?;
                tokens.push(Token::Number(number));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() {
                    let d = bytes[i] as char;
                    if d.is_ascii_alphanumeric() || d == '_' || d == '.' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Word(text[start..i].to_string()));
            }
            _ => return Err(err(i, "unexpected character")),
        }
    }
    Ok(tokens)
}

fn keyword(tokens: &[Token], pos: usize) -> Option<String> {
    match tokens.get(pos) {
        Some(Token::Word(w)) => Some(w.to_ascii_lowercase()),
        _ => None,
    }
}

fn is_section_start(tokens: &[Token], pos: usize) -> bool {
    matches!(
        keyword(tokens, pos).as_deref(),
        Some("subject" | "st" | "bounds" | "binaries" | "binary" | "bin" | "end" | "general")
    )
}

/// Parse an LP-format model (the emitted subset).
pub fn parse_lp(text: &str) -> Result<LpModel, LpError> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let err = |at: usize, msg: &str| LpError::Parse {
        at,
        msg: msg.to_string(),
    };

    let maximize = match keyword(&tokens, pos).as_deref() {
        Some("maximize" | "max") => true,
        Some("minimize" | "min") => false,
        _ => return Err(err(pos, "expected Maximize or Minimize")),
    };
    pos += 1;

    // Optional objective label.
    if matches!(tokens.get(pos), Some(Token::Word(_)))
        && matches!(tokens.get(pos + 1), Some(Token::Colon))
        && !is_section_start(&tokens, pos)
    {
        pos += 2;
    }
    let ((objective, _quad), next) = parse_expr(&tokens, pos)?;
    pos = next;

    match keyword(&tokens, pos).as_deref() {
        Some("subject") => {
            pos += 1;
            if keyword(&tokens, pos).as_deref() == Some("to") {
                pos += 1;
            }
        }
        Some("st") => pos += 1,
        _ => return Err(err(pos, "expected Subject To")),
    }

    let mut rows = Vec::new();
    while !matches!(
        keyword(&tokens, pos).as_deref(),
        Some("bounds" | "binaries" | "binary" | "bin" | "end")
    ) {
        let Some(Token::Word(name)) = tokens.get(pos) else {
            return Err(err(pos, "expected row name"));
        };
        if !matches!(tokens.get(pos + 1), Some(Token::Colon)) {
            return Err(err(pos + 1, "expected ':' after row name"));
        }
        let ((linear, quad), next) = parse_expr(&tokens, pos + 2)?;
        pos = next;
        let sense = match tokens.get(pos) {
            Some(Token::Le) => Sense::Le,
            Some(Token::Ge) => Sense::Ge,
            Some(Token::Eq) => Sense::Eq,
            _ => return Err(err(pos, "expected <=, >= or =")),
        };
        pos += 1;
        let rhs = match tokens.get(pos) {
            Some(Token::Number(v)) => *v,
            Some(Token::Minus) => match tokens.get(pos + 1) {
                Some(Token::Number(v)) => {
                    pos += 1;
                    -v
                }
                _ => return Err(err(pos, "expected number after '-'")),
            },
            _ => return Err(err(pos, "expected right-hand side")),
        };
        pos += 1;
        rows.push(LpRow {
            name: name.clone(),
            linear,
            quad,
            sense,
            rhs,
        });
    }

    let mut bounds = Vec::new();
    if matches!(keyword(&tokens, pos).as_deref(), Some("bounds")) {
        pos += 1;
        while !matches!(
            keyword(&tokens, pos).as_deref(),
            Some("binaries" | "binary" | "bin" | "end")
        ) {
            // `lo <= var <= hi`  |  `var <= hi`  |  `var >= lo`  |  `var free`
            match tokens.get(pos) {
                Some(Token::Number(lo)) => {
                    let lo = *lo;
                    if !matches!(tokens.get(pos + 1), Some(Token::Le)) {
                        return Err(err(pos + 1, "expected <= in bound"));
                    }
                    let Some(Token::Word(var)) = tokens.get(pos + 2) else {
                        return Err(err(pos + 2, "expected variable in bound"));
                    };
                    if !matches!(tokens.get(pos + 3), Some(Token::Le)) {
                        return Err(err(pos + 3, "expected <= in bound"));
                    }
                    let Some(Token::Number(hi)) = tokens.get(pos + 4) else {
                        return Err(err(pos + 4, "expected upper bound"));
                    };
                    bounds.push((var.clone(), lo, *hi));
                    pos += 5;
                }
                Some(Token::Word(var)) => {
                    let var = var.clone();
                    match tokens.get(pos + 1) {
                        Some(Token::Word(w)) if w.eq_ignore_ascii_case("free") => {
                            bounds.push((var, f64::NEG_INFINITY, f64::INFINITY));
                            pos += 2;
                        }
                        Some(Token::Le) => {
                            let Some(Token::Number(hi)) = tokens.get(pos + 2) else {
                                return Err(err(pos + 2, "expected bound value"));
                            };
                            bounds.push((var, 0.0, *hi));
                            pos += 3;
                        }
                        Some(Token::Ge) => {
                            let Some(Token::Number(lo)) = tokens.get(pos + 2) else {
                                return Err(err(pos + 2, "expected bound value"));
                            };
                            bounds.push((var, *lo, f64::INFINITY));
                            pos += 3;
                        }
                        _ => return Err(err(pos + 1, "bad bound syntax")),
                    }
                }
                _ => return Err(err(pos, "bad bounds entry")),
            }
        }
    }

    let mut binaries = Vec::new();
    if matches!(
        keyword(&tokens, pos).as_deref(),
        Some("binaries" | "binary" | "bin")
    ) {
        pos += 1;
        while let Some(Token::Word(w)) = tokens.get(pos) {
            if w.eq_ignore_ascii_case("end") {
                break;
            }
            binaries.push(w.clone());
            pos += 1;
        }
    }

    if keyword(&tokens, pos).as_deref() != Some("end") {
        return Err(err(pos, "expected End"));
    }

    Ok(LpModel {
        maximize,
        objective,
        rows,
        bounds,
        binaries,
    })
}

type Expr = (Vec<(f64, String)>, Vec<(f64, String, String)>);

/// Parse a linear expression with an optional `[ bilinear ]` section.
/// Stops at a sense token or section keyword. Returns the expression and
/// the position just past it.
fn parse_expr(tokens: &[Token], mut pos: usize) -> Result<(Expr, usize), LpError> {
    let mut expr: Expr = (Vec::new(), Vec::new());
    let err = |at: usize, msg: &str| LpError::Parse {
        at,
        msg: msg.to_string(),
    };
    let mut in_bracket = false;
    loop {
        match tokens.get(pos) {
            Some(Token::LBracket) => {
                in_bracket = true;
                pos += 1;
            }
            Some(Token::RBracket) => {
                in_bracket = false;
                pos += 1;
            }
            Some(Token::Le | Token::Ge | Token::Eq) | None => break,
            Some(Token::Word(_)) if !in_bracket && is_section_start(tokens, pos) => break,
            _ => {
                // term: [+|-] [number] word [* word]
                let mut sign = 1.0;
                loop {
                    match tokens.get(pos) {
                        Some(Token::Plus) => pos += 1,
                        Some(Token::Minus) => {
                            sign = -sign;
                            pos += 1;
                        }
                        _ => break,
                    }
                }
                // `+ [` separates the linear part from the bilinear section.
                if matches!(tokens.get(pos), Some(Token::LBracket)) {
                    if sign < 0.0 {
                        return Err(err(pos, "negated bracket sections are not supported"));
                    }
                    in_bracket = true;
                    pos += 1;
                    continue;
                }
                let coef = match tokens.get(pos) {
                    Some(Token::Number(v)) => {
                        pos += 1;
                        *v
                    }
                    _ => 1.0,
                };
                let Some(Token::Word(a)) = tokens.get(pos) else {
                    return Err(err(pos, "expected variable name"));
                };
                pos += 1;
                if in_bracket {
                    if !matches!(tokens.get(pos), Some(Token::Star)) {
                        return Err(err(pos, "expected '*' in bilinear term"));
                    }
                    let Some(Token::Word(b)) = tokens.get(pos + 1) else {
                        return Err(err(pos + 1, "expected second variable"));
                    };
                    expr.1.push((sign * coef, a.clone(), b.clone()));
                    pos += 2;
                } else {
                    expr.0.push((sign * coef, a.clone()));
                }
            }
        }
    }
    Ok((expr, pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\\ demo model\n\
Maximize\n obj: W_1_2 + W_2_1 - 1.0e-4 P_1_1\n\
Subject To\n\
 sinr_1_1_1: - 3.8e3 Y_1_1_1 + [ 2.5e-6 X_1_1_1 * P_1_1 ] >= -3.8e3\n\
 wcap_1_2: W_1_2 <= 1\n\
 fair_1: W_1_2 - L >= 0\n\
Bounds\n\
 0 <= P_1_1 <= 2.5118864315095797e2\n\
Binaries\n\
 X_1_1_1 Y_1_1_1\n\
End\n";

    #[test]
    fn parses_emitted_subset() {
        let m = parse_lp(SAMPLE).unwrap();
        assert!(m.maximize);
        assert_eq!(m.objective.len(), 3);
        assert_eq!(m.rows.len(), 3);
        assert_eq!(m.rows[0].quad.len(), 1);
        assert_eq!(m.rows[0].linear.len(), 1);
        assert_eq!(m.binaries, vec!["X_1_1_1", "Y_1_1_1"]);
        assert_eq!(m.bounds.len(), 1);
        // W_1_2, W_2_1, P_1_1, L
        assert_eq!(m.continuous_count(), 4);
    }

    #[test]
    fn evaluates_and_checks() {
        let m = parse_lp(SAMPLE).unwrap();
        let mut a = BTreeMap::new();
        for (k, v) in [
            ("W_1_2", 1.0),
            ("W_2_1", 0.0),
            ("P_1_1", 200.0),
            ("X_1_1_1", 1.0),
            ("Y_1_1_1", 0.0),
            ("L", 0.0),
        ] {
            a.insert(k.to_string(), v);
        }
        assert!((m.objective_value(&a).unwrap() - (1.0 - 1.0e-4 * 200.0)).abs() < 1e-12);
        assert!(m.check(&a, 1e-9).unwrap().is_empty());
        // Violate the cap.
        a.insert("W_1_2".into(), 2.0);
        let violations = m.check(&a, 1e-9).unwrap();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].constraint, "wcap_1_2");
        // Fractional binary is reported.
        a.insert("W_1_2".into(), 1.0);
        a.insert("X_1_1_1".into(), 0.5);
        let violations = m.check(&a, 1e-9).unwrap();
        assert!(violations.iter().any(|v| v.constraint == "binary(X_1_1_1)"));
    }

    #[test]
    fn missing_variable_is_an_error() {
        let m = parse_lp(SAMPLE).unwrap();
        let a = BTreeMap::new();
        assert!(matches!(
            m.check(&a, 1e-9),
            Err(LpError::MissingVariable(_))
        ));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_lp("obj: x >= 1 End").is_err()); // no objective sense
        assert!(parse_lp("Maximize x\nSubject To\n r1: x 1\nEnd").is_err()); // no sense
        assert!(parse_lp("Maximize x\nSubject To\n r1: x <= 1\n").is_err()); // no End
        assert!(parse_lp("Maximize x\nSubject To\n r1: [ x ] <= 1\nEnd").is_err());
        // no '*'
    }
}
