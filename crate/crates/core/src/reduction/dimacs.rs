//! DIMACS CNF reading and writing for width-3 formulas.

use std::fmt::Write as _;

use super::{CnfFormula, Literal};
use crate::error::{Error, Result};

/// Parses `p cnf <vars> <clauses>` followed by zero-terminated clauses.
///
/// Lines starting with `c` are comments; a line starting with `%` ends the
/// input (SATLIB convention). Every clause must have exactly three literals
/// over distinct variables.
pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<[Literal; 3]> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(lineno, "duplicate problem line"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(Error::parse(lineno, "expected `p cnf <vars> <clauses>`"));
            }
            let vars = fields[2]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad variable count `{}`", fields[2])))?;
            let count = fields[3]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad clause count `{}`", fields[3])))?;
            header = Some((vars, count));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(Error::parse(lineno, "clause before the problem line"));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(finish_clause(&current, lineno)?);
                current.clear();
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > vars {
                return Err(Error::parse(lineno, format!("variable {var} exceeds declared {vars}")));
            }
            current.push(Literal::new(var - 1, lit < 0));
        }
    }

    let Some((vars, count)) = header else {
        return Err(Error::parse(last_line.max(1), "missing problem line"));
    };
    if !current.is_empty() {
        return Err(Error::parse(last_line, "unterminated clause"));
    }
    if clauses.len() != count {
        return Err(Error::parse(
            last_line.max(1),
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(vars, clauses)
}

fn finish_clause(lits: &[Literal], lineno: usize) -> Result<[Literal; 3]> {
    let clause: [Literal; 3] = lits
        .try_into()
        .map_err(|_| Error::parse(lineno, format!("clause width {}, expected 3", lits.len())))?;
    let [a, b, c] = clause.map(|l| l.var);
    if a == b || a == c || b == c {
        return Err(Error::parse(lineno, "repeated variable in clause"));
    }
    Ok(clause)
}

pub fn to_dimacs(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.num_vars(), phi.clauses().len());
    for clause in phi.clauses() {
        for l in clause {
            let v = l.var as i64 + 1;
            let _ = write!(out, "{} ", if l.negated { -v } else { v });
        }
        out.push_str("0\n");
    }
    out
}
