//! QDIMACS reader and writer.

use std::fmt::Write as _;

use thiserror::Error;

use crate::qbf::{Clause, Lit, Prefix, PrefixError, Qbf, Quantifier, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QdimacsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: variable {var} exceeds the header's maximum {max}")]
    Undeclared { line: usize, var: u32, max: u32 },
    #[error("line {line}: variable {var} is free (not bound by any quantifier)")]
    Free { line: usize, var: u32 },
    #[error("line {line}: clause is a tautology")]
    Tautology { line: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> QdimacsError {
    QdimacsError::Syntax { line, message: message.into() }
}

/// Parses zero-terminated integers, requiring the terminator to be the last token.
fn zero_terminated(line: usize, tokens: &[&str]) -> Result<Vec<i32>, QdimacsError> {
    let mut values = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let v: i32 = tok.parse().map_err(|_| syntax(line, format!("bad integer `{tok}`")))?;
        values.push(v);
    }
    match values.pop() {
        Some(0) => {}
        _ => return Err(syntax(line, "line must end with 0")),
    }
    if values.contains(&0) {
        return Err(syntax(line, "0 before the end of the line"));
    }
    Ok(values)
}

/// Reads a QDIMACS document. Adjacent quantifier lines of the same kind are
/// merged into one block.
pub fn parse_qdimacs(text: &str) -> Result<Qbf, QdimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut prefix = Prefix::new();
    let mut clauses = Vec::new();
    let mut clause_lines = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let Some(&first) = tokens.first() else { continue };
        match first {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate header"));
                }
                if tokens.len() != 4 || tokens[1] != "cnf" {
                    return Err(syntax(line, "expected `p cnf <vars> <clauses>`"));
                }
                let vars = tokens[2].parse().map_err(|_| syntax(line, "bad variable count"))?;
                let count = tokens[3].parse().map_err(|_| syntax(line, "bad clause count"))?;
                header = Some((vars, count));
            }
            "a" | "e" => {
                let (max, _) = header.ok_or_else(|| syntax(line, "quantifier line before header"))?;
                if !clauses.is_empty() {
                    return Err(syntax(line, "quantifier line after clauses"));
                }
                let values = zero_terminated(line, &tokens[1..])?;
                let mut vars = Vec::with_capacity(values.len());
                for v in values {
                    if v < 0 {
                        return Err(syntax(line, "negative id in quantifier line"));
                    }
                    if v as u32 > max {
                        return Err(QdimacsError::Undeclared { line, var: v as u32, max });
                    }
                    vars.push(Var(v as u32));
                }
                let q = if first == "a" { Quantifier::Universal } else { Quantifier::Existential };
                prefix.push(q, &vars).map_err(|e| match e {
                    PrefixError::Redeclared(v) => syntax(line, format!("variable {v} bound twice")),
                    other => syntax(line, other.to_string()),
                })?;
            }
            _ => {
                let (max, _) = header.ok_or_else(|| syntax(line, "clause before header"))?;
                let values = zero_terminated(line, &tokens)?;
                for &v in &values {
                    let var = v.unsigned_abs();
                    if var > max {
                        return Err(QdimacsError::Undeclared { line, var, max });
                    }
                    if !prefix.is_declared(Var(var)) {
                        return Err(QdimacsError::Free { line, var });
                    }
                }
                let clause = Clause::new(values.into_iter().map(Lit::from_dimacs).collect());
                if clause.is_tautology() {
                    return Err(QdimacsError::Tautology { line });
                }
                clauses.push(clause);
                clause_lines.push(line);
            }
        }
    }

    let (num_vars, count) = header.ok_or_else(|| syntax(text.lines().count().max(1), "missing header"))?;
    if count != clauses.len() {
        return Err(syntax(
            text.lines().count().max(1),
            format!("header announces {count} clauses, found {}", clauses.len()),
        ));
    }
    let labels = vec![None; clauses.len()];
    Ok(Qbf { prefix, clauses, labels, num_vars })
}

/// Writes a formula in QDIMACS: header, one line per block, one line per clause.
pub fn emit_qdimacs(qbf: &Qbf) -> String {
    let mut out = String::new();
    let max = qbf.num_vars.max(qbf.prefix.max_var());
    writeln!(out, "p cnf {} {}", max, qbf.clauses.len()).unwrap();
    for block in qbf.prefix.blocks() {
        out.push(block.quantifier.symbol());
        for v in &block.vars {
            write!(out, " {v}").unwrap();
        }
        out.push_str(" 0\n");
    }
    for c in &qbf.clauses {
        let mut first = true;
        for l in c {
            if !first {
                out.push(' ');
            }
            write!(out, "{l}").unwrap();
            first = false;
        }
        if first {
            out.push('0');
        } else {
            out.push_str(" 0");
        }
        out.push('\n');
    }
    out
}
