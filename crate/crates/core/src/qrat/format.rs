//! Text form of QRAT proofs and of the annotated-variable map.

use std::fmt::Write as _;

use thiserror::Error;

use crate::annotation::Annotation;
use crate::qbf::{Lit, Var};

use super::{QratProof, QratStep};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct QratParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> QratParseError {
    QratParseError { line, message: message.into() }
}

fn ints(line: usize, toks: &[&str]) -> Result<Vec<i32>, QratParseError> {
    let mut out = Vec::with_capacity(toks.len());
    for t in toks {
        out.push(t.parse::<i32>().map_err(|_| err(line, format!("bad integer `{t}`")))?);
    }
    match out.pop() {
        Some(0) => {}
        _ => return Err(err(line, "line must end with 0")),
    }
    if out.contains(&0) {
        return Err(err(line, "0 before the end of the line"));
    }
    Ok(out)
}

fn lits(values: &[i32]) -> Vec<Lit> {
    values.iter().map(|&v| Lit::from_dimacs(v)).collect()
}

pub fn parse_qrat(text: &str) -> Result<QratProof, QratParseError> {
    let mut proof = QratProof::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let step = match toks.first() {
            None | Some(&"c") => continue,
            Some(&"x") => {
                let v = ints(line, &toks[1..])?;
                if v.len() != 2 || v[0] < 0 || v[1] < 0 {
                    return Err(err(line, "expected `x <new-id> <anchor-id> 0`"));
                }
                QratStep::Declare { var: Var(v[0] as u32), anchor: Var(v[1] as u32) }
            }
            Some(&"d") => QratStep::Delete(lits(&ints(line, &toks[1..])?)),
            Some(&"u") => {
                let v = ints(line, &toks[1..])?;
                let (&first, rest) = v.split_first().ok_or_else(|| err(line, "`u` needs a literal"))?;
                QratStep::DropUniv { lit: Lit::from_dimacs(first), rest: lits(rest) }
            }
            Some(_) => QratStep::Add(lits(&ints(line, &toks)?)),
        };
        proof.push(step);
    }
    Ok(proof)
}

fn push_lits(out: &mut String, lits: &[Lit]) {
    for l in lits {
        write!(out, "{l} ").unwrap();
    }
    out.push_str("0\n");
}

pub fn emit_qrat(proof: &QratProof) -> String {
    let mut out = String::new();
    for step in &proof.steps {
        match step {
            QratStep::Declare { var, anchor } => writeln!(out, "x {var} {anchor} 0").unwrap(),
            QratStep::Add(l) => push_lits(&mut out, l),
            QratStep::Delete(l) => {
                out.push_str("d ");
                push_lits(&mut out, l);
            }
            QratStep::DropUniv { lit, rest } => {
                write!(out, "u {lit} ").unwrap();
                push_lits(&mut out, rest);
            }
        }
    }
    out
}

/// One line of the sidecar map: fresh variable `fresh` stands for `base^annotation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapEntry {
    pub fresh: Var,
    pub base: Var,
    /// Signed universal ids in block order.
    pub annotation: Vec<i32>,
}

impl MapEntry {
    pub fn annotation(&self) -> Annotation {
        Annotation::from_signed(&self.annotation)
    }
}

pub fn parse_map(text: &str) -> Result<Vec<MapEntry>, QratParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => continue,
            Some(&"m") => {}
            Some(t) => return Err(err(line, format!("unexpected token `{t}`"))),
        }
        let v = ints(line, &toks[1..])?;
        if v.len() < 2 || v[0] < 0 || v[1] < 0 {
            return Err(err(line, "expected `m <fresh-id> <base-id> <s-ulit>* 0`"));
        }
        out.push(MapEntry { fresh: Var(v[0] as u32), base: Var(v[1] as u32), annotation: v[2..].to_vec() });
    }
    Ok(out)
}

pub fn emit_map(entries: &[MapEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        write!(out, "m {} {}", e.fresh, e.base).unwrap();
        for a in &e.annotation {
            write!(out, " {a}").unwrap();
        }
        out.push_str(" 0\n");
    }
    out
}
