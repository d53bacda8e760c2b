//! Line format for expansion proofs.
//!
//! ```text
//! c calculus ircalc
//! s 1 a 3 2 4^{3} 0
//! s 6 i 3 1 | 2^{1} 4^{1,3} 0
//! s 7 r 6 2 4^{1,3} 2^{1} 0
//! ```
//!
//! Axiom lines may carry a full universal assignment before a `|`
//! (∀Exp+Res only). Input clause indices and step ids are 1-based.

use std::fmt::Write as _;

use thiserror::Error;

use crate::annotation::{AClause, ALit, Annotation};
use crate::qbf::{Lit, Prefix};

use super::{Calculus, ExpansionProof, ExpansionStep, StepKind};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ProofParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ProofParseError {
    ProofParseError { line, message: message.into() }
}

fn parse_int(line: usize, tok: &str) -> Result<i32, ProofParseError> {
    tok.parse().map_err(|_| err(line, format!("bad integer `{tok}`")))
}

fn parse_id(line: usize, tok: &str) -> Result<usize, ProofParseError> {
    match tok.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(err(line, format!("bad id `{tok}`"))),
    }
}

fn parse_signed_list(line: usize, toks: &[&str]) -> Result<Annotation, ProofParseError> {
    let mut values = Vec::with_capacity(toks.len());
    for t in toks {
        let v = parse_int(line, t)?;
        if v == 0 {
            return Err(err(line, "0 inside an assignment"));
        }
        if values.iter().any(|&w: &i32| w.unsigned_abs() == v.unsigned_abs()) {
            return Err(err(line, format!("universal {} assigned twice", v.unsigned_abs())));
        }
        values.push(v);
    }
    Ok(Annotation::from_signed(&values))
}

/// Parses `[-]<id>[^{<s-ulit>,...}]`.
pub(crate) fn parse_alit(line: usize, tok: &str) -> Result<ALit, ProofParseError> {
    let (base, ann) = match tok.split_once('^') {
        None => (tok, None),
        Some((b, rest)) => {
            let inner = rest
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| err(line, format!("bad annotation in `{tok}`")))?;
            (b, Some(inner))
        }
    };
    let v = parse_int(line, base)?;
    if v == 0 {
        return Err(err(line, "literal 0 inside a clause"));
    }
    let ann = match ann {
        None | Some("") => Annotation::new(),
        Some(inner) => parse_signed_list(line, &inner.split(',').collect::<Vec<_>>())?,
    };
    Ok(ALit::new(Lit::from_dimacs(v), ann))
}

fn parse_clause(line: usize, toks: &[&str]) -> Result<AClause, ProofParseError> {
    match toks.split_last() {
        Some((&"0", body)) => {
            let lits = body.iter().map(|t| parse_alit(line, t)).collect::<Result<Vec<_>, _>>()?;
            Ok(AClause::new(lits))
        }
        _ => Err(err(line, "clause must end with 0")),
    }
}

/// Reads a proof. Semantic checks (declared variables, clause ranges, rule
/// applications) are left to the checker.
pub fn parse_expansion_proof(text: &str) -> Result<ExpansionProof, ProofParseError> {
    let mut calculus = None;
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None => continue,
            Some(&"c") => {
                if toks.get(1) == Some(&"calculus") {
                    if calculus.is_some() {
                        return Err(err(line, "duplicate calculus header"));
                    }
                    calculus = Some(match toks.get(2) {
                        Some(&"ircalc") if toks.len() == 3 => Calculus::IrCalc,
                        Some(&"expres") if toks.len() == 3 => Calculus::ExpRes,
                        _ => return Err(err(line, "expected `c calculus ircalc|expres`")),
                    });
                }
                continue;
            }
            Some(&"s") => {}
            Some(other) => return Err(err(line, format!("unexpected token `{other}`"))),
        }
        if calculus.is_none() {
            return Err(err(line, "step before the calculus header"));
        }
        if toks.len() < 4 {
            return Err(err(line, "truncated step"));
        }
        let id = parse_id(line, toks[1])?;
        if id != steps.len() + 1 {
            return Err(err(line, format!("expected step id {}, found {id}", steps.len() + 1)));
        }
        let rest = &toks[3..];
        let bar = rest.iter().position(|&t| t == "|");
        let step = match toks[2] {
            "a" => {
                let clause = parse_id(line, rest[0])? - 1;
                let (assignment, body) = match bar {
                    Some(b) => (Some(parse_signed_list(line, &rest[1..b])?), &rest[b + 1..]),
                    None => (None, &rest[1..]),
                };
                ExpansionStep { kind: StepKind::Axiom { clause, assignment }, result: parse_clause(line, body)? }
            }
            "i" => {
                let parent = parse_id(line, rest[0])? - 1;
                let b = bar.ok_or_else(|| err(line, "instantiation needs `|` after σ"))?;
                let sigma = parse_signed_list(line, &rest[1..b])?;
                ExpansionStep { kind: StepKind::Inst { parent, sigma }, result: parse_clause(line, &rest[b + 1..])? }
            }
            "r" => {
                if bar.is_some() || rest.len() < 4 {
                    return Err(err(line, "expected `r <p1> <p2> <pivot> <lits>* 0`"));
                }
                let left = parse_id(line, rest[0])? - 1;
                let right = parse_id(line, rest[1])? - 1;
                let pivot = parse_alit(line, rest[2])?;
                ExpansionStep { kind: StepKind::Res { left, right, pivot }, result: parse_clause(line, &rest[3..])? }
            }
            other => return Err(err(line, format!("unknown step kind `{other}`"))),
        };
        steps.push(step);
    }
    let calculus = calculus.ok_or_else(|| err(text.lines().count().max(1), "missing calculus header"))?;
    Ok(ExpansionProof { calculus, steps })
}

fn push_signed(out: &mut String, ann: &Annotation, prefix: &Prefix) {
    for v in ann.to_signed(prefix) {
        write!(out, " {v}").unwrap();
    }
}

fn push_clause(out: &mut String, c: &AClause, prefix: &Prefix) {
    for l in c {
        write!(out, " {}", l.display(prefix)).unwrap();
    }
    out.push_str(" 0\n");
}

pub fn emit_expansion_proof(p: &ExpansionProof, prefix: &Prefix) -> String {
    let mut out = format!("c calculus {}\n", p.calculus.name());
    for (i, step) in p.steps.iter().enumerate() {
        write!(out, "s {}", i + 1).unwrap();
        match &step.kind {
            StepKind::Axiom { clause, assignment } => {
                write!(out, " a {}", clause + 1).unwrap();
                if let Some(tau) = assignment {
                    push_signed(&mut out, tau, prefix);
                    out.push_str(" |");
                }
            }
            StepKind::Inst { parent, sigma } => {
                write!(out, " i {}", parent + 1).unwrap();
                push_signed(&mut out, sigma, prefix);
                out.push_str(" |");
            }
            StepKind::Res { left, right, pivot } => {
                write!(out, " r {} {} {}", left + 1, right + 1, pivot.display(prefix)).unwrap();
            }
        }
        push_clause(&mut out, &step.result, prefix);
    }
    out
}
