//! Brute-force ∀Exp+Res refutations: expand every universal assignment, then
//! run Davis–Putnam elimination over the annotated variables and keep the
//! resolution steps that lead to the empty clause.

use std::collections::HashSet;

use thiserror::Error;

use crate::annotation::{AClause, ALit, Annotation, VarTable};
use crate::qbf::{Clause, Lit, Qbf};

use super::{axiom_expres, Calculus, ExpansionProof, ExpansionStep, StepKind};

/// Default cap on the number of clauses in the expansion and in any DP round.
pub const DEFAULT_EXPANSION_BOUND: usize = 1 << 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("formula is true; no refutation exists")]
    FormulaTrue,
    #[error("clause set grew to {size}, above the bound of {bound}")]
    BoundExceeded { size: usize, bound: usize },
}

struct Node {
    clause: Clause,
    step: usize,
}

fn assignment(universals: &[crate::qbf::Var], bits: u64) -> Annotation {
    Annotation::from_pairs(universals.iter().enumerate().map(|(i, &u)| (u, bits >> i & 1 == 1)))
}

pub fn generate_expres_refutation(f: &Qbf, bound: usize) -> Result<ExpansionProof, GenerateError> {
    let universals = f.prefix.universals();
    if universals.len() >= 63 {
        return Err(GenerateError::BoundExceeded { size: usize::MAX, bound });
    }

    let mut steps: Vec<ExpansionStep> = Vec::new();
    let mut seen: HashSet<AClause> = HashSet::new();
    for bits in 0..(1u64 << universals.len()) {
        let tau = assignment(&universals, bits);
        for (i, c) in f.clauses.iter().enumerate() {
            let falsified = c.iter().filter(|l| f.prefix.is_universal(l.var())).all(|&l| tau.falsifies(l));
            if !falsified {
                continue;
            }
            let result = axiom_expres(f, i, &tau).expect("assignment is total and falsifying");
            if seen.insert(result.clone()) {
                steps
                    .push(ExpansionStep { kind: StepKind::Axiom { clause: i, assignment: Some(tau.clone()) }, result });
                if steps.len() > bound {
                    return Err(GenerateError::BoundExceeded { size: steps.len(), bound });
                }
            }
        }
    }

    let mut table = VarTable::new(f.prefix.max_var());
    let mut plain = |c: &AClause| -> Clause {
        c.iter().map(|l| table.intern_lit(&f.prefix, l).expect("axioms are well formed").0).collect()
    };
    let mut working: Vec<Node> =
        steps.iter().enumerate().map(|(i, s)| Node { clause: plain(&s.result), step: i }).collect();

    let to_alit = |table: &VarTable, l: Lit| -> ALit {
        match table.get(l.var()) {
            Some(e) => ALit::new(Lit::new(e.base, l.is_positive()), e.annotation.clone()),
            None => ALit::plain(l),
        }
    };

    let mut empty = working.iter().find(|n| n.clause.is_empty()).map(|n| n.step);
    let mut vars: Vec<_> = working.iter().flat_map(|n| n.clause.iter().map(|l| l.var())).collect();
    vars.sort();
    vars.dedup();

    for v in vars {
        if empty.is_some() {
            break;
        }
        let (pos, neg): (Vec<&Node>, Vec<&Node>) = {
            let with: Vec<&Node> =
                working.iter().filter(|n| n.clause.contains(v.positive()) || n.clause.contains(v.negative())).collect();
            with.into_iter().partition(|n| n.clause.contains(v.positive()))
        };
        let mut fresh: Vec<Node> = Vec::new();
        let rest: Vec<&Node> =
            working.iter().filter(|n| !n.clause.contains(v.positive()) && !n.clause.contains(v.negative())).collect();
        'pairs: for p in &pos {
            for n in &neg {
                let resolvent: Clause =
                    p.clause.iter().chain(n.clause.iter()).copied().filter(|l| l.var() != v).collect();
                if resolvent.is_tautology() {
                    continue;
                }
                let subsumed =
                    rest.iter().copied().chain(fresh.iter()).any(|m| m.clause.iter().all(|l| resolvent.contains(*l)));
                if subsumed {
                    continue;
                }
                let result: AClause = resolvent.iter().map(|&l| to_alit(&table, l)).collect();
                steps.push(ExpansionStep {
                    kind: StepKind::Res { left: p.step, right: n.step, pivot: to_alit(&table, v.positive()) },
                    result,
                });
                let step = steps.len() - 1;
                if resolvent.is_empty() {
                    empty = Some(step);
                    break 'pairs;
                }
                fresh.push(Node { clause: resolvent, step });
            }
        }
        let mut next: Vec<Node> = Vec::with_capacity(rest.len() + fresh.len());
        for n in working.iter().filter(|n| !n.clause.contains(v.positive()) && !n.clause.contains(v.negative())) {
            next.push(Node { clause: n.clause.clone(), step: n.step });
        }
        next.extend(fresh);
        if next.len() > bound {
            return Err(GenerateError::BoundExceeded { size: next.len(), bound });
        }
        working = next;
    }

    let root = empty.ok_or(GenerateError::FormulaTrue)?;
    Ok(trim(steps, root))
}

/// Keeps the steps the root depends on, renumbered in their original order.
fn trim(steps: Vec<ExpansionStep>, root: usize) -> ExpansionProof {
    let mut needed = vec![false; steps.len()];
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        if needed[i] {
            continue;
        }
        needed[i] = true;
        if let StepKind::Res { left, right, .. } = steps[i].kind {
            stack.push(left);
            stack.push(right);
        }
    }
    let mut renumber = vec![usize::MAX; steps.len()];
    let mut out = Vec::new();
    for (i, mut step) in steps.into_iter().enumerate() {
        if !needed[i] {
            continue;
        }
        if let StepKind::Res { left, right, .. } = &mut step.kind {
            *left = renumber[*left];
            *right = renumber[*right];
        }
        renumber[i] = out.len();
        out.push(step);
        if i == root {
            break;
        }
    }
    ExpansionProof { calculus: Calculus::ExpRes, steps: out }
}
