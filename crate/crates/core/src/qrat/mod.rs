//! QRAT proofs over an evolving prefixed formula.
//!
//! Besides clause additions and deletions, the format declares fresh
//! existential variables (`x` lines) and drops universal literals from
//! clauses (`u` lines).

mod check;
mod format;

pub use check::{check_qrat_proof, QratState, QratVerdict, StepError};
pub use format::{emit_map, emit_qrat, parse_map, parse_qrat, MapEntry, QratParseError};

use crate::qbf::{Clause, Lit, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QratStep {
    /// Fresh existential `var` placed in the block of `anchor`.
    Declare {
        var: Var,
        anchor: Var,
    },
    /// Clause addition; the first literal is the QRAT pivot, if any.
    Add(Vec<Lit>),
    Delete(Vec<Lit>),
    /// Removes universal `lit` from the clause `lit ∨ rest`.
    DropUniv {
        lit: Lit,
        rest: Vec<Lit>,
    },
}

impl QratStep {
    pub fn add(lits: &[Lit]) -> QratStep {
        QratStep::Add(lits.to_vec())
    }

    pub fn add_clause(c: &Clause) -> QratStep {
        QratStep::Add(c.lits().to_vec())
    }

    pub fn delete_clause(c: &Clause) -> QratStep {
        QratStep::Delete(c.lits().to_vec())
    }

    pub fn is_empty_add(&self) -> bool {
        matches!(self, QratStep::Add(l) if l.is_empty())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QratProof {
    pub steps: Vec<QratStep>,
}

impl QratProof {
    pub fn new() -> QratProof {
        QratProof::default()
    }

    pub fn push(&mut self, step: QratStep) {
        self.steps.push(step);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_refutation(&self) -> bool {
        self.steps.iter().any(QratStep::is_empty_add)
    }
}
