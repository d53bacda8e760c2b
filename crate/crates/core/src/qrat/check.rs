use std::fmt;

use log::{debug, warn};
use thiserror::Error;

use crate::dependency::PathSearch;
use crate::propagation::ClauseDb;
use crate::qbf::{Clause, Lit, Prefix, Qbf};

use super::{QratProof, QratStep};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{rule}: {message}")]
pub struct StepError {
    pub rule: &'static str,
    pub message: String,
}

fn fail(rule: &'static str, message: impl Into<String>) -> StepError {
    StepError { rule, message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QratVerdict {
    VerifiedRefutation,
    VerifiedDerivation,
    /// `step` is 1-based.
    Invalid {
        step: usize,
        rule: &'static str,
        message: String,
    },
}

impl QratVerdict {
    pub fn is_refutation(&self) -> bool {
        matches!(self, QratVerdict::VerifiedRefutation)
    }
}

impl fmt::Display for QratVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QratVerdict::VerifiedRefutation => write!(f, "VERIFIED_REFUTATION"),
            QratVerdict::VerifiedDerivation => write!(f, "VERIFIED_DERIVATION"),
            QratVerdict::Invalid { step, rule, message } => write!(f, "INVALID step={step} rule={rule}: {message}"),
        }
    }
}

/// The current formula of a QRAT derivation.
#[derive(Clone, Debug)]
pub struct QratState {
    prefix: Prefix,
    db: ClauseDb,
    labels: Vec<Option<String>>,
    refuted: bool,
}

impl QratState {
    pub fn new(f: &Qbf) -> QratState {
        let mut state = QratState { prefix: f.prefix.clone(), db: ClauseDb::new(), labels: Vec::new(), refuted: false };
        for (i, c) in f.clauses.iter().enumerate() {
            state.insert(c.clone(), Some(f.label(i)));
        }
        state
    }

    fn insert(&mut self, c: Clause, label: Option<String>) -> usize {
        if c.is_empty() {
            self.refuted = true;
        }
        let slot = self.db.add(c);
        debug_assert_eq!(slot, self.labels.len());
        self.labels.push(label);
        slot
    }

    pub fn prefix(&self) -> &Prefix {
        &self.prefix
    }

    /// An empty clause has been added.
    pub fn is_refuted(&self) -> bool {
        self.refuted
    }

    pub fn clauses(&self) -> Vec<Clause> {
        self.db.live_clauses().cloned().collect()
    }

    pub fn contains(&self, c: &Clause) -> bool {
        self.find(c).is_some()
    }

    /// Oldest live copy of `c`.
    fn find(&self, c: &Clause) -> Option<usize> {
        let probe = c.lits().first().copied();
        let candidates: Vec<usize> = match probe {
            Some(l) => self.db.occurrences(l),
            None => self.db.live_slots().filter(|&s| self.db.clause(s).is_empty()).collect(),
        };
        candidates.into_iter().find(|&s| self.db.clause(s) == c)
    }

    /// Renames the oldest live copy of `c`; returns false if it is absent.
    pub fn relabel(&mut self, c: &Clause, label: String) -> bool {
        match self.find(c) {
            Some(slot) => {
                self.labels[slot] = Some(label);
                true
            }
            None => false,
        }
    }

    /// The live formula with clause labels, in insertion order.
    pub fn snapshot(&self) -> Qbf {
        let slots: Vec<usize> = self.db.live_slots().collect();
        Qbf {
            prefix: self.prefix.clone(),
            clauses: slots.iter().map(|&s| self.db.clause(s).clone()).collect(),
            labels: slots.iter().map(|&s| self.labels[s].clone()).collect(),
            num_vars: self.prefix.max_var(),
        }
    }

    pub fn apply(&mut self, step: &QratStep) -> Result<(), StepError> {
        self.apply_labeled(step, None)
    }

    /// Applies `step`; an added clause gets `label`. After an error the state
    /// is unspecified.
    pub fn apply_labeled(&mut self, step: &QratStep, label: Option<String>) -> Result<(), StepError> {
        match step {
            QratStep::Declare { var, anchor } => {
                if var.0 == 0 || self.prefix.is_declared(*var) {
                    return Err(fail("DECLARE", format!("variable {var} is not fresh")));
                }
                if !self.prefix.is_existential(*anchor) {
                    return Err(fail("DECLARE", format!("anchor {anchor} is not an existential variable")));
                }
                let block = self.prefix.block_of(*anchor);
                self.prefix.declare_in_block(*var, block).map_err(|e| fail("DECLARE", e.to_string()))
            }
            QratStep::Add(lits) => {
                self.require_declared("ADD", lits)?;
                let c = Clause::new(lits.clone());
                if !self.db.is_asymmetric_tautology(&c) {
                    let Some(&pivot) = lits.first() else {
                        return Err(fail("ADD", "empty clause is not implied by unit propagation"));
                    };
                    if !self.prefix.is_existential(pivot.var()) {
                        return Err(fail("ADD", format!("not AT and pivot {pivot} is not existential")));
                    }
                    if !self.db.is_qrat_clause(&self.prefix, &c, pivot) {
                        return Err(fail("ADD", format!("clause {c} is neither AT nor QRAT on {pivot}")));
                    }
                }
                self.insert(c, label);
                Ok(())
            }
            QratStep::Delete(lits) => {
                let c = Clause::new(lits.clone());
                match self.find(&c) {
                    Some(slot) => self.db.remove(slot),
                    None => warn!("ignoring deletion of absent clause {c}"),
                }
                Ok(())
            }
            QratStep::DropUniv { lit, rest } => {
                if !self.prefix.is_universal(lit.var()) {
                    return Err(fail("DROP_UNIV", format!("{lit} is not a universal literal")));
                }
                let full = Clause::new(rest.iter().copied().chain([*lit]).collect());
                let slot =
                    self.find(&full).ok_or_else(|| fail("DROP_UNIV", format!("clause {full} is not present")))?;
                if !self.universal_droppable(slot, &full, *lit) {
                    return Err(fail("DROP_UNIV", format!("{lit} is neither QRAT nor EUR-reducible in {full}")));
                }
                let kept = self.labels[slot].clone();
                self.db.remove(slot);
                self.insert(full.without(*lit), label.or(kept));
                Ok(())
            }
        }
    }

    fn require_declared(&self, rule: &'static str, lits: &[Lit]) -> Result<(), StepError> {
        match lits.iter().find(|l| !self.prefix.is_declared(l.var())) {
            Some(l) => Err(fail(rule, format!("variable {} is undeclared", l.var()))),
            None => Ok(()),
        }
    }

    fn universal_droppable(&mut self, slot: usize, full: &Clause, lit: Lit) -> bool {
        let prefix = &self.prefix;
        let qrat = self.db.with_hidden(slot, |db| db.is_qrat_clause(prefix, full, lit));
        if qrat {
            return true;
        }
        debug!("QRAT-U failed for {lit} in {full}; trying EUR");
        let clauses = self.clauses();
        PathSearch::new(&self.prefix, &clauses).eur_droppable(full, lit).unwrap_or(false)
    }
}

/// Replays `proof` on `f`, stopping at the first invalid step.
pub fn check_qrat_proof(f: &Qbf, proof: &QratProof) -> QratVerdict {
    let mut state = QratState::new(f);
    for (i, step) in proof.steps.iter().enumerate() {
        if let Err(e) = state.apply(step) {
            return QratVerdict::Invalid { step: i + 1, rule: e.rule, message: e.message };
        }
    }
    if proof.is_refutation() {
        QratVerdict::VerifiedRefutation
    } else {
        QratVerdict::VerifiedDerivation
    }
}
