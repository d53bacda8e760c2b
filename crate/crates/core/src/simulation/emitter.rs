use log::trace;

use crate::qbf::{Clause, Lit, Qbf, Var};
use crate::qrat::{QratProof, QratState, QratStep, StepError};

use super::{Definition, TranslateError};

/// Emits proof steps while replaying them on a checker state, so a rejected
/// step surfaces at the point it is produced.
pub(crate) struct Emitter {
    pub state: QratState,
    pub proof: QratProof,
}

impl Emitter {
    pub fn new(f: &Qbf) -> Emitter {
        Emitter { state: QratState::new(f), proof: QratProof::new() }
    }

    pub fn emit(&mut self, stage: &'static str, step: QratStep, label: Option<String>) -> Result<(), TranslateError> {
        trace!("{stage}: {step:?}");
        self.state.apply_labeled(&step, label).map_err(|error| TranslateError::Rejected { stage, error })?;
        self.proof.push(step);
        Ok(())
    }

    pub fn declare(&mut self, stage: &'static str, var: Var, anchor: Var) -> Result<(), TranslateError> {
        self.emit(stage, QratStep::Declare { var, anchor }, None)
    }

    pub fn define(&mut self, stage: &'static str, d: &Definition, label: Option<String>) -> Result<(), TranslateError> {
        self.emit(stage, QratStep::add(&d.lits()), label)
    }

    pub fn add(&mut self, stage: &'static str, c: &Clause, label: Option<String>) -> Result<(), TranslateError> {
        self.emit(stage, QratStep::add_clause(c), label)
    }

    pub fn delete(&mut self, stage: &'static str, c: &Clause) -> Result<(), TranslateError> {
        if !self.state.contains(c) {
            return Err(TranslateError::Rejected {
                stage,
                error: StepError { rule: "DELETE", message: format!("clause {c} is not present") },
            });
        }
        self.emit(stage, QratStep::delete_clause(c), None)
    }

    /// Drops `lit` from `c` and returns the shortened clause.
    pub fn drop_univ(&mut self, stage: &'static str, c: &Clause, lit: Lit) -> Result<Clause, TranslateError> {
        let rest = c.without(lit);
        self.emit(stage, QratStep::DropUniv { lit, rest: rest.lits().to_vec() }, None)?;
        Ok(rest)
    }

    /// Drops every universal literal of `clauses`, innermost universal first.
    pub fn drop_universals(&mut self, stage: &'static str, clauses: &mut [Clause]) -> Result<(), TranslateError> {
        let prefix = self.state.prefix().clone();
        for u in prefix.universals_right_to_left() {
            for c in clauses.iter_mut() {
                for lit in [u.positive(), u.negative()] {
                    if c.contains(lit) {
                        *c = self.drop_univ(stage, c, lit)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Adds ⊥ unless the proof already does.
    pub fn finish(mut self) -> Result<QratProof, TranslateError> {
        if !self.proof.is_refutation() {
            self.add("final", &Clause::empty(), None)?;
        }
        Ok(self.proof)
    }
}
