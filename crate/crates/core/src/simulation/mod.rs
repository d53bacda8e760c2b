//! Translations of expansion proofs into QRAT proofs.
//!
//! [`translate_expres_to_qrat`] follows the definition-based construction for
//! ∀Exp+Res. [`translate_ircalc_to_qrat`] is its two-pass lifting to IR-calc:
//! the first pass keeps only the definition clauses that instantiation steps
//! will need and then looks for resolution paths between complementary
//! universal literals; if one exists the translation halts as blocked.

mod emitter;
mod expres;
mod ircalc;

pub use expres::{translate_expres_to_qrat, ExpresTranslation};
pub use ircalc::{
    emit_instantiation_chain, mark_important_definitions, translate_ircalc_to_qrat, IrCalcTranslation,
    TranslationOutcome,
};

use std::fmt;

use thiserror::Error;

use crate::annotation::{AClause, InternError, VarTable};
use crate::dependency::PathSearch;
use crate::qbf::{Clause, Lit, Prefix, Qbf, Var};
use crate::qrat::{MapEntry, StepError};

/// The two definition clauses of an annotated variable `x^τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DefShape {
    /// `(¬x^τ ∨ x)`
    ImpliesBase,
    /// `(x^τ ∨ ¬x)`
    ImpliedByBase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Definition {
    pub fresh: Var,
    pub base: Var,
    pub shape: DefShape,
}

impl Definition {
    pub fn new(fresh: Var, base: Var, shape: DefShape) -> Definition {
        Definition { fresh, base, shape }
    }

    /// Literals with the annotated one first, as emitted in proofs.
    pub fn lits(&self) -> [Lit; 2] {
        match self.shape {
            DefShape::ImpliesBase => [self.fresh.negative(), self.base.positive()],
            DefShape::ImpliedByBase => [self.fresh.positive(), self.base.negative()],
        }
    }

    pub fn clause(&self) -> Clause {
        Clause::new(self.lits().to_vec())
    }
}

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("input proof is not a valid {calculus} refutation: {reason}")]
    InvalidProof { calculus: &'static str, reason: String },
    #[error("internal error in {stage}: emitted step rejected ({error})")]
    Rejected { stage: &'static str, error: StepError },
    #[error(transparent)]
    Intern(#[from] InternError),
}

pub(crate) fn intern_clause(table: &mut VarTable, prefix: &Prefix, c: &AClause) -> Result<Clause, InternError> {
    c.iter().map(|l| table.intern_lit(prefix, l).map(|(lit, _)| lit)).collect()
}

/// Sidecar map lines for every interned variable.
pub fn map_entries(table: &VarTable, prefix: &Prefix) -> Vec<MapEntry> {
    table
        .entries()
        .iter()
        .map(|e| MapEntry { fresh: e.fresh, base: e.base, annotation: e.annotation.to_signed(prefix) })
        .collect()
}

/// A universal literal reaching an existential whose annotation does not
/// falsify it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardViolation {
    pub universal: Lit,
    pub reached: Lit,
}

impl fmt::Display for GuardViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "path from {} reaches {} whose annotation does not falsify it", self.universal, self.reached)
    }
}

/// Searches `f` for resolution paths from every universal literal and reports
/// each reached existential literal right of it that is not an annotated
/// variable with an annotation falsifying the universal.
pub fn guard_violations(f: &Qbf, table: &VarTable) -> Vec<GuardViolation> {
    let search = PathSearch::new(&f.prefix, &f.clauses);
    let mut out = Vec::new();
    for u in f.prefix.universals() {
        for start in [u.positive(), u.negative()] {
            let reached = search.reachable_clauses(start);
            let mut seen = std::collections::BTreeSet::new();
            for (i, c) in f.clauses.iter().enumerate() {
                if !reached[i] {
                    continue;
                }
                for &l in c {
                    if !f.prefix.is_existential(l.var()) || !f.prefix.strictly_left_of(u, l.var()) {
                        continue;
                    }
                    let ok = table.get(l.var()).is_some_and(|e| e.annotation.falsifies(start));
                    if !ok && seen.insert(l) {
                        out.push(GuardViolation { universal: start, reached: l });
                    }
                }
            }
        }
    }
    out
}
