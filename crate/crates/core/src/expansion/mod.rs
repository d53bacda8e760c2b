//! Expansion-based calculi: ∀Exp+Res and IR-calc.
//!
//! Both calculi share one proof type. ∀Exp+Res axioms carry the full
//! universal assignment they were expanded under; IR-calc axioms annotate
//! each existential only with the clause's own universals to its left and
//! additionally allow instantiation steps.

mod check;
mod format;
mod generate;

pub use check::{check_expansion_proof, Verdict};
pub use format::{emit_expansion_proof, parse_expansion_proof, ProofParseError};
pub use generate::{generate_expres_refutation, GenerateError, DEFAULT_EXPANSION_BOUND};

use thiserror::Error;

use crate::annotation::{restrict_annotation, AClause, ALit, Annotation};
use crate::qbf::{Prefix, Qbf, Quantifier};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calculus {
    IrCalc,
    ExpRes,
}

impl Calculus {
    pub fn name(self) -> &'static str {
        match self {
            Calculus::IrCalc => "ircalc",
            Calculus::ExpRes => "expres",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// Axiom from input clause `clause` (0-based). ∀Exp+Res axioms carry the
    /// full universal assignment.
    Axiom { clause: usize, assignment: Option<Annotation> },
    /// `inst(σ, parent)`.
    Inst { parent: usize, sigma: Annotation },
    /// Resolution of `left` (containing `pivot`) and `right` (containing its
    /// complement).
    Res { left: usize, right: usize, pivot: ALit },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionStep {
    pub kind: StepKind,
    pub result: AClause,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionProof {
    pub calculus: Calculus,
    pub steps: Vec<ExpansionStep>,
}

impl ExpansionProof {
    pub fn is_refutation(&self) -> bool {
        self.steps.last().is_some_and(|s| s.result.is_empty())
    }

    pub fn axiom_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s.kind, StepKind::Axiom { .. })).count()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("clause index {0} out of range")]
    NoSuchClause(usize),
    #[error("input clause {0} is a tautology")]
    Tautology(usize),
    #[error("assignment does not give a value to universal {0}")]
    IncompleteAssignment(u32),
    #[error("assignment does not falsify universal literal {0}")]
    NotFalsified(i32),
    #[error("assignment key {0} is not a universal variable")]
    NotUniversal(u32),
    #[error("pivot {0} missing from the first premise")]
    PivotMissing(String),
    #[error("complement of pivot {0} (same annotation) missing from the second premise")]
    ComplementMissing(String),
}

fn input_clause(f: &Qbf, index: usize) -> Result<&crate::qbf::Clause, RuleError> {
    let c = f.clauses.get(index).ok_or(RuleError::NoSuchClause(index))?;
    if c.is_tautology() {
        return Err(RuleError::Tautology(index));
    }
    Ok(c)
}

/// IR-calc axiom: universal literals are dropped and each existential `x` is
/// annotated with the assignment falsifying the clause's universal literals
/// left of `x`.
pub fn axiom_ircalc(f: &Qbf, index: usize) -> Result<AClause, RuleError> {
    let c = input_clause(f, index)?;
    let falsifying = Annotation::from_pairs(
        c.iter().filter(|l| f.prefix.is_universal(l.var())).map(|l| (l.var(), !l.is_positive())),
    );
    Ok(c.iter()
        .filter(|l| f.prefix.is_existential(l.var()))
        .map(|&l| ALit::new(l, restrict_annotation(&f.prefix, &falsifying, l.var())))
        .collect())
}

/// ∀Exp+Res axiom under the total universal assignment `tau_full`.
pub fn axiom_expres(f: &Qbf, index: usize, tau_full: &Annotation) -> Result<AClause, RuleError> {
    let c = input_clause(f, index)?;
    for (v, _) in tau_full.iter() {
        if !f.prefix.is_universal(v) {
            return Err(RuleError::NotUniversal(v.0));
        }
    }
    for u in f.prefix.universals() {
        if !tau_full.contains(u) {
            return Err(RuleError::IncompleteAssignment(u.0));
        }
    }
    for &l in c {
        if f.prefix.is_universal(l.var()) && !tau_full.falsifies(l) {
            return Err(RuleError::NotFalsified(l.to_dimacs()));
        }
    }
    Ok(c.iter()
        .filter(|l| f.prefix.is_existential(l.var()))
        .map(|&l| ALit::new(l, restrict_annotation(&f.prefix, tau_full, l.var())))
        .collect())
}

/// `inst(σ, C) = { x^{τ[σ]} | x^τ ∈ C }`, each annotation restricted to the
/// universals left of its literal.
pub fn instantiate(prefix: &Prefix, sigma: &Annotation, c: &AClause) -> AClause {
    c.iter().map(|l| ALit::new(l.lit, l.ann.complete(sigma, prefix, l.var()))).collect()
}

/// Resolves `c1 ∨ x^τ` with `c2 ∨ x̄^τ`.
pub fn resolve_annotated(c1: &AClause, c2: &AClause, pivot: &ALit, prefix: &Prefix) -> Result<AClause, RuleError> {
    let neg = pivot.negate();
    if !c1.contains(pivot) {
        return Err(RuleError::PivotMissing(pivot.display(prefix).to_string()));
    }
    if !c2.contains(&neg) {
        return Err(RuleError::ComplementMissing(pivot.display(prefix).to_string()));
    }
    let resolvent: AClause =
        c1.iter().filter(|l| *l != pivot).chain(c2.iter().filter(|l| **l != neg)).cloned().collect();
    if resolvent.has_clashing_bases() {
        log::warn!("resolvent {} contains complementary base literals", resolvent.display(prefix));
    }
    Ok(resolvent)
}

/// Checks that annotation keys are universals strictly left of the literal.
pub(crate) fn well_formed(prefix: &Prefix, l: &ALit) -> bool {
    let Some(info) = prefix.info(l.var()) else { return false };
    info.quantifier == Quantifier::Existential
        && l.ann.iter().all(|(u, _)| prefix.is_universal(u) && prefix.strictly_left_of(u, l.var()))
}
