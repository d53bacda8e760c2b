use std::collections::BTreeSet;

use log::{debug, info};

use crate::annotation::{AClause, Annotation, InternError, VarTable};
use crate::dependency::{PathSearch, ResolutionPath};
use crate::expansion::{instantiate, Calculus, ExpansionProof, StepKind};
use crate::qbf::{Clause, Lit, Prefix, Qbf, Var};
use crate::qrat::{MapEntry, QratProof, QratState, QratStep};

use super::emitter::Emitter;
use super::expres::{annotated_axioms, require_refutation};
use super::{intern_clause, map_entries, DefShape, Definition, TranslateError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TranslationOutcome {
    Success {
        proof: QratProof,
    },
    /// A resolution path from `source` (a literal of `universal`) to a clause
    /// with its complement, in the matrix searched for blocking paths.
    Blocked {
        universal: Var,
        source: Lit,
        witness: ResolutionPath,
    },
}

impl TranslationOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, TranslationOutcome::Success { .. })
    }
}

#[derive(Clone, Debug)]
pub struct IrCalcTranslation {
    pub outcome: TranslationOutcome,
    /// Definitions kept after unimportant ones are deleted, in introduction order.
    pub important: Vec<Definition>,
    /// Labelled matrix searched for blocking paths.
    pub path_matrix: Qbf,
    pub map: Vec<MapEntry>,
    pub table: VarTable,
}

impl IrCalcTranslation {
    pub fn important_clauses(&self) -> Vec<Clause> {
        self.important.iter().map(Definition::clause).collect()
    }
}

fn source_definition(fresh: Var, base: Var, positive: bool) -> Definition {
    // (¬ℓ^τ ∨ ℓ)
    Definition::new(fresh, base, if positive { DefShape::ImpliesBase } else { DefShape::ImpliedByBase })
}

fn target_definition(fresh: Var, base: Var, positive: bool) -> Definition {
    // (¬ℓ ∨ ℓ^τ[σ])
    Definition::new(fresh, base, if positive { DefShape::ImpliedByBase } else { DefShape::ImpliesBase })
}

/// Scans the instantiation steps of `p` and returns the definition clauses
/// they need. Variables already in `table` count as existing; new targets are
/// interned as they appear.
pub fn mark_important_definitions(
    f: &Qbf,
    p: &ExpansionProof,
    table: &mut VarTable,
) -> Result<BTreeSet<Definition>, InternError> {
    let mut marked = BTreeSet::new();
    for s in &p.steps {
        let StepKind::Inst { parent, sigma } = &s.kind else { continue };
        for l in &p.steps[*parent].result {
            let base = l.var();
            let target = l.ann.complete(sigma, &f.prefix, base);
            if target == l.ann {
                continue;
            }
            let existed = table.lookup(base, &target).is_some();
            let (to, _) = table.intern(&f.prefix, base, &target)?;
            let positive = l.lit.is_positive();
            if !l.ann.is_empty() {
                let (from, _) = table.intern(&f.prefix, base, &l.ann)?;
                marked.insert(source_definition(from, base, positive));
            }
            if existed {
                marked.insert(target_definition(to, base, positive));
            }
        }
    }
    Ok(marked)
}

/// Steps simulating `inst(sigma, parent)` on `state`: declarations and both
/// definitions of every target variable not yet in the prefix, then the
/// instantiated clause, which is AT once the needed definitions are present.
pub fn emit_instantiation_chain(
    prefix: &Prefix,
    state: &QratState,
    table: &mut VarTable,
    parent: &AClause,
    sigma: &Annotation,
) -> Result<Vec<QratStep>, InternError> {
    let mut steps = Vec::new();
    let mut declared = BTreeSet::new();
    let child = instantiate(prefix, sigma, parent);
    for l in &child {
        let (v, _) = table.intern(prefix, l.var(), &l.ann)?;
        if state.prefix().is_declared(v) || !declared.insert(v) {
            continue;
        }
        steps.push(QratStep::Declare { var: v, anchor: l.var() });
        for shape in [DefShape::ImpliedByBase, DefShape::ImpliesBase] {
            steps.push(QratStep::add(&Definition::new(v, l.var(), shape).lits()));
        }
    }
    steps.push(QratStep::add_clause(&intern_clause(table, prefix, &child)?));
    Ok(steps)
}

pub fn translate_ircalc_to_qrat(f: &Qbf, p: &ExpansionProof) -> Result<IrCalcTranslation, TranslateError> {
    require_refutation(f, p, Calculus::IrCalc)?;
    let mut table = VarTable::new(f.num_vars.max(f.prefix.max_var()));
    let mut em = Emitter::new(f);

    // Pass 1. Definitions of the axioms' annotated variables.
    let mut registry = Vec::new();
    let mut plain = vec![Clause::empty(); p.steps.len()];
    for (i, s) in p.steps.iter().enumerate() {
        if !matches!(s.kind, StepKind::Axiom { .. }) {
            continue;
        }
        for l in &s.result {
            let (v, fresh) = table.intern(&f.prefix, l.var(), &l.ann)?;
            if fresh {
                em.declare("definitions", v, l.var())?;
                for shape in [DefShape::ImpliesBase, DefShape::ImpliedByBase] {
                    let d = Definition::new(v, l.var(), shape);
                    em.define("definitions", &d, Some(format!("D{}", registry.len() + 1)))?;
                    registry.push(d);
                }
            }
        }
        plain[i] = intern_clause(&mut table, &f.prefix, &s.result)?;
    }

    let axioms = annotated_axioms(f, p, &plain);
    for (i, c) in &axioms {
        em.add("annotated clauses", c, Some(format!("C{}'", i + 1)))?;
    }
    for c in &f.clauses {
        em.delete("input deletion", c)?;
    }

    let marked = mark_important_definitions(f, p, &mut table)?;
    let mut important = Vec::new();
    for d in &registry {
        if marked.contains(d) {
            important.push(*d);
        } else {
            em.delete("unimportant definitions", &d.clause())?;
        }
    }
    for (k, d) in important.iter().enumerate() {
        em.state.relabel(&d.clause(), format!("D{}", k + 1));
    }
    debug!("{} of {} definitions are important", important.len(), registry.len());

    let path_matrix = em.state.snapshot();
    let map = map_entries(&table, &f.prefix);
    let search = PathSearch::new(&path_matrix.prefix, &path_matrix.clauses);
    for u in f.prefix.universals_right_to_left() {
        let path = search.find_blocking_path(u).expect("u is universal");
        if let Some(witness) = path {
            let first = &path_matrix.clauses[witness.clauses[0]];
            let source = if first.contains(u.negative()) { u.negative() } else { u.positive() };
            info!("blocked on {u}: {}", witness.labels(&path_matrix));
            return Ok(IrCalcTranslation {
                outcome: TranslationOutcome::Blocked { universal: u, source, witness },
                important,
                path_matrix,
                map,
                table,
            });
        }
    }

    // Pass 2.
    let mut annotated: Vec<Clause> = axioms.into_iter().map(|(_, c)| c).collect();
    em.drop_universals("universal reduction", &mut annotated)?;

    let mut derived: Vec<AClause> = Vec::with_capacity(p.steps.len());
    for s in &p.steps {
        match &s.kind {
            StepKind::Axiom { .. } => {}
            StepKind::Res { .. } => {
                let c = intern_clause(&mut table, &f.prefix, &s.result)?;
                em.add("resolution", &c, None)?;
            }
            StepKind::Inst { parent, sigma } => {
                for step in emit_instantiation_chain(&f.prefix, &em.state, &mut table, &derived[*parent], sigma)? {
                    em.emit("instantiation", step, None)?;
                }
            }
        }
        derived.push(s.result.clone());
    }

    let map = map_entries(&table, &f.prefix);
    Ok(IrCalcTranslation {
        outcome: TranslationOutcome::Success { proof: em.finish()? },
        important,
        path_matrix,
        map,
        table,
    })
}
