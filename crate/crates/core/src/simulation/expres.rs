use log::debug;

use crate::annotation::VarTable;
use crate::expansion::{check_expansion_proof, Calculus, ExpansionProof, StepKind, Verdict};
use crate::qbf::{Clause, Qbf};
use crate::qrat::{MapEntry, QratProof};

use super::emitter::Emitter;
use super::{intern_clause, map_entries, DefShape, Definition, TranslateError};

#[derive(Clone, Debug)]
pub struct ExpresTranslation {
    pub proof: QratProof,
    pub map: Vec<MapEntry>,
    /// Annotated clauses alone, after inputs and definitions are deleted.
    pub psi3: Qbf,
    pub table: VarTable,
}

pub(crate) fn require_refutation(f: &Qbf, p: &ExpansionProof, calculus: Calculus) -> Result<(), TranslateError> {
    let invalid = |reason: String| TranslateError::InvalidProof { calculus: calculus.name(), reason };
    if p.calculus != calculus {
        return Err(invalid(format!("proof is written in {}", p.calculus.name())));
    }
    match check_expansion_proof(f, p) {
        Verdict::Valid { refutation: true } => Ok(()),
        Verdict::Valid { refutation: false } => Err(invalid("proof does not end in the empty clause".into())),
        v @ Verdict::Invalid { .. } => Err(invalid(v.to_string())),
    }
}

/// Axiom steps as (input clause index, annotated clause with the input's
/// universal literals restored), without repeats.
pub(crate) fn annotated_axioms(f: &Qbf, p: &ExpansionProof, plain: &[Clause]) -> Vec<(usize, Clause)> {
    let mut out: Vec<(usize, Clause)> = Vec::new();
    for (step, s) in p.steps.iter().enumerate() {
        if let StepKind::Axiom { clause, .. } = s.kind {
            let universals = f.clauses[clause].iter().filter(|l| f.prefix.is_universal(l.var()));
            let c: Clause = plain[step].iter().chain(universals).copied().collect();
            if !out.iter().any(|(_, d)| *d == c) {
                out.push((clause, c));
            }
        }
    }
    out
}

pub fn translate_expres_to_qrat(f: &Qbf, p: &ExpansionProof) -> Result<ExpresTranslation, TranslateError> {
    require_refutation(f, p, Calculus::ExpRes)?;
    let mut table = VarTable::new(f.num_vars.max(f.prefix.max_var()));
    let mut em = Emitter::new(f);

    let mut definitions = Vec::new();
    let mut plain = Vec::with_capacity(p.steps.len());
    for s in &p.steps {
        for l in &s.result {
            let (v, fresh) = table.intern(&f.prefix, l.var(), &l.ann)?;
            if fresh {
                em.declare("definitions", v, l.var())?;
                for shape in [DefShape::ImpliesBase, DefShape::ImpliedByBase] {
                    let d = Definition::new(v, l.var(), shape);
                    em.define("definitions", &d, None)?;
                    definitions.push(d);
                }
            }
        }
        plain.push(intern_clause(&mut table, &f.prefix, &s.result)?);
    }

    let axioms = annotated_axioms(f, p, &plain);
    for (i, c) in &axioms {
        em.add("annotated clauses", c, Some(format!("C{}'", i + 1)))?;
    }

    for c in &f.clauses {
        em.delete("input deletion", c)?;
    }
    for d in &definitions {
        em.delete("definition deletion", &d.clause())?;
    }
    let psi3 = em.state.snapshot();
    debug!("{} definitions, {} annotated clauses", definitions.len(), axioms.len());

    let mut annotated: Vec<Clause> = axioms.into_iter().map(|(_, c)| c).collect();
    em.drop_universals("universal reduction", &mut annotated)?;

    for (i, s) in p.steps.iter().enumerate() {
        if let StepKind::Res { .. } = s.kind {
            em.add("resolution", &plain[i], None)?;
        }
    }

    let map = map_entries(&table, &f.prefix);
    Ok(ExpresTranslation { proof: em.finish()?, map, psi3, table })
}
