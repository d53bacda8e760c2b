use std::fmt;

use crate::annotation::AClause;
use crate::qbf::Qbf;

use super::{
    axiom_expres, axiom_ircalc, instantiate, resolve_annotated, well_formed, Calculus, ExpansionProof, StepKind,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every step re-derives; `refutation` is set when the last step is ⊥.
    Valid { refutation: bool },
    /// `step` is 1-based.
    Invalid { step: usize, reason: String },
}

impl Verdict {
    pub fn is_valid_refutation(&self) -> bool {
        matches!(self, Verdict::Valid { refutation: true })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid { refutation: true } => write!(f, "VALID refutation"),
            Verdict::Valid { refutation: false } => write!(f, "VALID derivation"),
            Verdict::Invalid { step, reason } => write!(f, "INVALID at step {step}: {reason}"),
        }
    }
}

/// Re-derives every step from its premises and compares with the stated result.
pub fn check_expansion_proof(f: &Qbf, p: &ExpansionProof) -> Verdict {
    let mut derived: Vec<&AClause> = Vec::with_capacity(p.steps.len());
    for (i, step) in p.steps.iter().enumerate() {
        let invalid = |reason: String| Verdict::Invalid { step: i + 1, reason };
        if let Some(bad) = step.result.iter().find(|l| !well_formed(&f.prefix, l)) {
            return invalid(format!("malformed literal {}", bad.display(&f.prefix)));
        }
        let parent = |j: usize| -> Result<&AClause, String> {
            if j < i {
                Ok(derived[j])
            } else {
                Err(format!("premise {} does not precede the step", j + 1))
            }
        };
        let expected = match (&step.kind, p.calculus) {
            (StepKind::Axiom { clause, assignment: None }, Calculus::IrCalc) => {
                axiom_ircalc(f, *clause).map_err(|e| e.to_string())
            }
            (StepKind::Axiom { clause, assignment: Some(tau) }, Calculus::ExpRes) => {
                axiom_expres(f, *clause, tau).map_err(|e| e.to_string())
            }
            (StepKind::Axiom { .. }, Calculus::IrCalc) => Err("IR-calc axioms do not carry an assignment".to_string()),
            (StepKind::Axiom { .. }, Calculus::ExpRes) => Err("∀Exp+Res axioms need a full assignment".to_string()),
            (StepKind::Inst { .. }, Calculus::ExpRes) => Err("instantiation is not a ∀Exp+Res rule".to_string()),
            (StepKind::Inst { parent: j, sigma }, Calculus::IrCalc) => {
                if let Some((u, _)) = sigma.iter().find(|&(u, _)| !f.prefix.is_universal(u)) {
                    Err(format!("σ assigns non-universal {u}"))
                } else {
                    parent(*j).map(|c| instantiate(&f.prefix, sigma, c))
                }
            }
            (StepKind::Res { left, right, pivot }, _) => parent(*left).and_then(|a| {
                let b = parent(*right)?;
                resolve_annotated(a, b, pivot, &f.prefix).map_err(|e| e.to_string())
            }),
        };
        match expected {
            Err(reason) => return invalid(reason),
            Ok(c) if c != step.result => {
                return invalid(format!(
                    "stated result {} differs from derived {}",
                    step.result.display(&f.prefix),
                    c.display(&f.prefix)
                ))
            }
            Ok(_) => derived.push(&step.result),
        }
    }
    Verdict::Valid { refutation: p.is_refutation() }
}
