//! Checkers and translators for QBF proof systems: ∀Exp+Res, IR-calc and QRAT.

pub mod annotation;
pub mod dependency;
pub mod expansion;
pub mod families;
pub mod propagation;
pub mod qbf;
pub mod qdimacs;
pub mod qrat;
pub mod simulation;

pub use annotation::{AClause, ALit, Annotation, VarTable};
pub use expansion::{Calculus, ExpansionProof, ExpansionStep, StepKind, Verdict};
pub use qbf::{Block, Clause, Lit, Prefix, Qbf, Quantifier, Var};
pub use qrat::{QratProof, QratStep, QratVerdict};

pub use simulation::{translate_expres_to_qrat, translate_ircalc_to_qrat, TranslationOutcome};
