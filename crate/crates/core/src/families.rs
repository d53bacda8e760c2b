//! Bundled formulas and IR-calc refutations.
//!
//! `φₙ` uses the ids `eᵢ = 4i-3`, `uᵢ = 4i-2`, `c₂ᵢ₋₁ = 4i-1`, `c₂ᵢ = 4i`.
//! Its displayed prefix `∃eᵢ ∀uᵢ ∃c₂ᵢ₋₁c₂ᵢ` merges adjacent existential groups,
//! so the formula has `2n+1` blocks.

use thiserror::Error;

use crate::annotation::{AClause, ALit, Annotation};
use crate::expansion::{
    axiom_ircalc, instantiate, resolve_annotated, Calculus, ExpansionProof, ExpansionStep, StepKind,
};
use crate::qbf::{Clause, Lit, Prefix, Qbf, Quantifier, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Psi0,
    Phi { n: usize },
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub formula: Qbf,
    pub proof: Option<ExpansionProof>,
    pub provenance: Provenance,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("family parameter must be at least 1, got {0}")]
pub struct FamilyError(pub usize);

pub fn e(i: usize) -> Var {
    Var(4 * i as u32 - 3)
}

pub fn u(i: usize) -> Var {
    Var(4 * i as u32 - 2)
}

/// `c_j` for `j ∈ [2n]`.
pub fn c(j: usize) -> Var {
    let i = j.div_ceil(2);
    Var(4 * i as u32 - if j % 2 == 1 { 1 } else { 0 })
}

fn clause(lits: &[Lit]) -> Clause {
    Clause::new(lits.to_vec())
}

/// Index of `(uᵢ ∨ c₂ᵢ)`, `(¬eᵢ ∨ c₂ᵢ₋₁)`, the long clause, `(eᵢ ∨ c₂ᵢ)` and
/// `(¬uᵢ ∨ c₂ᵢ₋₁)` in [`gen_phi`].
struct PhiLayout {
    n: usize,
}

impl PhiLayout {
    fn u_c_even(&self, i: usize) -> usize {
        2 * (i - 1)
    }
    fn ne_c_odd(&self, i: usize) -> usize {
        2 * (i - 1) + 1
    }
    fn long(&self) -> usize {
        2 * self.n
    }
    fn e_c_even(&self, i: usize) -> usize {
        2 * self.n + 1 + 2 * (i - 1)
    }
    fn nu_c_odd(&self, i: usize) -> usize {
        2 * self.n + 1 + 2 * (i - 1) + 1
    }
}

/// `φₙ` with `4n` variables and `4n+1` clauses; for `n = 1` the clause order
/// is `(u₁∨c₂) (¬e₁∨c₁) (¬c₁∨¬c₂) (e₁∨c₂) (¬u₁∨c₁)`.
pub fn gen_phi(n: usize) -> Result<Qbf, FamilyError> {
    if n < 1 {
        return Err(FamilyError(n));
    }
    let mut prefix = Prefix::new();
    for i in 1..=n {
        prefix.push(Quantifier::Existential, &[e(i)]).expect("fresh ids");
        prefix.push(Quantifier::Universal, &[u(i)]).expect("fresh ids");
        prefix.push(Quantifier::Existential, &[c(2 * i - 1), c(2 * i)]).expect("fresh ids");
    }
    let mut clauses = Vec::with_capacity(4 * n + 1);
    for i in 1..=n {
        clauses.push(clause(&[u(i).positive(), c(2 * i).positive()]));
        clauses.push(clause(&[e(i).negative(), c(2 * i - 1).positive()]));
    }
    clauses.push(clause(&(1..=2 * n).map(|j| c(j).negative()).collect::<Vec<_>>()));
    for i in 1..=n {
        clauses.push(clause(&[e(i).positive(), c(2 * i).positive()]));
        clauses.push(clause(&[u(i).negative(), c(2 * i - 1).positive()]));
    }
    Ok(Qbf::new(prefix, clauses).expect("well-formed by construction"))
}

/// Appends steps while computing their results with the calculus rules.
struct Builder<'a> {
    f: &'a Qbf,
    steps: Vec<ExpansionStep>,
}

impl<'a> Builder<'a> {
    fn new(f: &'a Qbf) -> Builder<'a> {
        Builder { f, steps: Vec::new() }
    }

    fn push(&mut self, kind: StepKind, result: AClause) -> usize {
        self.steps.push(ExpansionStep { kind, result });
        self.steps.len() - 1
    }

    fn axiom(&mut self, clause: usize) -> usize {
        let result = axiom_ircalc(self.f, clause).expect("clause exists");
        self.push(StepKind::Axiom { clause, assignment: None }, result)
    }

    fn inst(&mut self, parent: usize, sigma: Annotation) -> usize {
        let result = instantiate(&self.f.prefix, &sigma, &self.steps[parent].result);
        self.push(StepKind::Inst { parent, sigma }, result)
    }

    fn res(&mut self, left: usize, right: usize, pivot: ALit) -> usize {
        let result = resolve_annotated(&self.steps[left].result, &self.steps[right].result, &pivot, &self.f.prefix)
            .expect("pivot occurs in both premises");
        self.push(StepKind::Res { left, right, pivot }, result)
    }

    fn finish(self) -> ExpansionProof {
        ExpansionProof { calculus: Calculus::IrCalc, steps: self.steps }
    }
}

fn alit(v: Var, ann: &[(Var, bool)]) -> ALit {
    ALit::new(v.positive(), Annotation::from_pairs(ann.iter().copied()))
}

/// IR-calc refutation of `φₙ`: every clause is downloaded first, then for
/// `i = n..1` the current long clause `K` is resolved against `(¬eᵢ∨c₂ᵢ₋₁)`
/// and `(eᵢ∨c₂ᵢ)`, the results are instantiated with `¬uᵢ` and `uᵢ`, and the
/// annotated unit axioms reduce both to `K' ∨ ¬eᵢ` and `K' ∨ eᵢ`. For `n = 1`
/// this is a twelve-step proof.
pub fn gen_phi_proof(n: usize) -> Result<ExpansionProof, FamilyError> {
    let f = gen_phi(n)?;
    let layout = PhiLayout { n };
    let mut b = Builder::new(&f);
    let axioms: Vec<usize> = (0..f.clauses.len()).map(|i| b.axiom(i)).collect();
    let mut k = axioms[layout.long()];
    for i in (1..=n).rev() {
        let ka = b.res(axioms[layout.ne_c_odd(i)], k, alit(c(2 * i - 1), &[]));
        let kb = b.res(axioms[layout.e_c_even(i)], k, alit(c(2 * i), &[]));
        let ia = b.inst(ka, Annotation::from_pairs([(u(i), false)]));
        let ib = b.inst(kb, Annotation::from_pairs([(u(i), true)]));
        let neg = b.res(axioms[layout.u_c_even(i)], ia, alit(c(2 * i), &[(u(i), false)]));
        let pos = b.res(axioms[layout.nu_c_odd(i)], ib, alit(c(2 * i - 1), &[(u(i), true)]));
        k = b.res(pos, neg, alit(e(i), &[]));
    }
    Ok(b.finish())
}

pub fn phi_instance(n: usize, with_proof: bool) -> Result<FamilyInstance, FamilyError> {
    Ok(FamilyInstance {
        formula: gen_phi(n)?,
        proof: if with_proof { Some(gen_phi_proof(n)?) } else { None },
        provenance: Provenance::Phi { n },
    })
}

/// `Ψ₀ = ∀u₁ ∃e₂ ∀u₃ ∃e₄e₅` with five clauses, ids equal to subscripts.
pub fn psi0_formula() -> Qbf {
    let mut prefix = Prefix::new();
    prefix.push(Quantifier::Universal, &[Var(1)]).expect("fresh");
    prefix.push(Quantifier::Existential, &[Var(2)]).expect("fresh");
    prefix.push(Quantifier::Universal, &[Var(3)]).expect("fresh");
    prefix.push(Quantifier::Existential, &[Var(4), Var(5)]).expect("fresh");
    let clauses = [&[-1, -2, -3, 5][..], &[-1, -3, -4], &[2, -3, 4], &[1, -2], &[-1, -2, -5]];
    Qbf::new(prefix, clauses.iter().map(|c| Clause::from_dimacs(c)).collect()).expect("well-formed")
}

/// The eleven-step IR-calc refutation of `Ψ₀`.
pub fn psi0_proof() -> ExpansionProof {
    let f = psi0_formula();
    let mut b = Builder::new(&f);
    let (u1, e2, u3, e4, e5) = (Var(1), Var(2), Var(3), Var(4), Var(5));
    let a: Vec<usize> = (0..5).map(|i| b.axiom(i)).collect();
    let c6 = b.inst(a[2], Annotation::from_pairs([(u1, true)]));
    let c7 = b.res(c6, a[1], alit(e4, &[(u1, true), (u3, true)]));
    let c8 = b.res(c7, a[4], alit(e2, &[(u1, true)]));
    let c9 = b.res(c7, a[0], alit(e2, &[(u1, true)]));
    let c10 = b.inst(c8, Annotation::from_pairs([(u3, true)]));
    b.res(c9, c10, alit(e5, &[(u1, true), (u3, true)]));
    b.finish()
}

pub fn gen_psi0() -> FamilyInstance {
    FamilyInstance { formula: psi0_formula(), proof: Some(psi0_proof()), provenance: Provenance::Psi0 }
}
