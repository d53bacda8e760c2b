//! Inputs shared by the translator benchmarks.

use qratsim::expansion::{generate_expres_refutation, DEFAULT_EXPANSION_BOUND};
use qratsim::families::{gen_phi, gen_phi_proof, gen_psi0};
use qratsim::{ExpansionProof, Qbf};

/// A formula with a refutation of it.
pub struct Workload {
    pub name: String,
    pub formula: Qbf,
    pub proof: ExpansionProof,
}

/// The worked example with its IR-calc refutation.
pub fn psi0() -> Workload {
    let inst = gen_psi0();
    Workload { name: "psi0".into(), formula: inst.formula, proof: inst.proof.expect("bundled proof") }
}

/// `phi_n` with its short IR-calc refutation.
pub fn phi_ircalc(n: usize) -> Workload {
    Workload { name: format!("phi{n}"), formula: gen_phi(n).expect("n >= 1"), proof: gen_phi_proof(n).expect("n >= 1") }
}

/// `phi_n` with a brute-force ∀Exp+Res refutation; `None` past the expansion bound.
pub fn phi_expres(n: usize) -> Option<Workload> {
    let formula = gen_phi(n).ok()?;
    let proof = generate_expres_refutation(&formula, DEFAULT_EXPANSION_BOUND).ok()?;
    Some(Workload { name: format!("phi{n}"), formula, proof })
}
