//! The two-pass IR-calc translation on the crafted families.

use qratsim::annotation::Annotation;
use qratsim::dependency::validate_path;
use qratsim::families::{c, gen_phi, gen_phi_proof, gen_psi0, u};
use qratsim::qrat::check_qrat_proof;
use qratsim::simulation::{DefShape, Definition};
use qratsim::{translate_ircalc_to_qrat, QratVerdict, TranslationOutcome, Var};

#[test]
fn psi0_succeeds() {
    let inst = gen_psi0();
    let t = translate_ircalc_to_qrat(&inst.formula, inst.proof.as_ref().unwrap()).unwrap();
    let TranslationOutcome::Success { proof } = &t.outcome else { panic!("{:?}", t.outcome) };
    assert_eq!(check_qrat_proof(&inst.formula, proof), QratVerdict::VerifiedRefutation);
    assert_eq!(t.important.len(), 5);
}

fn block_definitions(t: &qratsim::simulation::IrCalcTranslation, i: usize) -> [Definition; 2] {
    let d = |j: usize, positive: bool| {
        let ann = Annotation::from_pairs([(u(i), positive)]);
        let v = t.table.lookup(c(j), &ann).unwrap_or_else(|| panic!("c{j} with u{i}={positive} not interned"));
        Definition::new(v, c(j), DefShape::ImpliesBase)
    };
    [d(2 * i, false), d(2 * i - 1, true)]
}

#[test]
fn phi_family_is_blocked_at_the_innermost_universal() {
    for n in 1..=8 {
        let f = gen_phi(n).unwrap();
        let t = translate_ircalc_to_qrat(&f, &gen_phi_proof(n).unwrap()).unwrap();
        let TranslationOutcome::Blocked { universal, source, witness } = &t.outcome else {
            panic!("phi_{n} translated")
        };
        assert_eq!(*universal, u(n));
        validate_path(&t.path_matrix.prefix, &t.path_matrix.clauses, *source, witness).unwrap();
        assert!(t.path_matrix.clauses[witness.clauses[0]].contains(*source));
        assert!(t.path_matrix.clauses[*witness.clauses.last().unwrap()].contains(-*source));
        for i in 1..=n {
            for d in block_definitions(&t, i) {
                assert!(t.important.contains(&d), "phi_{n}: {:?} missing", d);
            }
        }
    }
}

#[test]
fn phi1_path_labels() {
    let f = gen_phi(1).unwrap();
    let t = translate_ircalc_to_qrat(&f, &gen_phi_proof(1).unwrap()).unwrap();
    let TranslationOutcome::Blocked { universal, witness, .. } = &t.outcome else { panic!() };
    assert_eq!(*universal, Var(2));
    assert_eq!(witness.labels(&t.path_matrix), "C5',D2,C3',D1,C1'");
}
