//! Unit propagation, asymmetric tautologies, outer resolvents and QRAT
//! clause checks.
//!
//! [`ClauseDb`] is a multiset of clauses with two watched literals per clause.
//! Every query starts from the empty assignment and undoes its trail before
//! returning, so watches never need repair after deletions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::qbf::{Clause, Lit, Prefix, Qbf, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Conflict,
    Fixpoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationResult {
    pub outcome: Outcome,
    pub assignment: BTreeMap<Var, bool>,
    /// Assigned literals in order; the reason is the clause slot that became
    /// unit, `None` for assumptions.
    pub trail: Vec<(Lit, Option<usize>)>,
}

#[derive(Clone, Debug)]
struct Slot {
    clause: Clause,
    watched: Vec<Lit>,
    alive: bool,
}

const UNASSIGNED: i8 = 0;

#[derive(Clone, Debug, Default)]
pub struct ClauseDb {
    slots: Vec<Slot>,
    watches: Vec<Vec<usize>>,
    occurs: Vec<Vec<usize>>,
    units: BTreeSet<usize>,
    empties: BTreeSet<usize>,
    values: Vec<i8>,
    trail: Vec<(Lit, Option<usize>)>,
    head: usize,
    hidden: Option<usize>,
}

impl ClauseDb {
    pub fn new() -> ClauseDb {
        ClauseDb::default()
    }

    pub fn from_clauses<'a, I: IntoIterator<Item = &'a Clause>>(clauses: I) -> ClauseDb {
        let mut db = ClauseDb::new();
        for c in clauses {
            db.add(c.clone());
        }
        db
    }

    fn grow(&mut self, var: Var) {
        let need = var.index() + 1;
        if self.values.len() < need {
            self.values.resize(need, UNASSIGNED);
            self.watches.resize(2 * need, Vec::new());
            self.occurs.resize(2 * need, Vec::new());
        }
    }

    /// Adds a clause and returns its slot.
    pub fn add(&mut self, clause: Clause) -> usize {
        let slot = self.slots.len();
        for &l in &clause {
            self.grow(l.var());
            self.occurs[l.code()].push(slot);
        }
        match clause.len() {
            0 => {
                self.empties.insert(slot);
            }
            1 => {
                self.units.insert(slot);
            }
            _ => {
                self.watches[clause.lits()[0].code()].push(slot);
                self.watches[clause.lits()[1].code()].push(slot);
            }
        }
        let watched = clause.lits().to_vec();
        self.slots.push(Slot { clause, watched, alive: true });
        slot
    }

    pub fn remove(&mut self, slot: usize) {
        let s = &mut self.slots[slot];
        if !s.alive {
            return;
        }
        s.alive = false;
        self.units.remove(&slot);
        self.empties.remove(&slot);
    }

    pub fn is_alive(&self, slot: usize) -> bool {
        self.slots.get(slot).is_some_and(|s| s.alive)
    }

    pub fn clause(&self, slot: usize) -> &Clause {
        &self.slots[slot].clause
    }

    /// Live slots in insertion order.
    pub fn live_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.slots.iter().enumerate().filter(|(_, s)| s.alive).map(|(i, _)| i)
    }

    pub fn live_clauses(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.slots.iter().filter(|s| s.alive).map(|s| &s.clause)
    }

    pub fn has_empty_clause(&self) -> bool {
        !self.empties.is_empty()
    }

    /// Live slots containing `lit`, in insertion order.
    pub fn occurrences(&self, lit: Lit) -> Vec<usize> {
        self.occurs
            .get(lit.code())
            .map(|list| list.iter().copied().filter(|&s| self.slots[s].alive && Some(s) != self.hidden).collect())
            .unwrap_or_default()
    }

    fn value(&self, lit: Lit) -> i8 {
        let v = self.values.get(lit.var().index()).copied().unwrap_or(UNASSIGNED);
        if lit.is_positive() {
            v
        } else {
            -v
        }
    }

    fn assign(&mut self, lit: Lit, reason: Option<usize>) {
        self.grow(lit.var());
        self.values[lit.var().index()] = if lit.is_positive() { 1 } else { -1 };
        self.trail.push((lit, reason));
    }

    /// Sets `lit` true; returns false if it is already false.
    fn enqueue(&mut self, lit: Lit, reason: Option<usize>) -> bool {
        match self.value(lit) {
            1 => true,
            -1 => false,
            _ => {
                self.assign(lit, reason);
                true
            }
        }
    }

    fn reset(&mut self) {
        for &(l, _) in &self.trail {
            self.values[l.var().index()] = UNASSIGNED;
        }
        self.trail.clear();
        self.head = 0;
    }

    /// Returns true iff a conflict is found.
    fn run(&mut self, assumptions: &[Lit]) -> bool {
        if self.empties.iter().any(|&s| Some(s) != self.hidden) {
            return true;
        }
        for &a in assumptions {
            if !self.enqueue(a, None) {
                return true;
            }
        }
        let units: Vec<usize> = self.units.iter().copied().filter(|&s| Some(s) != self.hidden).collect();
        for slot in units {
            let l = self.slots[slot].clause.lits()[0];
            if !self.enqueue(l, Some(slot)) {
                return true;
            }
        }
        while self.head < self.trail.len() {
            let false_lit = -self.trail[self.head].0;
            self.head += 1;
            if self.propagate_lit(false_lit) {
                return true;
            }
        }
        false
    }

    /// Visits the clauses watching `false_lit`. Returns true on conflict.
    fn propagate_lit(&mut self, false_lit: Lit) -> bool {
        let mut list = std::mem::take(&mut self.watches[false_lit.code()]);
        let mut keep = 0;
        let mut conflict = false;
        let mut i = 0;
        while i < list.len() {
            let slot = list[i];
            i += 1;
            if !self.slots[slot].alive {
                continue;
            }
            if Some(slot) == self.hidden {
                list[keep] = slot;
                keep += 1;
                continue;
            }
            {
                let w = &mut self.slots[slot].watched;
                if w[0] == false_lit {
                    w.swap(0, 1);
                }
                if w[1] != false_lit {
                    continue;
                }
            }
            let first = self.slots[slot].watched[0];
            if self.value(first) == 1 {
                list[keep] = slot;
                keep += 1;
                continue;
            }
            let len = self.slots[slot].watched.len();
            let replacement = (2..len).find(|&k| self.value(self.slots[slot].watched[k]) != -1);
            if let Some(k) = replacement {
                self.slots[slot].watched.swap(1, k);
                let new_watch = self.slots[slot].watched[1];
                self.watches[new_watch.code()].push(slot);
                continue;
            }
            list[keep] = slot;
            keep += 1;
            if self.value(first) == -1 {
                conflict = true;
                while i < list.len() {
                    list[keep] = list[i];
                    keep += 1;
                    i += 1;
                }
                break;
            }
            self.assign(first, Some(slot));
        }
        list.truncate(keep);
        let pushed = std::mem::replace(&mut self.watches[false_lit.code()], list);
        debug_assert!(pushed.is_empty());
        conflict
    }

    /// Propagates `assumptions` to fixpoint or conflict and reports the trail.
    pub fn propagate(&mut self, assumptions: &[Lit]) -> PropagationResult {
        let conflict = self.run(assumptions);
        let trail = self.trail.clone();
        let assignment = trail.iter().map(|&(l, _)| (l.var(), l.is_positive())).collect();
        self.reset();
        PropagationResult { outcome: if conflict { Outcome::Conflict } else { Outcome::Fixpoint }, assignment, trail }
    }

    /// Runs `f` with `slot` invisible to propagation and to [`occurrences`].
    ///
    /// [`occurrences`]: ClauseDb::occurrences
    pub fn with_hidden<R>(&mut self, slot: usize, f: impl FnOnce(&mut ClauseDb) -> R) -> R {
        let saved = self.hidden.replace(slot);
        let r = f(self);
        self.hidden = saved;
        r
    }

    /// Does propagating `assumptions` yield a conflict?
    pub fn conflicts(&mut self, assumptions: &[Lit]) -> bool {
        let conflict = self.run(assumptions);
        self.reset();
        conflict
    }

    /// `ψ ⊢₁ C`: assuming the negation of every literal of `c` conflicts.
    pub fn is_asymmetric_tautology(&mut self, c: &Clause) -> bool {
        if c.is_tautology() {
            return true;
        }
        let negated: Vec<Lit> = c.iter().map(|&l| -l).collect();
        self.conflicts(&negated)
    }

    /// Every outer resolvent of `c` on `pivot` with a live clause containing
    /// `¬pivot` is an asymmetric tautology of this database.
    pub fn is_qrat_clause(&mut self, prefix: &Prefix, c: &Clause, pivot: Lit) -> bool {
        for slot in self.occurrences(-pivot) {
            let d = self.slots[slot].clause.clone();
            let Ok(resolvent) = outer_resolvent(prefix, c, &d, pivot) else { return false };
            if !self.is_asymmetric_tautology(&resolvent) {
                return false;
            }
        }
        true
    }
}

/// Propagates `assumptions` over `matrix` (slot numbers are clause indices).
pub fn unit_propagate(matrix: &[Clause], assumptions: &[Lit]) -> PropagationResult {
    ClauseDb::from_clauses(matrix).propagate(assumptions)
}

pub fn is_asymmetric_tautology(matrix: &[Clause], c: &Clause) -> bool {
    if c.is_tautology() {
        return true;
    }
    ClauseDb::from_clauses(matrix).is_asymmetric_tautology(c)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolventError {
    #[error("pivot {0} does not occur in the first clause")]
    PivotMissing(Lit),
    #[error("complement of pivot {0} does not occur in the second clause")]
    ComplementMissing(Lit),
}

/// `OR(Q, C, D, ℓ)`: the literals of `c` other than `ℓ`, together with the
/// literals of `d` other than `¬ℓ` that occur at or left of `ℓ`'s block.
pub fn outer_resolvent(prefix: &Prefix, c: &Clause, d: &Clause, pivot: Lit) -> Result<Clause, ResolventError> {
    if !c.contains(pivot) {
        return Err(ResolventError::PivotMissing(pivot));
    }
    if !d.contains(-pivot) {
        return Err(ResolventError::ComplementMissing(pivot));
    }
    let pivot_block = prefix.info(pivot.var()).map_or(usize::MAX, |i| i.block);
    let mut lits: Vec<Lit> = c.iter().copied().filter(|&l| l != pivot).collect();
    lits.extend(
        d.iter().copied().filter(|&k| k != -pivot && prefix.info(k.var()).is_some_and(|i| i.block <= pivot_block)),
    );
    Ok(Clause::new(lits))
}

/// QRAT clause test of `c` on `pivot` against the matrix of `f`.
pub fn is_qrat_clause(f: &Qbf, c: &Clause, pivot: Lit) -> bool {
    if !c.contains(pivot) {
        return false;
    }
    ClauseDb::from_clauses(&f.clauses).is_qrat_clause(&f.prefix, c, pivot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::Quantifier;

    fn cl(v: &[i32]) -> Clause {
        Clause::from_dimacs(v)
    }

    fn lit(v: i32) -> Lit {
        Lit::from_dimacs(v)
    }

    fn phi1_prefix() -> Prefix {
        let mut p = Prefix::new();
        p.push(Quantifier::Existential, &[Var(1)]).unwrap();
        p.push(Quantifier::Universal, &[Var(2)]).unwrap();
        p.push(Quantifier::Existential, &[Var(3), Var(4)]).unwrap();
        p
    }

    #[test]
    fn unit_against_assumption_conflicts() {
        let r = unit_propagate(&[cl(&[1])], &[lit(-1)]);
        assert_eq!(r.outcome, Outcome::Conflict);
    }

    #[test]
    fn no_units_is_a_fixpoint() {
        let r = unit_propagate(&[cl(&[1, 2])], &[]);
        assert_eq!(r.outcome, Outcome::Fixpoint);
        assert!(r.assignment.is_empty());
    }

    #[test]
    fn trail_records_reasons() {
        let m = [cl(&[-1, 2]), cl(&[-2, 3])];
        let r = unit_propagate(&m, &[lit(1)]);
        assert_eq!(r.outcome, Outcome::Fixpoint);
        assert_eq!(r.trail, vec![(lit(1), None), (lit(2), Some(0)), (lit(3), Some(1))]);
    }

    #[test]
    fn empty_clause_in_matrix_conflicts() {
        assert!(is_asymmetric_tautology(&[Clause::empty()], &cl(&[5])));
    }

    #[test]
    fn tautologies_are_at() {
        assert!(is_asymmetric_tautology(&[], &cl(&[3, -3])));
    }

    #[test]
    fn deleted_clauses_do_not_propagate() {
        let mut db = ClauseDb::from_clauses(&[cl(&[-1, 2]), cl(&[-2])]);
        assert!(db.conflicts(&[lit(1)]));
        db.remove(1);
        assert!(!db.conflicts(&[lit(1)]));
        db.remove(0);
        db.add(cl(&[-1, 3]));
        assert!(db.is_asymmetric_tautology(&cl(&[-1, 3])));
        assert!(!db.is_asymmetric_tautology(&cl(&[-1, 2])));
    }

    #[test]
    fn outer_resolvent_keeps_left_literals_only() {
        let p = phi1_prefix();
        let r = outer_resolvent(&p, &cl(&[2, 4]), &cl(&[-2, 3]), lit(2)).unwrap();
        assert_eq!(r, cl(&[4]));
        assert_eq!(outer_resolvent(&p, &cl(&[4]), &cl(&[-2, 3]), lit(2)), Err(ResolventError::PivotMissing(lit(2))));
        assert_eq!(
            outer_resolvent(&p, &cl(&[2, 4]), &cl(&[3]), lit(2)),
            Err(ResolventError::ComplementMissing(lit(2)))
        );
    }

    #[test]
    fn definition_pair_outer_resolvent_is_tautology() {
        // x = 3, x^τ = 5 placed in x's block
        let mut p = phi1_prefix();
        p.declare_in_block(Var(5), 3).unwrap();
        let r = outer_resolvent(&p, &cl(&[5, -3]), &cl(&[-5, 3]), lit(5)).unwrap();
        assert_eq!(r, cl(&[3, -3]));
        assert!(r.is_tautology());
    }

    #[test]
    fn qrat_definitions() {
        let mut p = phi1_prefix();
        p.declare_in_block(Var(5), 3).unwrap();
        let mut f = Qbf::new(p, vec![cl(&[2, 4]), cl(&[-3, -4])]).unwrap();
        // (x̄^τ ∨ x) is vacuously QRAT on x̄^τ, since x^τ occurs nowhere.
        assert!(is_qrat_clause(&f, &cl(&[-5, 4]), lit(-5)));
        f.clauses.push(cl(&[-5, 4]));
        assert!(is_qrat_clause(&f, &cl(&[5, -4]), lit(5)));
    }

    #[test]
    fn outer_restriction_can_break_qrat_of_at_clauses() {
        let p = phi1_prefix();
        let f = Qbf::new(p, vec![cl(&[-1, 3]), cl(&[-3, 4]), cl(&[1, -4])]).unwrap();
        let c = cl(&[-1, 4]);
        assert!(is_asymmetric_tautology(&f.clauses, &c));
        assert!(is_qrat_clause(&f, &c, lit(4)));
        // the resolvent with (1 ∨ ¬4) on ¬1 loses ¬4, which sits right of 1
        assert!(!is_qrat_clause(&f, &c, lit(-1)));
    }
}
