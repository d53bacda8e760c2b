//! Resolution paths and the reflexive resolution-path dependency scheme.
//!
//! A resolution path from a universal literal `u` is a chain of clauses
//! `C₁..Cₙ` with `u ∈ C₁`, linked by existential connectors `eᵢ ∈ Cᵢ`,
//! `¬eᵢ ∈ Cᵢ₊₁`, all strictly right of `u`, where consecutive connectors are
//! on different variables. The search is a breadth-first walk over states
//! `(clause, variable of the last connector)`.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::qbf::{Clause, Lit, Prefix, Qbf, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionPath {
    /// Clause indices `C₁..Cₙ` into the searched matrix.
    pub clauses: Vec<usize>,
    /// Connectors `e₁..eₙ₋₁`.
    pub connectors: Vec<Lit>,
}

impl ResolutionPath {
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn reversed(&self) -> ResolutionPath {
        ResolutionPath {
            clauses: self.clauses.iter().rev().copied().collect(),
            connectors: self.connectors.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Comma-separated clause labels.
    pub fn labels(&self, f: &Qbf) -> String {
        self.clauses.iter().map(|&i| f.label(i)).collect::<Vec<_>>().join(",")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DependencyError {
    #[error("{0} is not a universal variable")]
    NotUniversal(Var),
    #[error("{0} is not an existential variable")]
    NotExistential(Var),
    #[error("{e} is not strictly right of {u}")]
    NotRightOf { e: Var, u: Var },
}

type State = (usize, Option<Var>);

/// Occurrence index over a matrix, borrowed for the duration of a query.
pub struct PathSearch<'a> {
    prefix: &'a Prefix,
    clauses: &'a [Clause],
    occurs: HashMap<Lit, Vec<usize>>,
}

impl<'a> PathSearch<'a> {
    pub fn new(prefix: &'a Prefix, clauses: &'a [Clause]) -> PathSearch<'a> {
        let mut occurs: HashMap<Lit, Vec<usize>> = HashMap::new();
        for (i, c) in clauses.iter().enumerate() {
            for &l in c {
                occurs.entry(l).or_default().push(i);
            }
        }
        PathSearch { prefix, clauses, occurs }
    }

    fn occurrences(&self, lit: Lit) -> &[usize] {
        self.occurs.get(&lit).map_or(&[], Vec::as_slice)
    }

    fn is_connector(&self, lit: Lit, source: Var) -> bool {
        self.prefix.is_existential(lit.var()) && self.prefix.strictly_left_of(source, lit.var())
    }

    fn successors(&self, (clause, prev): State, source: Var) -> Vec<(Lit, State)> {
        let mut out = Vec::new();
        for &l in &self.clauses[clause] {
            if Some(l.var()) == prev || !self.is_connector(l, source) {
                continue;
            }
            for &next in self.occurrences(-l) {
                out.push((l, (next, Some(l.var()))));
            }
        }
        out
    }

    /// Shortest path (in clauses) from a clause containing `start` to a clause
    /// satisfying `goal`.
    fn bfs(&self, start: Lit, goal: impl Fn(usize) -> bool) -> Option<ResolutionPath> {
        let source = start.var();
        let mut parent: HashMap<State, Option<(State, Lit)>> = HashMap::new();
        let mut queue = VecDeque::new();
        for &c in self.occurrences(start) {
            let s = (c, None);
            parent.insert(s, None);
            queue.push_back(s);
        }
        while let Some(state) = queue.pop_front() {
            if goal(state.0) {
                return Some(Self::rebuild(&parent, state));
            }
            for (conn, next) in self.successors(state, source) {
                if parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next, Some((state, conn)));
                queue.push_back(next);
            }
        }
        None
    }

    fn rebuild(parent: &HashMap<State, Option<(State, Lit)>>, end: State) -> ResolutionPath {
        let mut clauses = vec![end.0];
        let mut connectors = Vec::new();
        let mut cur = end;
        while let Some(&Some((prev, conn))) = parent.get(&cur) {
            clauses.push(prev.0);
            connectors.push(conn);
            cur = prev;
        }
        clauses.reverse();
        connectors.reverse();
        ResolutionPath { clauses, connectors }
    }

    /// Indices of every clause that ends some resolution path from `start`.
    pub fn reachable_clauses(&self, start: Lit) -> Vec<bool> {
        let source = start.var();
        let mut seen_state: HashMap<State, ()> = HashMap::new();
        let mut reached = vec![false; self.clauses.len()];
        let mut queue = VecDeque::new();
        for &c in self.occurrences(start) {
            if seen_state.insert((c, None), ()).is_none() {
                queue.push_back((c, None));
            }
        }
        while let Some(state) = queue.pop_front() {
            reached[state.0] = true;
            for (_, next) in self.successors(state, source) {
                if seen_state.insert(next, ()).is_none() {
                    queue.push_back(next);
                }
            }
        }
        reached
    }

    /// Is some literal `lit` contained in a clause reachable from `start`?
    pub fn reaches(&self, reached: &[bool], lit: Lit) -> bool {
        self.occurrences(lit).iter().any(|&c| reached[c])
    }

    pub fn find_resolution_path(&self, u: Lit, e: Lit) -> Result<Option<ResolutionPath>, DependencyError> {
        if !self.prefix.is_universal(u.var()) {
            return Err(DependencyError::NotUniversal(u.var()));
        }
        if !self.prefix.is_existential(e.var()) {
            return Err(DependencyError::NotExistential(e.var()));
        }
        if !self.prefix.strictly_left_of(u.var(), e.var()) {
            return Err(DependencyError::NotRightOf { e: e.var(), u: u.var() });
        }
        Ok(self.bfs(u, |c| self.clauses[c].contains(e)))
    }

    /// A path whose first clause contains `¬u` and whose last clause contains
    /// `u`, or failing that the other way round.
    pub fn find_blocking_path(&self, u: Var) -> Result<Option<ResolutionPath>, DependencyError> {
        if !self.prefix.is_universal(u) {
            return Err(DependencyError::NotUniversal(u));
        }
        for start in [u.negative(), u.positive()] {
            let target = -start;
            if let Some(p) = self.bfs(start, |c| self.clauses[c].contains(target)) {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// D^rrs: `e` depends on `u` iff there are paths `u → e` and `ū → ē`, or
    /// `u → ē` and `ū → e`.
    pub fn drrs_depends(&self, e: Var, u: Var) -> Result<bool, DependencyError> {
        if !self.prefix.is_universal(u) {
            return Err(DependencyError::NotUniversal(u));
        }
        if !self.prefix.is_existential(e) {
            return Err(DependencyError::NotExistential(e));
        }
        if !self.prefix.strictly_left_of(u, e) {
            return Err(DependencyError::NotRightOf { e, u });
        }
        let from_pos = self.reachable_clauses(u.positive());
        let from_neg = self.reachable_clauses(u.negative());
        Ok(self.depends_with(&from_pos, &from_neg, e))
    }

    fn depends_with(&self, from_pos: &[bool], from_neg: &[bool], e: Var) -> bool {
        let (ep, en) = (e.positive(), e.negative());
        (self.reaches(from_pos, ep) && self.reaches(from_neg, en))
            || (self.reaches(from_pos, en) && self.reaches(from_neg, ep))
    }

    /// Extended universal reduction of `u` from `clause`: every existential
    /// clause-mate right of `u` is D^rrs-independent of `u`.
    pub fn eur_droppable(&self, clause: &Clause, u: Lit) -> Result<bool, DependencyError> {
        if !self.prefix.is_universal(u.var()) {
            return Err(DependencyError::NotUniversal(u.var()));
        }
        let uv = u.var();
        let mates: Vec<Var> = clause
            .iter()
            .filter(|l| self.prefix.is_existential(l.var()) && self.prefix.strictly_left_of(uv, l.var()))
            .map(|l| l.var())
            .collect();
        if mates.is_empty() {
            return Ok(true);
        }
        let from_pos = self.reachable_clauses(uv.positive());
        let from_neg = self.reachable_clauses(uv.negative());
        Ok(mates.into_iter().all(|e| !self.depends_with(&from_pos, &from_neg, e)))
    }
}

pub fn find_resolution_path(f: &Qbf, u: Lit, e: Lit) -> Result<Option<ResolutionPath>, DependencyError> {
    PathSearch::new(&f.prefix, &f.clauses).find_resolution_path(u, e)
}

pub fn find_blocking_path(f: &Qbf, u: Var) -> Result<Option<ResolutionPath>, DependencyError> {
    PathSearch::new(&f.prefix, &f.clauses).find_blocking_path(u)
}

pub fn drrs_depends(f: &Qbf, e: Var, u: Var) -> Result<bool, DependencyError> {
    PathSearch::new(&f.prefix, &f.clauses).drrs_depends(e, u)
}

pub fn eur_droppable(f: &Qbf, c: &Clause, u: Lit) -> Result<bool, DependencyError> {
    PathSearch::new(&f.prefix, &f.clauses).eur_droppable(c, u)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathViolation {
    #[error("path has no clauses")]
    Empty,
    #[error("expected {expected} connectors, found {found}")]
    ConnectorCount { expected: usize, found: usize },
    #[error("clause index {0} out of range")]
    OutOfRange(usize),
    #[error("source literal {0} missing from the first clause")]
    SourceMissing(Lit),
    #[error("connector {0} missing from its clause")]
    ConnectorMissing(Lit),
    #[error("complement of connector {0} missing from the next clause")]
    ComplementMissing(Lit),
    #[error("consecutive connectors share variable {0}")]
    RepeatedVariable(Var),
    #[error("connector {0} is not an existential strictly right of the source")]
    NotRightOfSource(Lit),
}

/// Checks the resolution-path conditions of `path` from `source`.
pub fn validate_path(
    prefix: &Prefix,
    clauses: &[Clause],
    source: Lit,
    path: &ResolutionPath,
) -> Result<(), PathViolation> {
    if path.clauses.is_empty() {
        return Err(PathViolation::Empty);
    }
    if path.connectors.len() + 1 != path.clauses.len() {
        return Err(PathViolation::ConnectorCount { expected: path.clauses.len() - 1, found: path.connectors.len() });
    }
    let get = |i: usize| clauses.get(i).ok_or(PathViolation::OutOfRange(i));
    if !get(path.clauses[0])?.contains(source) {
        return Err(PathViolation::SourceMissing(source));
    }
    for (i, &e) in path.connectors.iter().enumerate() {
        if !(prefix.is_existential(e.var()) && prefix.strictly_left_of(source.var(), e.var())) {
            return Err(PathViolation::NotRightOfSource(e));
        }
        if !get(path.clauses[i])?.contains(e) {
            return Err(PathViolation::ConnectorMissing(e));
        }
        if !get(path.clauses[i + 1])?.contains(-e) {
            return Err(PathViolation::ComplementMissing(e));
        }
        if i > 0 && path.connectors[i - 1].var() == e.var() {
            return Err(PathViolation::RepeatedVariable(e.var()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::Quantifier;

    fn lit(v: i32) -> Lit {
        Lit::from_dimacs(v)
    }

    /// ∃e ∀u ∃x y: (u ∨ x) (x̄ ∨ y) (ȳ ∨ ū)
    fn chain() -> Qbf {
        let mut p = Prefix::new();
        p.push(Quantifier::Existential, &[Var(1)]).unwrap();
        p.push(Quantifier::Universal, &[Var(2)]).unwrap();
        p.push(Quantifier::Existential, &[Var(3), Var(4)]).unwrap();
        let cs = vec![Clause::from_dimacs(&[2, 3]), Clause::from_dimacs(&[-3, 4]), Clause::from_dimacs(&[-4, -2])];
        Qbf::new(p, cs).unwrap()
    }

    #[test]
    fn single_clause_path() {
        let f = chain();
        let p = find_resolution_path(&f, lit(2), lit(3)).unwrap().unwrap();
        assert_eq!(p.clauses, vec![0]);
        assert!(p.connectors.is_empty());
    }

    #[test]
    fn chain_path_and_blocking_path() {
        let f = chain();
        let p = find_resolution_path(&f, lit(2), lit(-4)).unwrap().unwrap();
        assert_eq!(p.clauses, vec![0, 1, 2]);
        assert_eq!(p.connectors, vec![lit(3), lit(4)]);
        validate_path(&f.prefix, &f.clauses, lit(2), &p).unwrap();

        let b = find_blocking_path(&f, Var(2)).unwrap().unwrap();
        assert_eq!(b.clauses, vec![2, 1, 0]);
        validate_path(&f.prefix, &f.clauses, lit(-2), &b).unwrap();
        validate_path(&f.prefix, &f.clauses, lit(2), &b.reversed()).unwrap();
    }

    #[test]
    fn missing_source_means_no_path() {
        let mut f = chain();
        f.clauses.remove(0);
        f.labels.remove(0);
        assert_eq!(find_resolution_path(&f, lit(2), lit(3)).unwrap(), None);
        assert_eq!(find_blocking_path(&f, Var(2)).unwrap(), None);
    }

    #[test]
    fn connectors_must_be_right_of_source() {
        // (u ∨ e) (ē ∨ ū): e is left of u, so no path links the clauses
        let mut p = Prefix::new();
        p.push(Quantifier::Existential, &[Var(1)]).unwrap();
        p.push(Quantifier::Universal, &[Var(2)]).unwrap();
        let f = Qbf::new(p, vec![Clause::from_dimacs(&[1, 2]), Clause::from_dimacs(&[-1, -2])]).unwrap();
        assert_eq!(find_blocking_path(&f, Var(2)).unwrap(), None);
    }

    #[test]
    fn preconditions_are_checked() {
        let f = chain();
        assert_eq!(find_resolution_path(&f, lit(2), lit(1)), Err(DependencyError::NotRightOf { e: Var(1), u: Var(2) }));
        assert_eq!(find_blocking_path(&f, Var(3)), Err(DependencyError::NotUniversal(Var(3))));
    }

    #[test]
    fn consecutive_connectors_need_distinct_variables() {
        // (u ∨ x) (x̄ ∨ y) (ȳ ∨ x) (x̄ ∨ ū): revisiting x is allowed once y
        // separates the two x connectors.
        let mut p = Prefix::new();
        p.push(Quantifier::Universal, &[Var(1)]).unwrap();
        p.push(Quantifier::Existential, &[Var(2), Var(3)]).unwrap();
        let f = Qbf::new(
            p,
            vec![
                Clause::from_dimacs(&[1, 2]),
                Clause::from_dimacs(&[-2, 3]),
                Clause::from_dimacs(&[-3, 2]),
                Clause::from_dimacs(&[-2, -1]),
            ],
        )
        .unwrap();
        let b = find_blocking_path(&f, Var(1)).unwrap().unwrap();
        validate_path(&f.prefix, &f.clauses, lit(-1), &b).unwrap();
    }

    #[test]
    fn drrs_needs_both_polarities() {
        let f = chain();
        // paths u → x (clause 0) and ū → x̄ (clauses 2, 1): x depends on u
        assert!(drrs_depends(&f, Var(3), Var(2)).unwrap());

        let mut g = chain();
        g.clauses[2] = Clause::from_dimacs(&[-4]);
        assert!(!drrs_depends(&g, Var(3), Var(2)).unwrap());
        assert!(!drrs_depends(&g, Var(4), Var(2)).unwrap());
    }

    #[test]
    fn eur_unit_clause_is_droppable() {
        let f = chain();
        assert!(eur_droppable(&f, &Clause::from_dimacs(&[2]), lit(2)).unwrap());
        assert!(!eur_droppable(&f, &f.clauses[0], lit(2)).unwrap());
    }

    #[test]
    fn validator_rejects_broken_paths() {
        let f = chain();
        let bad = ResolutionPath { clauses: vec![0, 2], connectors: vec![lit(3)] };
        assert_eq!(validate_path(&f.prefix, &f.clauses, lit(2), &bad), Err(PathViolation::ComplementMissing(lit(3))));
        let left = ResolutionPath { clauses: vec![0, 1], connectors: vec![lit(1)] };
        assert_eq!(validate_path(&f.prefix, &f.clauses, lit(2), &left), Err(PathViolation::NotRightOfSource(lit(1))));
    }
}
