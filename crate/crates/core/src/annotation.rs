//! Annotated literals `x^τ` of the expansion calculi and the table that
//! interns them as fresh propositional variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::qbf::{Lit, Prefix, Var};

/// A partial assignment to universal variables.
///
/// Entries are kept in a map, so equality does not depend on insertion order.
/// Use [`Annotation::ordered`] for the block-ordered form used in output.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Annotation(BTreeMap<Var, bool>);

impl Annotation {
    pub fn new() -> Annotation {
        Annotation::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, bool)>>(pairs: I) -> Annotation {
        Annotation(pairs.into_iter().collect())
    }

    /// Annotation from signed universal ids: `3` means `u3 ↦ 1`, `-3` means `u3 ↦ 0`.
    pub fn from_signed(values: &[i32]) -> Annotation {
        Annotation::from_pairs(values.iter().map(|&v| (Var(v.unsigned_abs()), v > 0)))
    }

    pub fn insert(&mut self, var: Var, value: bool) -> Option<bool> {
        self.0.insert(var, value)
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.0.get(&var).copied()
    }

    pub fn contains(&self, var: Var) -> bool {
        self.0.contains_key(&var)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    /// Entries sorted by (block, id).
    pub fn ordered(&self, prefix: &Prefix) -> Vec<(Var, bool)> {
        let mut entries: Vec<_> = self.iter().collect();
        entries.sort_by_key(|&(v, _)| (prefix.info(v).map_or(usize::MAX, |i| i.block), v));
        entries
    }

    /// Signed-id form in block order, as written in proof files.
    pub fn to_signed(&self, prefix: &Prefix) -> Vec<i32> {
        self.ordered(prefix).into_iter().map(|(v, b)| if b { v.0 as i32 } else { -(v.0 as i32) }).collect()
    }

    /// `τ[σ]` restricted to the universals strictly left of `x`: entries of
    /// `self` win, `sigma` fills the gaps.
    pub fn complete(&self, sigma: &Annotation, prefix: &Prefix, x: Var) -> Annotation {
        let mut out = restrict_annotation(prefix, sigma, x);
        for (v, b) in self.iter() {
            if prefix.strictly_left_of(v, x) {
                out.insert(v, b);
            }
        }
        out
    }

    /// Does this assignment make the universal literal `u` false?
    pub fn falsifies(&self, u: Lit) -> bool {
        self.get(u.var()) == Some(!u.is_positive())
    }
}

/// Restricts `sigma` to the universal keys strictly left of `x`.
pub fn restrict_annotation(prefix: &Prefix, sigma: &Annotation, x: Var) -> Annotation {
    Annotation::from_pairs(sigma.iter().filter(|&(v, _)| prefix.is_universal(v) && prefix.strictly_left_of(v, x)))
}

/// An existential literal with an annotation, `x^τ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ALit {
    pub lit: Lit,
    pub ann: Annotation,
}

impl ALit {
    pub fn new(lit: Lit, ann: Annotation) -> ALit {
        ALit { lit, ann }
    }

    pub fn plain(lit: Lit) -> ALit {
        ALit { lit, ann: Annotation::new() }
    }

    pub fn var(&self) -> Var {
        self.lit.var()
    }

    pub fn negate(&self) -> ALit {
        ALit { lit: -self.lit, ann: self.ann.clone() }
    }

    /// Same variable and annotation, opposite sign.
    pub fn is_complement_of(&self, other: &ALit) -> bool {
        self.lit == -other.lit && self.ann == other.ann
    }

    /// Renders as `[-]<id>[^{<s-ulit>,...}]`.
    pub fn display<'a>(&'a self, prefix: &'a Prefix) -> impl fmt::Display + 'a {
        DisplayALit { alit: self, prefix }
    }
}

struct DisplayALit<'a> {
    alit: &'a ALit,
    prefix: &'a Prefix,
}

impl fmt::Display for DisplayALit<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.alit.lit)?;
        if !self.alit.ann.is_empty() {
            let parts: Vec<String> = self.alit.ann.to_signed(self.prefix).iter().map(i32::to_string).collect();
            write!(f, "^{{{}}}", parts.join(","))?;
        }
        Ok(())
    }
}

impl PartialOrd for ALit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ALit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.lit, &self.ann).cmp(&(other.lit, &other.ann))
    }
}

/// A clause of annotated literals in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AClause(Vec<ALit>);

impl AClause {
    pub fn new(mut lits: Vec<ALit>) -> AClause {
        lits.sort();
        lits.dedup();
        AClause(lits)
    }

    pub fn empty() -> AClause {
        AClause(Vec::new())
    }

    pub fn lits(&self) -> &[ALit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lit: &ALit) -> bool {
        self.0.binary_search(lit).is_ok()
    }

    /// Contains some `x^τ` and `x̄^τ` with the same annotation.
    pub fn is_tautology(&self) -> bool {
        self.0.iter().any(|l| self.contains(&l.negate()))
    }

    /// Contains `x^τ` and `x̄^σ` for some annotations.
    pub fn has_clashing_bases(&self) -> bool {
        self.0.iter().any(|l| self.0.iter().any(|k| k.lit == -l.lit))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ALit> {
        self.0.iter()
    }

    pub fn display<'a>(&'a self, prefix: &'a Prefix) -> impl fmt::Display + 'a {
        DisplayAClause { clause: self, prefix }
    }
}

struct DisplayAClause<'a> {
    clause: &'a AClause,
    prefix: &'a Prefix,
}

impl fmt::Display for DisplayAClause<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clause.is_empty() {
            return write!(f, "⊥");
        }
        let parts: Vec<String> = self.clause.iter().map(|l| l.display(self.prefix).to_string()).collect();
        write!(f, "{}", parts.join(" ∨ "))
    }
}

impl<'a> IntoIterator for &'a AClause {
    type Item = &'a ALit;
    type IntoIter = std::slice::Iter<'a, ALit>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<ALit> for AClause {
    fn from_iter<T: IntoIterator<Item = ALit>>(iter: T) -> Self {
        AClause::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InternError {
    #[error("variable {0} is not existential")]
    NotExistential(Var),
    #[error("annotation key {key} is not a universal strictly left of {base}")]
    KeyNotLeft { key: Var, base: Var },
}

/// One interned annotated variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interned {
    pub fresh: Var,
    pub base: Var,
    pub annotation: Annotation,
    pub block: usize,
}

/// Injective map from `(base, annotation)` to fresh variable ids.
///
/// Ids are handed out in order of first appearance, starting right after the
/// largest id of the input formula. The empty annotation maps to the base
/// variable itself.
#[derive(Clone, Debug)]
pub struct VarTable {
    next: u32,
    ids: HashMap<(Var, Annotation), Var>,
    entries: Vec<Interned>,
    by_fresh: HashMap<Var, usize>,
}

impl VarTable {
    /// A table whose first fresh id is `max_var + 1`.
    pub fn new(max_var: u32) -> VarTable {
        VarTable { next: max_var + 1, ids: HashMap::new(), entries: Vec::new(), by_fresh: HashMap::new() }
    }

    pub fn lookup(&self, base: Var, tau: &Annotation) -> Option<Var> {
        if tau.is_empty() {
            return Some(base);
        }
        self.ids.get(&(base, tau.clone())).copied()
    }

    /// Returns the id for `base^tau` and whether it was freshly allocated.
    pub fn intern(&mut self, prefix: &Prefix, base: Var, tau: &Annotation) -> Result<(Var, bool), InternError> {
        if !prefix.is_existential(base) {
            return Err(InternError::NotExistential(base));
        }
        for (key, _) in tau.iter() {
            if !prefix.is_universal(key) || !prefix.strictly_left_of(key, base) {
                return Err(InternError::KeyNotLeft { key, base });
            }
        }
        if tau.is_empty() {
            return Ok((base, false));
        }
        if let Some(&v) = self.ids.get(&(base, tau.clone())) {
            return Ok((v, false));
        }
        let fresh = Var(self.next);
        self.next += 1;
        self.ids.insert((base, tau.clone()), fresh);
        self.by_fresh.insert(fresh, self.entries.len());
        self.entries.push(Interned { fresh, base, annotation: tau.clone(), block: prefix.block_of(base) });
        Ok((fresh, true))
    }

    /// Interns the variable of an annotated literal and returns the plain literal.
    pub fn intern_lit(&mut self, prefix: &Prefix, alit: &ALit) -> Result<(Lit, bool), InternError> {
        let (v, fresh) = self.intern(prefix, alit.var(), &alit.ann)?;
        Ok((Lit::new(v, alit.lit.is_positive()), fresh))
    }

    pub fn get(&self, fresh: Var) -> Option<&Interned> {
        self.by_fresh.get(&fresh).map(|&i| &self.entries[i])
    }

    /// Interned variables in allocation order.
    pub fn entries(&self) -> &[Interned] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
