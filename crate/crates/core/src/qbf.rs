//! Prenex CNF formulas: variables, literals, the quantifier prefix and the
//! clause matrix.

use std::fmt;

use thiserror::Error;

/// A propositional variable, identified by a positive integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A signed DIMACS-style literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        let v = var.0 as i32;
        Lit(if positive { v } else { -v })
    }

    /// Builds a literal from its signed integer form. Panics on zero.
    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0, "literal 0 is reserved as a terminator");
        Lit(value)
    }

    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    /// Dense index for per-literal tables: `2 * var + (negative as usize)`.
    pub fn code(self) -> usize {
        2 * self.var().index() + usize::from(!self.is_positive())
    }

    fn sort_key(self) -> (u32, bool) {
        (self.var().0, !self.is_positive())
    }
}

impl std::ops::Neg for Lit {
    type Output = Lit;

    fn neg(self) -> Lit {
        Lit(-self.0)
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Existential,
    Universal,
}

impl Quantifier {
    pub fn symbol(self) -> char {
        match self {
            Quantifier::Existential => 'e',
            Quantifier::Universal => 'a',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarInfo {
    pub quantifier: Quantifier,
    /// 1-based index of the quantifier block.
    pub block: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub quantifier: Quantifier,
    pub vars: Vec<Var>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrefixError {
    #[error("variable {0} is not declared in the prefix")]
    Undeclared(Var),
    #[error("variable {0} is declared twice")]
    Redeclared(Var),
    #[error("variable 0 is not a valid variable")]
    ZeroVariable,
    #[error("block {0} does not exist")]
    NoSuchBlock(usize),
}

/// The quantifier prefix. Adjacent blocks always carry different quantifiers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Prefix {
    blocks: Vec<Block>,
    info: Vec<Option<VarInfo>>,
}

impl Prefix {
    pub fn new() -> Prefix {
        Prefix::default()
    }

    /// Appends `vars` to the end of the prefix, merging with the last block when
    /// the quantifier matches.
    pub fn push(&mut self, quantifier: Quantifier, vars: &[Var]) -> Result<(), PrefixError> {
        if vars.is_empty() {
            return Ok(());
        }
        for &v in vars {
            if v.0 == 0 {
                return Err(PrefixError::ZeroVariable);
            }
            if self.info(v).is_some() {
                return Err(PrefixError::Redeclared(v));
            }
        }
        let needs_new = self.blocks.last().is_none_or(|b| b.quantifier != quantifier);
        if needs_new {
            self.blocks.push(Block { quantifier, vars: Vec::new() });
        }
        let block = self.blocks.len();
        for &v in vars {
            if self.blocks[block - 1].vars.contains(&v) {
                return Err(PrefixError::Redeclared(v));
            }
            self.blocks[block - 1].vars.push(v);
            self.set_info(v, VarInfo { quantifier, block });
        }
        Ok(())
    }

    /// Declares `var` inside an existing block (used for annotated copies).
    pub fn declare_in_block(&mut self, var: Var, block: usize) -> Result<(), PrefixError> {
        if var.0 == 0 {
            return Err(PrefixError::ZeroVariable);
        }
        if self.info(var).is_some() {
            return Err(PrefixError::Redeclared(var));
        }
        let quantifier = self.blocks.get(block.wrapping_sub(1)).ok_or(PrefixError::NoSuchBlock(block))?.quantifier;
        self.blocks[block - 1].vars.push(var);
        self.set_info(var, VarInfo { quantifier, block });
        Ok(())
    }

    fn set_info(&mut self, var: Var, info: VarInfo) {
        if self.info.len() <= var.index() {
            self.info.resize(var.index() + 1, None);
        }
        self.info[var.index()] = Some(info);
    }

    pub fn info(&self, var: Var) -> Option<VarInfo> {
        self.info.get(var.index()).copied().flatten()
    }

    pub fn require(&self, var: Var) -> Result<VarInfo, PrefixError> {
        self.info(var).ok_or(PrefixError::Undeclared(var))
    }

    pub fn is_declared(&self, var: Var) -> bool {
        self.info(var).is_some()
    }

    pub fn is_universal(&self, var: Var) -> bool {
        matches!(self.info(var), Some(VarInfo { quantifier: Quantifier::Universal, .. }))
    }

    pub fn is_existential(&self, var: Var) -> bool {
        matches!(self.info(var), Some(VarInfo { quantifier: Quantifier::Existential, .. }))
    }

    /// Block index of a declared variable. Panics when undeclared.
    pub fn block_of(&self, var: Var) -> usize {
        self.info(var).unwrap_or_else(|| panic!("variable {var} not in prefix")).block
    }

    /// `a ≤_Q b`: the block of `a` is at or before the block of `b`.
    pub fn occurs_left_of(&self, a: Var, b: Var) -> Result<bool, PrefixError> {
        Ok(self.require(a)?.block <= self.require(b)?.block)
    }

    /// Strict version of [`Prefix::occurs_left_of`].
    pub fn strictly_left_of(&self, a: Var, b: Var) -> bool {
        match (self.info(a), self.info(b)) {
            (Some(x), Some(y)) => x.block < y.block,
            _ => false,
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Largest declared variable id (0 for an empty prefix).
    pub fn max_var(&self) -> u32 {
        self.info.iter().rposition(Option::is_some).map_or(0, |i| i as u32)
    }

    /// All variables in prefix order.
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.blocks.iter().flat_map(|b| b.vars.iter().copied())
    }

    /// Universal variables from the rightmost to the leftmost.
    pub fn universals_right_to_left(&self) -> Vec<Var> {
        self.blocks
            .iter()
            .rev()
            .filter(|b| b.quantifier == Quantifier::Universal)
            .flat_map(|b| b.vars.iter().rev().copied())
            .collect()
    }

    pub fn universals(&self) -> Vec<Var> {
        let mut us = self.universals_right_to_left();
        us.reverse();
        us
    }
}

/// A clause of plain literals in canonical order, without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn new(mut lits: Vec<Lit>) -> Clause {
        lits.sort();
        lits.dedup();
        Clause(lits)
    }

    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    pub fn from_dimacs(values: &[i32]) -> Clause {
        Clause::new(values.iter().map(|&v| Lit::from_dimacs(v)).collect())
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.0.binary_search(&lit).is_ok()
    }

    pub fn is_tautology(&self) -> bool {
        self.0.windows(2).any(|w| w[0] == -w[1])
    }

    pub fn without(&self, lit: Lit) -> Clause {
        Clause(self.0.iter().copied().filter(|&l| l != lit).collect())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Lit> {
        self.0.iter()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l} ")?;
        }
        write!(f, "0")
    }
}

impl<'a> IntoIterator for &'a Clause {
    type Item = &'a Lit;
    type IntoIter = std::slice::Iter<'a, Lit>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<T: IntoIterator<Item = Lit>>(iter: T) -> Self {
        Clause::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QbfError {
    #[error(transparent)]
    Prefix(#[from] PrefixError),
    #[error("clause {index} is a tautology")]
    Tautology { index: usize },
}

/// A closed prenex CNF formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Qbf {
    pub prefix: Prefix,
    pub clauses: Vec<Clause>,
    /// Optional display names, parallel to `clauses`.
    pub labels: Vec<Option<String>>,
    /// Maximum variable id announced in the header.
    pub num_vars: u32,
}

impl Qbf {
    /// Builds a formula, checking closedness and rejecting tautological clauses.
    pub fn new(prefix: Prefix, clauses: Vec<Clause>) -> Result<Qbf, QbfError> {
        for (index, c) in clauses.iter().enumerate() {
            for l in c {
                prefix.require(l.var())?;
            }
            if c.is_tautology() {
                return Err(QbfError::Tautology { index });
            }
        }
        let num_vars = prefix.max_var();
        let labels = vec![None; clauses.len()];
        Ok(Qbf { prefix, clauses, labels, num_vars })
    }

    /// Display name of clause `i` (0-based); defaults to `C<i+1>`.
    pub fn label(&self, i: usize) -> String {
        self.labels.get(i).cloned().flatten().unwrap_or_else(|| format!("C{}", i + 1))
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Qbf {
        assert_eq!(labels.len(), self.clauses.len());
        self.labels = labels;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi1_prefix() -> Prefix {
        let mut p = Prefix::new();
        p.push(Quantifier::Existential, &[Var(1)]).unwrap();
        p.push(Quantifier::Universal, &[Var(2)]).unwrap();
        p.push(Quantifier::Existential, &[Var(3), Var(4)]).unwrap();
        p
    }

    #[test]
    fn occurs_left_of_follows_blocks() {
        let p = phi1_prefix();
        assert!(p.occurs_left_of(Var(2), Var(3)).unwrap());
        assert!(p.occurs_left_of(Var(3), Var(3)).unwrap());
        assert!(!p.occurs_left_of(Var(2), Var(1)).unwrap());
        assert_eq!(p.occurs_left_of(Var(9), Var(1)), Err(PrefixError::Undeclared(Var(9))));
    }

    #[test]
    fn adjacent_blocks_merge() {
        let mut p = phi1_prefix();
        p.push(Quantifier::Existential, &[Var(5)]).unwrap();
        assert_eq!(p.blocks().len(), 3);
        assert_eq!(p.block_of(Var(5)), 3);
        assert_eq!(p.push(Quantifier::Universal, &[Var(1)]), Err(PrefixError::Redeclared(Var(1))));
    }

    #[test]
    fn clause_is_canonical() {
        let c = Clause::from_dimacs(&[4, -2, 2, 4, -1]);
        assert_eq!(c.lits().iter().map(|l| l.to_dimacs()).collect::<Vec<_>>(), vec![-1, 2, -2, 4]);
        assert!(c.is_tautology());
        assert!(!Clause::from_dimacs(&[1, 2]).is_tautology());
    }

    #[test]
    fn tautologies_are_rejected() {
        let err = Qbf::new(phi1_prefix(), vec![Clause::from_dimacs(&[3, -3])]).unwrap_err();
        assert_eq!(err, QbfError::Tautology { index: 0 });
    }

    #[test]
    fn free_variables_are_rejected() {
        let err = Qbf::new(phi1_prefix(), vec![Clause::from_dimacs(&[7])]).unwrap_err();
        assert_eq!(err, QbfError::Prefix(PrefixError::Undeclared(Var(7))));
    }
}
