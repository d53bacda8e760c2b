//! Independent reference implementations used to cross-check the library.
//! Everything here is deliberately naive: plain loops, no watched literals,
//! no breadth-first search.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use qratsim::{Clause, Lit, Prefix, Qbf, QratProof, QratStep, Quantifier, Var};

// ---------- propositional ----------

fn lit_value(assign: &BTreeMap<u32, bool>, l: i32) -> Option<bool> {
    assign.get(&l.unsigned_abs()).map(|&b| if l > 0 { b } else { !b })
}

pub fn dimacs(c: &Clause) -> Vec<i32> {
    c.iter().map(|l| l.to_dimacs()).collect()
}

/// Every total assignment over `1..=nvars` that satisfies `cnf` satisfies `c`.
pub fn entails(cnf: &[Clause], c: &Clause, nvars: u32) -> bool {
    let cnf: Vec<Vec<i32>> = cnf.iter().map(dimacs).collect();
    let c = dimacs(c);
    for bits in 0u64..(1 << nvars) {
        let value = |l: i32| {
            let b = bits >> (l.unsigned_abs() - 1) & 1 == 1;
            if l > 0 {
                b
            } else {
                !b
            }
        };
        let sat = cnf.iter().all(|cl| cl.iter().any(|&l| value(l)));
        if sat && !c.iter().any(|&l| value(l)) {
            return false;
        }
    }
    true
}

/// Repeated full scans until nothing changes. Returns true on conflict.
pub fn naive_propagation_conflicts(cnf: &[Vec<i32>], assumptions: &[i32]) -> bool {
    let mut assign: BTreeMap<u32, bool> = BTreeMap::new();
    for &a in assumptions {
        match lit_value(&assign, a) {
            Some(false) => return true,
            Some(true) => {}
            None => {
                assign.insert(a.unsigned_abs(), a > 0);
            }
        }
    }
    loop {
        let mut changed = false;
        for cl in cnf {
            if cl.iter().any(|&l| lit_value(&assign, l) == Some(true)) {
                continue;
            }
            let open: Vec<i32> = cl.iter().copied().filter(|&l| lit_value(&assign, l).is_none()).collect();
            match open.len() {
                0 => return true,
                1 => {
                    assign.insert(open[0].unsigned_abs(), open[0] > 0);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return false;
        }
    }
}

pub fn naive_at(cnf: &[Vec<i32>], c: &[i32]) -> bool {
    if c.iter().any(|&l| c.contains(&-l)) {
        return true;
    }
    let neg: Vec<i32> = c.iter().map(|&l| -l).collect();
    naive_propagation_conflicts(cnf, &neg)
}

// ---------- QBF evaluation ----------

/// Minimax over the prefix, cutting branches once a clause is falsified or
/// every clause is satisfied.
pub fn eval_qbf(f: &Qbf) -> bool {
    let order: Vec<(Var, Quantifier)> =
        f.prefix.blocks().iter().flat_map(|b| b.vars.iter().map(move |&v| (v, b.quantifier))).collect();
    let clauses: Vec<Vec<i32>> = f.clauses.iter().map(dimacs).collect();
    let mut assign = BTreeMap::new();
    eval_rec(&order, 0, &clauses, &mut assign)
}

fn eval_rec(order: &[(Var, Quantifier)], depth: usize, clauses: &[Vec<i32>], assign: &mut BTreeMap<u32, bool>) -> bool {
    let mut all_sat = true;
    for cl in clauses {
        let mut sat = false;
        let mut open = false;
        for &l in cl {
            match lit_value(assign, l) {
                Some(true) => sat = true,
                None => open = true,
                Some(false) => {}
            }
        }
        if !sat && !open {
            return false;
        }
        all_sat &= sat;
    }
    if all_sat {
        return true;
    }
    let (v, q) = order[depth];
    let mut results = [false; 2];
    for (i, b) in [false, true].into_iter().enumerate() {
        assign.insert(v.0, b);
        results[i] = eval_rec(order, depth + 1, clauses, assign);
        assign.remove(&v.0);
        let decided = match q {
            Quantifier::Existential => results[i],
            Quantifier::Universal => !results[i],
        };
        if decided {
            return results[i];
        }
    }
    results[1]
}

// ---------- resolution paths ----------

fn connector_ok(prefix: &Prefix, source: Var, l: Lit) -> bool {
    prefix.is_existential(l.var()) && prefix.block_of(source) < prefix.block_of(l.var())
}

/// Exhaustive depth-first enumeration of paths from `source` that never
/// revisit a (clause, last connector) state. Returns the shortest clause
/// sequence ending in a clause accepted by `goal`.
pub fn brute_force_path(
    prefix: &Prefix,
    clauses: &[Clause],
    source: Lit,
    goal: &dyn Fn(&Clause) -> bool,
) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    for (i, c) in clauses.iter().enumerate() {
        if c.contains(source) {
            let mut seen = HashSet::new();
            seen.insert((i, 0u32));
            let mut seq = vec![i];
            dfs(prefix, clauses, source.var(), goal, &mut seq, None, &mut seen, &mut best);
        }
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    prefix: &Prefix,
    clauses: &[Clause],
    source: Var,
    goal: &dyn Fn(&Clause) -> bool,
    seq: &mut Vec<usize>,
    last: Option<Var>,
    seen: &mut HashSet<(usize, u32)>,
    best: &mut Option<Vec<usize>>,
) {
    let cur = *seq.last().unwrap();
    if goal(&clauses[cur]) && best.as_ref().is_none_or(|b| seq.len() < b.len()) {
        *best = Some(seq.clone());
    }
    for &l in clauses[cur].iter() {
        if !connector_ok(prefix, source, l) || Some(l.var()) == last {
            continue;
        }
        for (j, d) in clauses.iter().enumerate() {
            if d.contains(-l) && seen.insert((j, l.var().0)) {
                seq.push(j);
                dfs(prefix, clauses, source, goal, seq, Some(l.var()), seen, best);
                seq.pop();
                seen.remove(&(j, l.var().0));
            }
        }
    }
}

/// Literals occurring in clauses reachable from `source`, by fixpoint over
/// (clause, last connector) states.
pub fn reachable_literals(prefix: &Prefix, clauses: &[Clause], source: Lit) -> BTreeSet<Lit> {
    let mut states: BTreeSet<(usize, Option<Var>)> = BTreeSet::new();
    for (i, c) in clauses.iter().enumerate() {
        if c.contains(source) {
            states.insert((i, None));
        }
    }
    loop {
        let mut next = states.clone();
        for &(i, last) in &states {
            for &l in clauses[i].iter() {
                if !connector_ok(prefix, source.var(), l) || Some(l.var()) == last {
                    continue;
                }
                for (j, d) in clauses.iter().enumerate() {
                    if d.contains(-l) {
                        next.insert((j, Some(l.var())));
                    }
                }
            }
        }
        if next.len() == states.len() {
            break;
        }
        states = next;
    }
    states.iter().flat_map(|&(i, _)| clauses[i].iter().copied()).collect()
}

pub fn drrs_depends(prefix: &Prefix, clauses: &[Clause], e: Var, u: Var) -> bool {
    let pos = reachable_literals(prefix, clauses, u.positive());
    let neg = reachable_literals(prefix, clauses, u.negative());
    (pos.contains(&e.positive()) && neg.contains(&e.negative()))
        || (pos.contains(&e.negative()) && neg.contains(&e.positive()))
}

// ---------- naive QRAT replay ----------

#[derive(Debug, Clone)]
pub struct NaiveState {
    pub prefix: BTreeMap<u32, (Quantifier, usize)>,
    pub matrix: Vec<Vec<i32>>,
}

fn sorted(mut c: Vec<i32>) -> Vec<i32> {
    c.sort_by_key(|&l| (l.unsigned_abs(), l < 0));
    c.dedup();
    c
}

impl NaiveState {
    pub fn new(f: &Qbf) -> NaiveState {
        let mut prefix = BTreeMap::new();
        for (i, b) in f.prefix.blocks().iter().enumerate() {
            for v in &b.vars {
                prefix.insert(v.0, (b.quantifier, i));
            }
        }
        NaiveState { prefix, matrix: f.clauses.iter().map(|c| sorted(dimacs(c))).collect() }
    }

    fn level(&self, l: i32) -> usize {
        self.prefix[&l.unsigned_abs()].1
    }

    fn outer_resolvent_at(&self, others: &[Vec<i32>], c: &[i32], pivot: i32) -> bool {
        for d in others.iter().filter(|d| d.contains(&-pivot)) {
            let mut r: Vec<i32> = c.iter().copied().filter(|&l| l != pivot).collect();
            r.extend(d.iter().copied().filter(|&l| l != -pivot && self.level(l) <= self.level(pivot)));
            if !naive_at(others, &sorted(r)) {
                return false;
            }
        }
        true
    }

    fn eur(&self, c: &[i32], u: i32) -> bool {
        let mut prefix = Prefix::new();
        let mut by_block: BTreeMap<usize, (Quantifier, Vec<Var>)> = BTreeMap::new();
        for (&v, &(q, b)) in &self.prefix {
            by_block.entry(b).or_insert((q, Vec::new())).1.push(Var(v));
        }
        for (_, (q, vs)) in by_block {
            prefix.push(q, &vs).unwrap();
        }
        let clauses: Vec<Clause> = self.matrix.iter().map(|c| Clause::from_dimacs(c)).collect();
        let uv = Var(u.unsigned_abs());
        c.iter().all(|&l| {
            let v = Var(l.unsigned_abs());
            !(prefix.is_existential(v) && prefix.block_of(uv) < prefix.block_of(v))
                || !drrs_depends(&prefix, &clauses, v, uv)
        })
    }

    /// Applies a step; `Err` describes why it is not justified.
    pub fn apply(&mut self, step: &QratStep) -> Result<(), String> {
        match step {
            QratStep::Declare { var, anchor } => {
                if var.0 == 0 || self.prefix.contains_key(&var.0) {
                    return Err("not fresh".into());
                }
                match self.prefix.get(&anchor.0) {
                    Some(&(Quantifier::Existential, b)) => {
                        self.prefix.insert(var.0, (Quantifier::Existential, b));
                        Ok(())
                    }
                    _ => Err("bad anchor".into()),
                }
            }
            QratStep::Add(lits) => {
                let c: Vec<i32> = lits.iter().map(|l| l.to_dimacs()).collect();
                if c.iter().any(|l| !self.prefix.contains_key(&l.unsigned_abs())) {
                    return Err("undeclared".into());
                }
                let canon = sorted(c.clone());
                let ok = naive_at(&self.matrix, &canon)
                    || c.first().is_some_and(|&p| {
                        self.prefix[&p.unsigned_abs()].0 == Quantifier::Existential
                            && self.outer_resolvent_at(&self.matrix, &canon, p)
                    });
                if !ok {
                    return Err("neither AT nor QRAT".into());
                }
                self.matrix.push(canon);
                Ok(())
            }
            QratStep::Delete(lits) => {
                let c = sorted(lits.iter().map(|l| l.to_dimacs()).collect());
                if let Some(i) = self.matrix.iter().position(|d| *d == c) {
                    self.matrix.remove(i);
                }
                Ok(())
            }
            QratStep::DropUniv { lit, rest } => {
                let u = lit.to_dimacs();
                if self.prefix.get(&u.unsigned_abs()).map(|p| p.0) != Some(Quantifier::Universal) {
                    return Err("not universal".into());
                }
                let mut full: Vec<i32> = rest.iter().map(|l| l.to_dimacs()).collect();
                full.push(u);
                let full = sorted(full);
                let i = self.matrix.iter().position(|d| *d == full).ok_or("absent")?;
                let mut others = self.matrix.clone();
                others.remove(i);
                if !(self.outer_resolvent_at(&others, &full, u) || self.eur(&full, u)) {
                    return Err("not droppable".into());
                }
                self.matrix.remove(i);
                self.matrix.push(full.into_iter().filter(|&l| l != u).collect());
                Ok(())
            }
        }
    }
}

/// `Ok(refuted)` if every step is justified, else the 1-based failing step.
pub fn naive_check_qrat(f: &Qbf, p: &QratProof) -> Result<bool, usize> {
    let mut s = NaiveState::new(f);
    for (i, step) in p.steps.iter().enumerate() {
        s.apply(step).map_err(|_| i + 1)?;
    }
    Ok(p.is_refutation())
}

// ---------- naive expansion re-derivation ----------

/// An annotated literal as (signed base, sorted signed annotation).
pub type NLit = (i32, Vec<i32>);

fn nclause(mut c: Vec<NLit>) -> Vec<NLit> {
    c.sort();
    c.dedup();
    c
}

fn left_universals(f: &Qbf, x: Var) -> Vec<Var> {
    f.prefix.universals().into_iter().filter(|&u| f.prefix.block_of(u) < f.prefix.block_of(x)).collect()
}

fn signed(v: Var, b: bool) -> i32 {
    if b {
        v.0 as i32
    } else {
        -(v.0 as i32)
    }
}

pub fn to_nclause(c: &qratsim::AClause) -> Vec<NLit> {
    nclause(
        c.iter()
            .map(|l| {
                let mut a: Vec<i32> = l.ann.iter().map(|(v, b)| signed(v, b)).collect();
                a.sort_by_key(|x| x.unsigned_abs());
                (l.lit.to_dimacs(), a)
            })
            .collect(),
    )
}

/// Re-derives every step from scratch. `Ok(true)` when the proof is a valid
/// refutation.
pub fn naive_check_expansion(f: &Qbf, p: &qratsim::ExpansionProof) -> Result<bool, usize> {
    use qratsim::StepKind;
    let mut derived: Vec<Vec<NLit>> = Vec::new();
    for (i, s) in p.steps.iter().enumerate() {
        let bad = Err(i + 1);
        let expected = match (&s.kind, p.calculus) {
            (StepKind::Axiom { clause, assignment }, cal) => {
                let Some(c) = f.clauses.get(*clause) else { return bad };
                let mut tau: BTreeMap<u32, bool> = BTreeMap::new();
                for l in c.iter().filter(|l| f.prefix.is_universal(l.var())) {
                    tau.insert(l.var().0, !l.is_positive());
                }
                match (assignment, cal) {
                    (None, qratsim::Calculus::IrCalc) => {}
                    (Some(full), qratsim::Calculus::ExpRes) => {
                        for u in f.prefix.universals() {
                            let Some(b) = full.get(u) else { return bad };
                            if let Some(&t) = tau.get(&u.0) {
                                if t != b {
                                    return bad;
                                }
                            }
                            tau.insert(u.0, b);
                        }
                        if full.len() != f.prefix.universals().len() {
                            return bad;
                        }
                    }
                    _ => return bad,
                }
                nclause(
                    c.iter()
                        .filter(|l| f.prefix.is_existential(l.var()))
                        .map(|l| {
                            let a = left_universals(f, l.var())
                                .into_iter()
                                .filter_map(|u| tau.get(&u.0).map(|&b| signed(u, b)))
                                .collect();
                            (l.to_dimacs(), a)
                        })
                        .collect(),
                )
            }
            (StepKind::Inst { parent, sigma }, qratsim::Calculus::IrCalc) => {
                if *parent >= i || sigma.iter().any(|(u, _)| !f.prefix.is_universal(u)) {
                    return bad;
                }
                nclause(
                    derived[*parent]
                        .iter()
                        .map(|(l, a)| {
                            let x = Var(l.unsigned_abs());
                            let mut m: BTreeMap<u32, bool> = sigma
                                .iter()
                                .filter(|&(u, _)| f.prefix.block_of(u) < f.prefix.block_of(x))
                                .map(|(u, b)| (u.0, b))
                                .collect();
                            for &s in a {
                                m.insert(s.unsigned_abs(), s > 0);
                            }
                            let mut out: Vec<i32> = m.into_iter().map(|(u, b)| signed(Var(u), b)).collect();
                            out.sort_by_key(|x| x.unsigned_abs());
                            (*l, out)
                        })
                        .collect(),
                )
            }
            (StepKind::Inst { .. }, _) => return bad,
            (StepKind::Res { left, right, pivot }, _) => {
                if *left >= i || *right >= i {
                    return bad;
                }
                let mut pa: Vec<i32> = pivot.ann.iter().map(|(v, b)| signed(v, b)).collect();
                pa.sort_by_key(|x| x.unsigned_abs());
                let pos = (pivot.lit.to_dimacs(), pa.clone());
                let neg = (-pivot.lit.to_dimacs(), pa);
                let (a, b) = (&derived[*left], &derived[*right]);
                if !a.contains(&pos) || !b.contains(&neg) {
                    return bad;
                }
                nclause(a.iter().filter(|&l| *l != pos).chain(b.iter().filter(|&l| *l != neg)).cloned().collect())
            }
        };
        let stated = to_nclause(&s.result);
        if stated != expected {
            return bad;
        }
        for (l, a) in &stated {
            let x = Var(l.unsigned_abs());
            if !f.prefix.is_existential(x) {
                return bad;
            }
            let left = left_universals(f, x);
            if a.iter().any(|s| !left.contains(&Var(s.unsigned_abs()))) {
                return bad;
            }
        }
        derived.push(stated);
    }
    Ok(derived.last().is_some_and(|c| c.is_empty()))
}

// ---------- random formulas ----------

pub mod random {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::Rng;

    /// A random closed prenex CNF without tautologies. Variables are
    /// `1..=universals+existentials`, shuffled into alternating groups.
    pub fn qbf<R: Rng>(
        rng: &mut R,
        universals: usize,
        existentials: usize,
        clauses: usize,
        widths: std::ops::RangeInclusive<usize>,
    ) -> Qbf {
        let n = universals + existentials;
        let mut kinds: Vec<Quantifier> = std::iter::repeat_n(Quantifier::Universal, universals)
            .chain(std::iter::repeat_n(Quantifier::Existential, existentials))
            .collect();
        kinds.shuffle(rng);
        let mut prefix = Prefix::new();
        for (i, q) in kinds.iter().enumerate() {
            prefix.push(*q, &[Var(i as u32 + 1)]).unwrap();
        }
        let mut cls = Vec::new();
        while cls.len() < clauses {
            let w = rng.gen_range(*widths.start().min(&n)..=*widths.end().min(&n));
            let mut vars: Vec<u32> = (1..=n as u32).collect();
            vars.shuffle(rng);
            let c = Clause::from_dimacs(
                &vars[..w].iter().map(|&v| if rng.gen_bool(0.5) { v as i32 } else { -(v as i32) }).collect::<Vec<_>>(),
            );
            cls.push(c);
        }
        Qbf::new(prefix, cls).unwrap()
    }

    /// A random CNF over `1..=nvars` (may contain repeated clauses).
    pub fn cnf<R: Rng>(rng: &mut R, nvars: u32, clauses: usize, width: usize) -> Vec<Clause> {
        (0..clauses).map(|_| clause(rng, nvars, width)).collect()
    }

    pub fn clause<R: Rng>(rng: &mut R, nvars: u32, width: usize) -> Clause {
        let w = rng.gen_range(1..=width.min(nvars as usize));
        let mut vars: Vec<u32> = (1..=nvars).collect();
        vars.shuffle(rng);
        Clause::from_dimacs(
            &vars[..w].iter().map(|&v| if rng.gen_bool(0.5) { v as i32 } else { -(v as i32) }).collect::<Vec<_>>(),
        )
    }
}

// ---------- mutations ----------

pub mod mutate {
    use rand::Rng;

    /// One random single-token mutation of a line-oriented proof: flip the
    /// sign of a numeric token, swap two lines, or drop a line. `skip`
    /// reports header lines that must not be touched.
    pub fn text<R: Rng>(rng: &mut R, text: &str, skip: &dyn Fn(&str) -> bool) -> Option<String> {
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        let body: Vec<usize> = (0..lines.len()).filter(|&i| !skip(&lines[i])).collect();
        if body.is_empty() {
            return None;
        }
        match rng.gen_range(0..3) {
            0 => {
                let i = body[rng.gen_range(0..body.len())];
                let mut toks: Vec<String> = lines[i].split(' ').map(str::to_string).collect();
                let numeric: Vec<usize> = (0..toks.len())
                    .filter(|&k| {
                        toks[k].trim_start_matches('-').chars().next().is_some_and(|c| c.is_ascii_digit())
                            && toks[k] != "0"
                    })
                    .collect();
                if numeric.is_empty() {
                    return None;
                }
                let k = numeric[rng.gen_range(0..numeric.len())];
                toks[k] = match toks[k].strip_prefix('-') {
                    Some(rest) => rest.to_string(),
                    None => format!("-{}", toks[k]),
                };
                lines[i] = toks.join(" ");
            }
            1 => {
                if body.len() < 2 {
                    return None;
                }
                let a = body[rng.gen_range(0..body.len())];
                let b = body[rng.gen_range(0..body.len())];
                if a == b || lines[a] == lines[b] {
                    return None;
                }
                lines.swap(a, b);
            }
            _ => {
                let i = body[rng.gen_range(0..body.len())];
                lines.remove(i);
            }
        }
        let mut out = lines.join("\n");
        out.push('\n');
        Some(out)
    }
}
