use std::fmt;

use crate::assign::Assignment;
use crate::lit::{Literal, Var};

/// A disjunction of literals, stored sorted and without duplicates.
/// Complementary pairs are kept: such a clause is tautological, which is
/// detected rather than forbidden.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    pub fn new<I: IntoIterator<Item = Literal>>(lits: I) -> Self {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        lits.sort();
        lits.dedup();
        Clause { lits }
    }

    pub fn from_dimacs(codes: &[i64]) -> Option<Self> {
        let lits: Option<Vec<Literal>> = codes.iter().map(|&c| Literal::from_dimacs(c)).collect();
        lits.map(Clause::new)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    /// True when the clause contains both polarities of some variable.
    pub fn is_tautological(&self) -> bool {
        self.lits.windows(2).any(|w| w[0].var() == w[1].var())
    }

    pub fn max_var(&self) -> Option<Var> {
        self.lits.last().map(|l| l.var())
    }

    /// Two-valued truth under a total-enough assignment; `None` if some
    /// literal is still unknown and no literal is already satisfied.
    pub fn eval(&self, assignment: &Assignment) -> Option<bool> {
        let mut open = false;
        for &lit in &self.lits {
            match assignment.literal_value(lit) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => open = true,
            }
        }
        if open { None } else { Some(false) }
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lits.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// A CNF formula: a declared variable count plus an ordered list of clauses.
/// Clause order is preserved from the input, so clause ids (positions) are
/// stable.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Cnf {
    num_vars: Var,
    clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(num_vars: Var) -> Self {
        Cnf { num_vars, clauses: Vec::new() }
    }

    pub fn push(&mut self, clause: Clause) {
        if let Some(max) = clause.max_var() {
            assert!(max <= self.num_vars, "literal variable {max} exceeds declared {}", self.num_vars);
        }
        self.clauses.push(clause);
    }

    pub fn num_vars(&self) -> Var {
        self.num_vars
    }

    /// Raises the declared variable count; never shrinks it.
    pub fn grow_vars(&mut self, num_vars: Var) {
        self.num_vars = self.num_vars.max(num_vars);
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        1..=self.num_vars
    }

    /// True under a total-enough assignment iff every clause is satisfied.
    pub fn eval(&self, assignment: &Assignment) -> Option<bool> {
        let mut all = true;
        for clause in &self.clauses {
            match clause.eval(assignment) {
                Some(true) => {}
                Some(false) => return Some(false),
                None => all = false,
            }
        }
        if all { Some(true) } else { None }
    }
}

impl fmt::Debug for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cnf(vars={}, clauses={:?})", self.num_vars, self.clauses)
    }
}

/// Result of partially evaluating a clause set against a literal set `L`.
///
/// `removed` holds ids of clauses satisfied by `L` or tautological;
/// `falsified` holds ids of clauses all of whose literals `L` falsifies;
/// `simplified` holds the remaining clauses with falsified literals deleted,
/// with `surviving` mapping its positions back to original clause ids.
#[derive(Debug, Clone)]
pub struct PartialEval {
    pub simplified: Cnf,
    pub surviving: Vec<usize>,
    pub removed: Vec<usize>,
    pub falsified: Vec<usize>,
}

/// Partially evaluates `cnf` with respect to the literal set of `assignment`.
pub fn partial_eval(cnf: &Cnf, assignment: &Assignment) -> PartialEval {
    let mut simplified = Cnf::new(cnf.num_vars());
    let mut surviving = Vec::new();
    let mut removed = Vec::new();
    let mut falsified = Vec::new();

    for (id, clause) in cnf.clauses().iter().enumerate() {
        if clause.is_tautological() {
            removed.push(id);
            continue;
        }
        let mut satisfied = false;
        let mut open = Vec::new();
        for &lit in clause.literals() {
            match assignment.literal_value(lit) {
                Some(true) => {
                    satisfied = true;
                    break;
                }
                Some(false) => {}
                None => open.push(lit),
            }
        }
        if satisfied {
            removed.push(id);
        } else if open.is_empty() {
            falsified.push(id);
        } else {
            simplified.push(Clause::new(open));
            surviving.push(id);
        }
    }

    PartialEval { simplified, surviving, removed, falsified }
}

/// Whether `cnf` restricted by the literal set is valid, i.e. partial
/// evaluation leaves no surviving and no falsified clause. Polynomial in the
/// size of `cnf`.
pub fn valid_after(cnf: &Cnf, assignment: &Assignment) -> bool {
    let pe = partial_eval(cnf, assignment);
    pe.simplified.is_empty() && pe.falsified.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(code: i64) -> Literal {
        Literal::from_dimacs(code).unwrap()
    }

    fn clause(codes: &[i64]) -> Clause {
        Clause::from_dimacs(codes).unwrap()
    }

    #[test]
    fn clause_dedups_but_keeps_complementary() {
        let c = clause(&[1, 1, -1]);
        assert_eq!(c.len(), 2);
        assert!(c.is_tautological());
        assert!(!clause(&[1, 2]).is_tautological());
    }

    #[test]
    fn partial_eval_removes_satisfied_clause() {
        // S = {{p, q}}, L = {p -> true}
        let mut cnf = Cnf::new(2);
        cnf.push(clause(&[1, 2]));
        let mut a = Assignment::new();
        a.assign(1, true);
        let pe = partial_eval(&cnf, &a);
        assert!(pe.simplified.is_empty());
        assert_eq!(pe.removed, vec![0]);
        assert!(pe.falsified.is_empty());
    }

    #[test]
    fn partial_eval_reports_falsified_clause() {
        // S = {{p}}, L = {p -> false}
        let mut cnf = Cnf::new(1);
        cnf.push(clause(&[1]));
        let mut a = Assignment::new();
        a.assign(1, false);
        let pe = partial_eval(&cnf, &a);
        assert_eq!(pe.falsified, vec![0]);
        assert!(!valid_after(&cnf, &a));
    }

    #[test]
    fn partial_eval_removes_tautology_and_satisfied() {
        // S = {{p, ~p}, {q, r}}, L = {q -> true}: both clauses removed.
        let mut cnf = Cnf::new(3);
        cnf.push(clause(&[1, -1]));
        cnf.push(clause(&[2, 3]));
        let mut a = Assignment::new();
        a.assign(2, true);
        let pe = partial_eval(&cnf, &a);
        assert_eq!(pe.removed, vec![0, 1]);
        assert!(valid_after(&cnf, &a));
    }

    #[test]
    fn open_literals_block_validity() {
        let mut cnf = Cnf::new(2);
        cnf.push(clause(&[1, 2]));
        assert!(!valid_after(&cnf, &Assignment::new()));
    }

    #[test]
    fn falsified_literals_are_deleted_from_survivors() {
        let mut cnf = Cnf::new(3);
        cnf.push(clause(&[1, 2, 3]));
        let mut a = Assignment::new();
        a.assign(1, false);
        let pe = partial_eval(&cnf, &a);
        assert_eq!(pe.surviving, vec![0]);
        assert_eq!(pe.simplified.clauses()[0], clause(&[2, 3]));
    }

    #[test]
    fn empty_formula_is_vacuously_valid() {
        let cnf = Cnf::new(0);
        assert!(valid_after(&cnf, &Assignment::new()));
    }

    /// Extending the literal set can only move clauses out of `surviving`,
    /// never back into it.
    #[test]
    fn partial_eval_is_monotone() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let nv = rng.random_range(1..=6u32);
            let mut cnf = Cnf::new(nv);
            for _ in 0..rng.random_range(1..=10) {
                let len = rng.random_range(1..=3);
                let lits: Vec<Literal> = (0..len)
                    .map(|_| Literal::new(rng.random_range(1..=nv), rng.random_bool(0.5)))
                    .collect();
                cnf.push(Clause::new(lits));
            }
            let mut small = Assignment::new();
            let mut big = Assignment::new();
            for v in 1..=nv {
                let val = rng.random_bool(0.5);
                if rng.random_bool(0.5) {
                    small.assign(v, val);
                    big.assign(v, val);
                } else if rng.random_bool(0.5) {
                    big.assign(v, val);
                }
            }
            let pe_small = partial_eval(&cnf, &small);
            let pe_big = partial_eval(&cnf, &big);
            for id in &pe_big.surviving {
                assert!(
                    pe_small.surviving.contains(id),
                    "clause {id} survived the larger literal set but not the smaller"
                );
            }
        }
    }
}
