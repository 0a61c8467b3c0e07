//! Tseitin conversion of formula trees to CNF for SAT queries.
//!
//! One auxiliary variable per internal node, allocated in post-order above
//! the original variable range. `cnf /\ root` is satisfiable iff the
//! formula is, and every model of `cnf /\ root` restricted to the original
//! variables satisfies the formula.

use std::ops::Range;

use crate::ast::Formula;
use crate::cnf::{Clause, Cnf};
use crate::lit::{Literal, Var};

#[derive(Debug, Clone)]
pub struct TseitinCnf {
    pub cnf: Cnf,
    pub root: Literal,
    /// Auxiliary variables, `first..next` (empty for a bare atom).
    pub aux_range: Range<Var>,
}

impl TseitinCnf {
    /// The CNF with a unit clause pinning the root, ready for solving.
    pub fn rooted_cnf(&self) -> Cnf {
        let mut cnf = self.cnf.clone();
        cnf.push(Clause::new([self.root]));
        cnf
    }
}

/// Converts with auxiliaries starting right above the formula's variables.
pub fn tseitin(f: &Formula) -> TseitinCnf {
    tseitin_above(f, f.max_var().unwrap_or(0) + 1)
}

/// Converts with auxiliaries starting at `first_aux`, which must exceed
/// every variable of `f` (callers pass the instance-wide maximum so that
/// auxiliaries never collide with assignment variables).
pub fn tseitin_above(f: &Formula, first_aux: Var) -> TseitinCnf {
    assert!(f.max_var().unwrap_or(0) < first_aux, "first_aux must exceed the formula's variables");
    let mut clauses = Vec::new();
    let mut next = first_aux;
    let root = encode(f, &mut next, &mut clauses);
    let mut cnf = Cnf::new(next - 1);
    cnf.grow_vars(first_aux - 1);
    for c in clauses {
        cnf.push(c);
    }
    TseitinCnf { cnf, root, aux_range: first_aux..next }
}

fn encode(f: &Formula, next: &mut Var, clauses: &mut Vec<Clause>) -> Literal {
    match f {
        Formula::Atom(v) => Literal::positive(*v),
        Formula::Const(b) => {
            let aux = fresh(next);
            let lit = Literal::new(aux, *b);
            clauses.push(Clause::new([lit]));
            Literal::positive(aux)
        }
        Formula::Neg(g) => {
            let child = encode(g, next, clauses);
            let aux = Literal::positive(fresh(next));
            clauses.push(Clause::new([aux.negated(), child.negated()]));
            clauses.push(Clause::new([aux, child]));
            aux
        }
        Formula::And(l, r) => {
            let a = encode(l, next, clauses);
            let b = encode(r, next, clauses);
            let aux = Literal::positive(fresh(next));
            clauses.push(Clause::new([aux.negated(), a]));
            clauses.push(Clause::new([aux.negated(), b]));
            clauses.push(Clause::new([aux, a.negated(), b.negated()]));
            aux
        }
        Formula::Or(l, r) => {
            let a = encode(l, next, clauses);
            let b = encode(r, next, clauses);
            let aux = Literal::positive(fresh(next));
            clauses.push(Clause::new([aux.negated(), a, b]));
            clauses.push(Clause::new([aux, a.negated()]));
            clauses.push(Clause::new([aux, b.negated()]));
            aux
        }
    }
}

fn fresh(next: &mut Var) -> Var {
    let v = *next;
    *next += 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::enumerate_models;

    #[test]
    fn atom_is_the_identity_case() {
        let t = tseitin(&Formula::atom(3));
        assert!(t.cnf.is_empty());
        assert_eq!(t.root, Literal::positive(3));
        assert!(t.aux_range.is_empty());
    }

    #[test]
    fn conjunction_models_project_to_original_vars() {
        let t = tseitin(&Formula::and(Formula::atom(1), Formula::atom(2)));
        assert_eq!(t.aux_range, 3..4);
        let rooted = t.rooted_cnf();
        let vars: Vec<Var> = (1..=rooted.num_vars()).collect();
        let models = enumerate_models(&rooted, &vars).unwrap();
        assert_eq!(models.len(), 1);
        assert_eq!(models[0].value(1), Some(true));
        assert_eq!(models[0].value(2), Some(true));
    }

    #[test]
    fn contradiction_is_unsatisfiable() {
        let t = tseitin(&Formula::and(Formula::atom(1), Formula::neg(Formula::atom(1))));
        let rooted = t.rooted_cnf();
        let vars: Vec<Var> = (1..=rooted.num_vars()).collect();
        assert!(enumerate_models(&rooted, &vars).unwrap().is_empty());
    }

    /// Equisatisfiability and model projection over a mix of shapes: the
    /// projections of the rooted CNF's models are exactly the satisfying
    /// assignments of the formula.
    #[test]
    fn models_match_truth_table() {
        use crate::assign::Assignment;
        let samples = [
            Formula::or(Formula::atom(1), Formula::atom(2)),
            Formula::neg(Formula::or(Formula::atom(1), Formula::neg(Formula::atom(2)))),
            Formula::and(
                Formula::or(Formula::atom(1), Formula::neg(Formula::atom(3))),
                Formula::neg(Formula::and(Formula::atom(2), Formula::atom(3))),
            ),
            Formula::neg(Formula::neg(Formula::atom(2))),
        ];
        for f in &samples {
            let max = f.max_var().unwrap().max(3);
            let t = tseitin_above(f, max + 1);
            let rooted = t.rooted_cnf();
            let all_vars: Vec<Var> = (1..=rooted.num_vars()).collect();
            let mut projected: Vec<Vec<(Var, bool)>> = enumerate_models(&rooted, &all_vars)
                .unwrap()
                .iter()
                .map(|m| (1..=max).map(|v| (v, m.value(v).unwrap())).collect())
                .collect();
            projected.sort();
            projected.dedup();

            let mut expected = Vec::new();
            for bits in 0..(1u32 << max) {
                let mut a = Assignment::new();
                for v in 1..=max {
                    a.assign(v, bits & (1 << (v - 1)) != 0);
                }
                if f.eval(&a).unwrap() {
                    expected.push((1..=max).map(|v| (v, a.value(v).unwrap())).collect::<Vec<_>>());
                }
            }
            expected.sort();
            assert_eq!(projected, expected, "projection mismatch for {f}");
        }
    }

    #[test]
    fn aux_floor_is_respected() {
        let f = Formula::and(Formula::atom(1), Formula::atom(2));
        let t = tseitin_above(&f, 10);
        assert_eq!(t.aux_range, 10..11);
        assert_eq!(t.cnf.num_vars(), 10);
    }
}
