use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::assign::Assignment;
use crate::lit::Var;

/// A propositional formula tree: atoms, negation, and strictly binary
/// conjunction/disjunction.
///
/// `Const` is a distinguished verum/falsum node of size 0. The connective
/// grammar has no constants, so `Const` never comes out of a parser; it only
/// appears as the rendering of an empty explanation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Atom(Var),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} is unassigned")]
    Unassigned(Var),
}

impl Formula {
    pub fn atom(var: Var) -> Self {
        assert!(var >= 1, "variable indices are 1-based");
        Formula::Atom(var)
    }

    pub fn neg(f: Formula) -> Self {
        Formula::Neg(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn verum() -> Self {
        Formula::Const(true)
    }

    pub fn falsum() -> Self {
        Formula::Const(false)
    }

    /// Left-associative conjunction of a nonempty sequence.
    pub fn conjoin_all<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Left-associative disjunction of a nonempty sequence.
    pub fn disjoin_all<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// The size measure: occurrences of proposition symbols, binary
    /// connectives and negations. `Const` counts 0.
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) => 0,
            Formula::Atom(_) => 1,
            Formula::Neg(f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Number of atom occurrences (with multiplicity).
    pub fn atom_occurrences(&self) -> usize {
        match self {
            Formula::Const(_) => 0,
            Formula::Atom(_) => 1,
            Formula::Neg(f) => f.atom_occurrences(),
            Formula::And(l, r) | Formula::Or(l, r) => l.atom_occurrences() + r.atom_occurrences(),
        }
    }

    /// The set of variables occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Const(_) => {}
            Formula::Atom(v) => {
                out.insert(*v);
            }
            Formula::Neg(f) => f.collect_atoms(out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn max_var(&self) -> Option<Var> {
        self.atoms().into_iter().next_back()
    }

    /// Standard semantics; every atom of the formula must be assigned.
    pub fn eval(&self, assignment: &Assignment) -> Result<bool, EvalError> {
        match self {
            Formula::Const(b) => Ok(*b),
            Formula::Atom(v) => assignment.value(*v).ok_or(EvalError::Unassigned(*v)),
            Formula::Neg(f) => Ok(!f.eval(assignment)?),
            Formula::And(l, r) => Ok(l.eval(assignment)? && r.eval(assignment)?),
            Formula::Or(l, r) => Ok(l.eval(assignment)? || r.eval(assignment)?),
        }
    }

    /// Negation normal form of the negation: swaps and/or, pushes negations
    /// onto atoms. For every total assignment, `dualize(f)` evaluates to the
    /// opposite of `f`; a DNF input yields a CNF output.
    pub fn dualize(&self) -> Formula {
        self.nnf(false)
    }

    fn nnf(&self, polarity: bool) -> Formula {
        match (self, polarity) {
            (Formula::Const(b), true) => Formula::Const(*b),
            (Formula::Const(b), false) => Formula::Const(!*b),
            (Formula::Atom(v), true) => Formula::Atom(*v),
            (Formula::Atom(v), false) => Formula::neg(Formula::Atom(*v)),
            (Formula::Neg(f), pol) => f.nnf(!pol),
            (Formula::And(l, r), true) => Formula::and(l.nnf(true), r.nnf(true)),
            (Formula::And(l, r), false) => Formula::or(l.nnf(false), r.nnf(false)),
            (Formula::Or(l, r), true) => Formula::or(l.nnf(true), r.nnf(true)),
            (Formula::Or(l, r), false) => Formula::and(l.nnf(false), r.nnf(false)),
        }
    }

    /// Renders in the text grammar with explicit parentheses on every binary
    /// node, using `p<idx>` atom names.
    pub fn to_text(&self) -> String {
        let names = VarNames::default();
        self.to_text_with(&names)
    }

    pub fn to_text_with(&self, names: &VarNames) -> String {
        let mut out = String::new();
        self.render(names, &mut out);
        out
    }

    fn render(&self, names: &VarNames, out: &mut String) {
        match self {
            Formula::Const(true) => out.push_str("true"),
            Formula::Const(false) => out.push_str("false"),
            Formula::Atom(v) => out.push_str(&names.name(*v)),
            Formula::Neg(f) => {
                out.push('~');
                if matches!(**f, Formula::Atom(_) | Formula::Const(_) | Formula::Neg(_)) {
                    f.render(names, out);
                } else {
                    out.push('(');
                    f.render(names, out);
                    out.push(')');
                }
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                let op = if matches!(self, Formula::And(..)) { " & " } else { " | " };
                out.push('(');
                l.render(names, out);
                out.push_str(op);
                r.render(names, out);
                out.push(')');
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Display names for variables; unlisted variables print as `p<idx>`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarNames {
    names: BTreeMap<Var, String>,
}

impl VarNames {
    pub fn insert(&mut self, var: Var, name: impl Into<String>) {
        self.names.insert(var, name.into());
    }

    pub fn name(&self, var: Var) -> String {
        self.names.get(&var).cloned().unwrap_or_else(|| format!("p{var}"))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &str)> {
        self.names.iter().map(|(&v, n)| (v, n.as_str()))
    }
}
