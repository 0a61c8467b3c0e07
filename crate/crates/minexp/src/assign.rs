use std::collections::BTreeMap;
use std::fmt;

use crate::error::ParseError;
use crate::lit::{Literal, Var};

/// A three-valued assignment: each variable is true, false, or unknown.
///
/// The positive/negative literal set view (one literal per assigned
/// variable) is what the explanation problems call `L`; a total assignment
/// over some variable range is the maximal-conjunction case.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    /// Reads whitespace-separated signed integers: `i` sets variable `i`
    /// true, `-i` sets it false. Unmentioned variables stay unknown.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut assignment = Assignment::new();
        for (line_idx, line) in text.lines().enumerate() {
            let line_no = line_idx + 1;
            for token in line.split_whitespace() {
                let code: i64 = token
                    .parse()
                    .map_err(|_| ParseError::new(line_no, format!("expected a signed integer, got `{token}`")))?;
                if code == 0 {
                    return Err(ParseError::new(line_no, "literal 0 is not allowed in assignments"));
                }
                let lit = Literal::from_dimacs(code)
                    .ok_or_else(|| ParseError::new(line_no, format!("literal {code} out of range")))?;
                if assignment.value(lit.var()) == Some(!lit.is_positive()) {
                    return Err(ParseError::new(
                        line_no,
                        format!("inconsistent assignment: both {} and {} given", lit.var(), -(lit.var() as i64)),
                    ));
                }
                assignment.assign(lit.var(), lit.is_positive());
            }
        }
        Ok(assignment)
    }

    /// Builds an assignment from literals; errors on a complementary pair.
    pub fn from_literals<I: IntoIterator<Item = Literal>>(lits: I) -> Result<Self, Var> {
        let mut assignment = Assignment::new();
        for lit in lits {
            if assignment.value(lit.var()) == Some(!lit.is_positive()) {
                return Err(lit.var());
            }
            assignment.assign(lit.var(), lit.is_positive());
        }
        Ok(assignment)
    }

    /// Total all-true assignment over `1..=num_vars`.
    pub fn all_true(num_vars: Var) -> Self {
        let values = (1..=num_vars).map(|v| (v, true)).collect();
        Assignment { values }
    }

    pub fn assign(&mut self, var: Var, value: bool) {
        assert!(var >= 1, "variable indices are 1-based");
        self.values.insert(var, value);
    }

    pub fn unassign(&mut self, var: Var) {
        self.values.remove(&var);
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.values.get(&var).copied()
    }

    /// Three-valued literal evaluation: `None` while the variable is unknown.
    pub fn literal_value(&self, lit: Literal) -> Option<bool> {
        self.value(lit.var()).map(|v| lit.satisfied_by(v))
    }

    pub fn contains_literal(&self, lit: Literal) -> bool {
        self.literal_value(lit) == Some(true)
    }

    /// Number of assigned variables.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The literal-set view, sorted by variable.
    pub fn literals(&self) -> Vec<Literal> {
        self.values.iter().map(|(&v, &b)| Literal::new(v, b)).collect()
    }

    pub fn assigned_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.values.keys().copied()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.values.keys().next_back().copied()
    }

    pub fn is_total_over<I: IntoIterator<Item = Var>>(&self, vars: I) -> bool {
        vars.into_iter().all(|v| self.values.contains_key(&v))
    }

    /// Signed-integer rendering, the same format `parse` accepts.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.literals().iter().map(|l| l.to_dimacs().to_string()).collect();
        parts.join(" ")
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_text())
    }
}
