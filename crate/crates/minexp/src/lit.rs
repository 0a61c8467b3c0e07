use std::cmp::Ordering;
use std::fmt;

/// 1-based propositional variable index.
pub type Var = u32;

/// A literal: a variable together with a polarity.
///
/// Ordered by `(var, polarity)` with the positive literal of a variable
/// sorting before the negative one; this order is what "lexicographically
/// least literal set" means throughout the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    var: Var,
    positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Self {
        assert!(var >= 1, "variable indices are 1-based");
        Literal { var, positive }
    }

    pub fn positive(var: Var) -> Self {
        Literal::new(var, true)
    }

    pub fn negative(var: Var) -> Self {
        Literal::new(var, false)
    }

    /// Builds a literal from its signed DIMACS encoding; `None` for 0 or
    /// out-of-range magnitudes.
    pub fn from_dimacs(code: i64) -> Option<Self> {
        if code == 0 || code.unsigned_abs() > Var::MAX as u64 {
            return None;
        }
        Some(Literal { var: code.unsigned_abs() as Var, positive: code > 0 })
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Literal { var: self.var, positive: !self.positive }
    }

    /// Signed DIMACS encoding: `v` for positive, `-v` for negative.
    pub fn to_dimacs(self) -> i64 {
        if self.positive { self.var as i64 } else { -(self.var as i64) }
    }

    /// Whether assigning `value` to the literal's variable satisfies it.
    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.var, !self.positive).cmp(&(other.var, !other.positive))
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_negation_is_identity() {
        let lit = Literal::negative(7);
        assert_eq!(lit.negated().negated(), lit);
    }

    #[test]
    fn ordering_is_var_then_polarity() {
        let mut lits = vec![
            Literal::negative(2),
            Literal::positive(2),
            Literal::negative(1),
            Literal::positive(1),
        ];
        lits.sort();
        assert_eq!(
            lits,
            vec![
                Literal::positive(1),
                Literal::negative(1),
                Literal::positive(2),
                Literal::negative(2),
            ]
        );
    }

    #[test]
    fn dimacs_round_trip() {
        for code in [-9, -1, 1, 42] {
            assert_eq!(Literal::from_dimacs(code).unwrap().to_dimacs(), code);
        }
        assert!(Literal::from_dimacs(0).is_none());
    }
}
