//! The De Morgan rendering of literal conjunctions.
//!
//! For a consistent literal set `chi` with positive part P and negative part
//! N, the positive rendering is `(/\ P) & ~(\/ atoms of N)` and the negative
//! rendering is `~(/\ P) | (\/ atoms of N)`, empty parts omitted. Packing
//! all negative literals under a single negation is what makes these the
//! smallest formulas equivalent to `chi` / `~chi`.

use std::fmt;

use thiserror::Error;

use crate::ast::Formula;
use crate::lit::{Literal, Var};

/// The truth value being explained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Top,
    Bot,
}

impl Target {
    pub fn as_bool(self) -> bool {
        matches!(self, Target::Top)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Top => write!(f, "top"),
            Target::Bot => write!(f, "bot"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DmError {
    #[error("inconsistent literal set: variable {0} occurs with both polarities")]
    Inconsistent(Var),
}

/// A subconjunction of an assignment's literals together with its rendered
/// De Morgan form and size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    chi: Vec<Literal>,
    target: Target,
    rendered: Formula,
    size: usize,
}

impl Explanation {
    /// The literal set, sorted by `(var, polarity)`.
    pub fn chi(&self) -> &[Literal] {
        &self.chi
    }

    pub fn cardinality(&self) -> usize {
        self.chi.len()
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn rendered(&self) -> &Formula {
        &self.rendered
    }

    /// Size of the rendered formula: `2n - 1` when the single negation is
    /// absent, `2n` when present, 0 for the empty set.
    pub fn size(&self) -> usize {
        self.size
    }
}

/// Renders a consistent literal set in its De Morgan form for the given
/// target. The empty set renders as the distinguished verum (Top) or falsum
/// (Bot) constant of size 0.
pub fn dm_render(chi: &[Literal], target: Target) -> Result<Explanation, DmError> {
    let mut chi: Vec<Literal> = chi.to_vec();
    chi.sort();
    chi.dedup();
    if let Some(w) = chi.windows(2).find(|w| w[0].var() == w[1].var()) {
        return Err(DmError::Inconsistent(w[0].var()));
    }

    if chi.is_empty() {
        let rendered = Formula::Const(target.as_bool());
        return Ok(Explanation { chi, target, rendered, size: 0 });
    }

    let positives: Vec<Var> = chi.iter().filter(|l| l.is_positive()).map(|l| l.var()).collect();
    let negatives: Vec<Var> = chi.iter().filter(|l| !l.is_positive()).map(|l| l.var()).collect();

    let pos_conj = Formula::conjoin_all(positives.iter().map(|&v| Formula::atom(v)));
    let neg_disj = Formula::disjoin_all(negatives.iter().map(|&v| Formula::atom(v)));

    let rendered = match target {
        Target::Top => match (pos_conj, neg_disj) {
            (Some(p), Some(n)) => Formula::and(p, Formula::neg(n)),
            (Some(p), None) => p,
            (None, Some(n)) => Formula::neg(n),
            (None, None) => unreachable!("chi is nonempty"),
        },
        Target::Bot => match (pos_conj, neg_disj) {
            (Some(p), Some(n)) => Formula::or(Formula::neg(p), n),
            (Some(p), None) => Formula::neg(p),
            (None, Some(n)) => n,
            (None, None) => unreachable!("chi is nonempty"),
        },
    };
    let size = rendered.size();
    Ok(Explanation { chi, target, rendered, size })
}
