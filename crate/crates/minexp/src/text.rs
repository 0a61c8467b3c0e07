//! Parser for the formula text grammar.
//!
//! Atoms are `p<digits>` (a direct variable index) or bare identifiers,
//! which are interned to fresh indices in first-occurrence order above every
//! explicit index. `~` binds tighter than `&`, which binds tighter than `|`;
//! binary operators are left-associative and chains materialize as nested
//! binary nodes.

use crate::ast::{Formula, VarNames};
use crate::error::ParseError;
use crate::lit::Var;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Tilde,
    Amp,
    Pipe,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    line: usize,
    col: usize,
}

/// A parsed formula together with the display names of its variables.
#[derive(Debug, Clone)]
pub struct ParsedFormula {
    pub formula: Formula,
    pub names: VarNames,
}

pub fn parse_formula(text: &str) -> Result<ParsedFormula, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::new(1, "empty formula"));
    }

    // Identifiers of the form p<digits> refer to explicit variable indices;
    // everything else gets a fresh index above the largest explicit one.
    let mut max_explicit: Var = 0;
    for t in &tokens {
        if let Token::Ident(name) = &t.token {
            if let Some(idx) = explicit_index(name) {
                let idx = idx.map_err(|()| {
                    ParseError::new(t.line, format!("atom `{name}` is out of range (indices are 1-based)"))
                })?;
                max_explicit = max_explicit.max(idx);
            }
        }
    }

    let mut parser = Parser { tokens: &tokens, pos: 0, names: VarNames::default(), next_fresh: max_explicit + 1, interned: Vec::new() };
    let formula = parser.parse_or()?;
    if let Some(extra) = parser.peek() {
        return Err(ParseError::new(extra.line, format!("unexpected token at column {}", extra.col)));
    }
    Ok(ParsedFormula { formula, names: parser.names })
}

/// `Some(Ok(idx))` for `p<digits>` with a usable index, `Some(Err(()))` for
/// `p0` or an overflowing index, `None` for any other identifier.
fn explicit_index(name: &str) -> Option<Result<Var, ()>> {
    let digits = name.strip_prefix('p')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(match digits.parse::<Var>() {
        Ok(0) | Err(_) => Err(()),
        Ok(idx) => Ok(idx),
    })
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut tokens = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let bytes = line.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let col = i + 1;
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\r' => i += 1,
                '~' | '&' | '|' | '(' | ')' => {
                    let token = match c {
                        '~' => Token::Tilde,
                        '&' => Token::Amp,
                        '|' => Token::Pipe,
                        '(' => Token::LParen,
                        _ => Token::RParen,
                    };
                    tokens.push(Spanned { token, line: line_no, col });
                    i += 1;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < bytes.len() {
                        let b = bytes[i] as char;
                        if b.is_ascii_alphanumeric() || b == '_' {
                            i += 1;
                        } else {
                            break;
                        }
                    }
                    tokens.push(Spanned { token: Token::Ident(line[start..i].to_string()), line: line_no, col });
                }
                other => {
                    return Err(ParseError::new(line_no, format!("stray character `{other}` at column {col}")));
                }
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Spanned],
    pos: usize,
    names: VarNames,
    next_fresh: Var,
    interned: Vec<(String, Var)>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Spanned> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn last_line(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.line)
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_and()?;
        while matches!(self.peek().map(|t| &t.token), Some(Token::Pipe)) {
            self.bump();
            let rhs = self.parse_and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_unary()?;
        while matches!(self.peek().map(|t| &t.token), Some(Token::Amp)) {
            self.bump();
            let rhs = self.parse_unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        if matches!(self.peek().map(|t| &t.token), Some(Token::Tilde)) {
            self.bump();
            return Ok(Formula::neg(self.parse_unary()?));
        }
        self.parse_primary()
    }

    fn parse_primary(&mut self) -> Result<Formula, ParseError> {
        let last_line = self.last_line();
        let t = match self.bump() {
            Some(t) => t.clone(),
            None => return Err(ParseError::new(last_line, "unexpected end of formula")),
        };
        match t.token {
            Token::LParen => {
                let inner = self.parse_or()?;
                match self.bump().map(|t| t.token.clone()) {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(ParseError::new(t.line, format!("unbalanced parenthesis opened at column {}", t.col))),
                }
            }
            Token::Ident(name) => Ok(Formula::atom(self.resolve(&name, t.line)?)),
            _ => Err(ParseError::new(t.line, format!("unexpected token at column {}", t.col))),
        }
    }

    fn resolve(&mut self, name: &str, line: usize) -> Result<Var, ParseError> {
        if let Some(idx) = explicit_index(name) {
            let idx = idx.map_err(|()| ParseError::new(line, format!("atom `{name}` is out of range")))?;
            self.names.insert(idx, name);
            return Ok(idx);
        }
        if let Some(&(_, var)) = self.interned.iter().find(|(n, _)| n == name) {
            return Ok(var);
        }
        let var = self.next_fresh;
        self.next_fresh += 1;
        self.interned.push((name.to_string(), var));
        self.names.insert(var, name);
        Ok(var)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_precedence_and_negation() {
        let p = parse_formula("p & ~q").unwrap();
        assert_eq!(p.formula, Formula::and(Formula::atom(1), Formula::neg(Formula::atom(2))));
    }

    #[test]
    fn parses_parentheses() {
        let p = parse_formula("(p | q) & r").unwrap();
        assert_eq!(
            p.formula,
            Formula::and(Formula::or(Formula::atom(1), Formula::atom(2)), Formula::atom(3))
        );
    }

    #[test]
    fn parses_double_negation() {
        let p = parse_formula("~~(p & p)").unwrap();
        assert_eq!(
            p.formula,
            Formula::neg(Formula::neg(Formula::and(Formula::atom(1), Formula::atom(1))))
        );
        assert_eq!(p.formula.size(), 5);
    }

    #[test]
    fn binary_chains_are_left_associative() {
        let p = parse_formula("a & b & c").unwrap();
        assert_eq!(
            p.formula,
            Formula::and(Formula::and(Formula::atom(1), Formula::atom(2)), Formula::atom(3))
        );
        let q = parse_formula("a | b | c").unwrap();
        assert_eq!(
            q.formula,
            Formula::or(Formula::or(Formula::atom(1), Formula::atom(2)), Formula::atom(3))
        );
    }

    #[test]
    fn explicit_indices_and_fresh_names_mix() {
        let p = parse_formula("foo & p3 | bar").unwrap();
        // fresh names intern above the largest explicit index
        assert_eq!(
            p.formula,
            Formula::or(Formula::and(Formula::atom(4), Formula::atom(3)), Formula::atom(5))
        );
        assert_eq!(p.names.name(4), "foo");
        assert_eq!(p.names.name(3), "p3");
        assert_eq!(p.names.name(5), "bar");
    }

    #[test]
    fn precedence_or_binds_loosest() {
        let p = parse_formula("a | b & c").unwrap();
        assert_eq!(
            p.formula,
            Formula::or(Formula::atom(1), Formula::and(Formula::atom(2), Formula::atom(3)))
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert!(parse_formula("(p | q").is_err());
        assert!(parse_formula("p q").is_err());
        assert!(parse_formula("p &").is_err());
        assert!(parse_formula("").is_err());
        assert!(parse_formula("p0").is_err());
        assert!(parse_formula("p $ q").is_err());
    }

    #[test]
    fn rendered_text_reparses() {
        for text in ["p & ~q", "(p | q) & r", "~~(p & p)", "a | b & ~(c | d)"] {
            let p = parse_formula(text).unwrap();
            let rendered = p.formula.to_text();
            let q = parse_formula(&rendered).unwrap();
            assert_eq!(p.formula, q.formula, "render/reparse changed {text}");
        }
    }
}
