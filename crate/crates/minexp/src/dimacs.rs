//! DIMACS cnf reading and writing.
//!
//! Accepts `c` comment lines, one `p cnf <vars> <clauses>` header, and
//! 0-terminated clauses that may span lines. The writer emits the same
//! format back; parsing a written formula reproduces it exactly.

use std::io::{self, Write};

use crate::cnf::{Clause, Cnf};
use crate::error::ParseError;
use crate::lit::{Literal, Var};

pub fn parse_dimacs(text: &str) -> Result<Cnf, ParseError> {
    let mut header: Option<(Var, usize, usize)> = None; // vars, clauses, line
    let mut cnf = Cnf::new(0);
    let mut declared_clauses = 0usize;
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_line = 0usize;

    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::new(line_no, "duplicate `p cnf` header"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(ParseError::new(line_no, "malformed header, expected `p cnf <vars> <clauses>`"));
            }
            let vars: Var = fields[2]
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("invalid variable count `{}`", fields[2])))?;
            let clauses: usize = fields[3]
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("invalid clause count `{}`", fields[3])))?;
            header = Some((vars, clauses, line_no));
            cnf = Cnf::new(vars);
            declared_clauses = clauses;
            continue;
        }

        let Some((num_vars, _, _)) = header else {
            return Err(ParseError::new(line_no, "clause data before the `p cnf` header"));
        };
        for token in trimmed.split_whitespace() {
            let code: i64 = token
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("expected an integer literal, got `{token}`")))?;
            if code == 0 {
                if cnf.len() == declared_clauses {
                    return Err(ParseError::new(
                        line_no,
                        format!("clause count mismatch: more than the declared {declared_clauses} clauses"),
                    ));
                }
                cnf.push(Clause::new(pending.drain(..)));
                continue;
            }
            let lit = Literal::from_dimacs(code)
                .ok_or_else(|| ParseError::new(line_no, format!("literal {code} out of range")))?;
            if lit.var() > num_vars {
                return Err(ParseError::new(
                    line_no,
                    format!("literal {code} exceeds the declared {num_vars} variables"),
                ));
            }
            if pending.is_empty() {
                pending_line = line_no;
            }
            pending.push(lit);
        }
    }

    let Some((_, declared, header_line)) = header else {
        return Err(ParseError::new(1, "missing `p cnf` header"));
    };
    if !pending.is_empty() {
        return Err(ParseError::new(pending_line, "unterminated clause (missing trailing 0)"));
    }
    if cnf.len() != declared {
        return Err(ParseError::new(
            header_line,
            format!("clause count mismatch: header declares {declared}, found {}", cnf.len()),
        ));
    }
    Ok(cnf)
}

pub fn write_dimacs<W: Write>(cnf: &Cnf, out: &mut W) -> io::Result<()> {
    writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.len())?;
    for clause in cnf.clauses() {
        for lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs())?;
        }
        writeln!(out, "0")?;
    }
    Ok(())
}

pub fn render_dimacs(cnf: &Cnf) -> String {
    let mut buf = Vec::new();
    write_dimacs(cnf, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}
