//! DIMACS CNF and WCNF text formats.

use std::fmt::Write as _;

use crate::lit::Lit;
use crate::DimacsError;

/// A parsed CNF file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
    pub comments: Vec<String>,
}

fn push_comments(out: &mut String, comments: &[String]) {
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
}

fn push_clause(out: &mut String, clause: &[Lit]) {
    for l in clause {
        let _ = write!(out, "{} ", l.to_dimacs());
    }
    out.push_str("0\n");
}

pub fn write_cnf(num_vars: usize, clauses: &[Vec<Lit>], comments: &[String]) -> String {
    let mut out = String::new();
    push_comments(&mut out, comments);
    let _ = writeln!(out, "p cnf {} {}", num_vars, clauses.len());
    for c in clauses {
        push_clause(&mut out, c);
    }
    out
}

/// Hard clauses carry weight `top = soft.len() + 1`; every soft clause has
/// weight one.
pub fn write_wcnf(
    num_vars: usize,
    hard: &[Vec<Lit>],
    soft: &[Vec<Lit>],
    comments: &[String],
) -> String {
    let top = soft.len() + 1;
    let mut out = String::new();
    push_comments(&mut out, comments);
    let _ = writeln!(out, "p wcnf {} {} {}", num_vars, hard.len() + soft.len(), top);
    for c in hard {
        let _ = write!(out, "{top} ");
        push_clause(&mut out, c);
    }
    for c in soft {
        out.push_str("1 ");
        push_clause(&mut out, c);
    }
    out
}

pub fn parse_cnf(text: &str) -> Result<Cnf, DimacsError> {
    let mut cnf = Cnf::default();
    let mut declared: Option<(usize, usize)> = None;
    let mut current = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let line_no = n + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(' ') {
                cnf.comments.push(rest.trim_start().to_string());
                continue;
            }
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" || declared.is_some() {
                return Err(DimacsError::BadHeader { line: line_no });
            }
            let v = parts[2].parse().map_err(|_| DimacsError::BadHeader { line: line_no })?;
            let c = parts[3].parse().map_err(|_| DimacsError::BadHeader { line: line_no })?;
            declared = Some((v, c));
            cnf.num_vars = v;
            continue;
        }
        let Some((num_vars, _)) = declared else {
            return Err(DimacsError::MissingHeader);
        };
        for tok in line.split_whitespace() {
            let x: i32 = tok.parse().map_err(|_| DimacsError::BadLiteral {
                line: line_no,
                token: tok.to_string(),
            })?;
            if x == 0 {
                cnf.clauses.push(std::mem::take(&mut current));
            } else {
                if x.unsigned_abs() as usize > num_vars {
                    return Err(DimacsError::BadLiteral {
                        line: line_no,
                        token: tok.to_string(),
                    });
                }
                current.push(Lit::from_dimacs(x));
            }
        }
    }
    let Some((_, expected)) = declared else {
        return Err(DimacsError::MissingHeader);
    };
    if !current.is_empty() {
        cnf.clauses.push(current);
    }
    if cnf.clauses.len() != expected {
        return Err(DimacsError::ClauseCount {
            expected,
            found: cnf.clauses.len(),
        });
    }
    Ok(cnf)
}
