//! A small incremental SAT toolkit: a CDCL solver with assumptions and
//! cores, unweighted MaxSAT over unit soft clauses, MUS enumeration, and
//! DIMACS input/output.

pub mod dimacs;
pub mod lit;
pub mod maxsat;
pub mod mus;
pub mod solver;

pub use lit::{Lit, Model, Var};
pub use maxsat::{MaxSatOutcome, UnitMaxSat};
pub use mus::{enumerate_muses, MusEnumeration};
pub use solver::{SolveResult, Solver, SolverConfig, SolverStats};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("conflict budget of {conflicts} exhausted")]
    BudgetExhausted { conflicts: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("malformed header on line {line}")]
    BadHeader { line: usize },
    #[error("bad literal `{token}` on line {line}")]
    BadLiteral { line: usize, token: String },
    #[error("header declares {expected} clauses but {found} were read")]
    ClauseCount { expected: usize, found: usize },
}

/// One-shot satisfiability check.
pub fn solve(num_vars: usize, clauses: &[Vec<Lit>]) -> Result<SolveResult, SolveError> {
    let mut s = Solver::default();
    s.ensure_vars(num_vars);
    for c in clauses {
        s.add_clause(c);
    }
    s.solve()
}
