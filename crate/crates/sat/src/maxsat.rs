//! Unweighted MaxSAT over unit soft clauses.
//!
//! Linear SAT-UNSAT search: each satisfiable call raises the lower bound on
//! the number of satisfied soft literals, enforced through a totalizer whose
//! output literals are passed as assumptions.

use crate::lit::{Lit, Model, Var};
use crate::solver::{SolveResult, Solver, SolverConfig, SolverStats};
use crate::SolveError;

/// Best assignment found for the current hard clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxSatOutcome {
    pub model: Model,
    /// Indices into the soft literals that the model satisfies.
    pub satisfied: Vec<usize>,
}

/// Totalizer outputs: `outputs[k]` holds iff at least `k + 1` inputs hold.
#[derive(Debug, Clone)]
struct Totalizer {
    outputs: Vec<Lit>,
}

impl Totalizer {
    fn build(solver: &mut Solver, inputs: &[Lit]) -> Totalizer {
        Totalizer {
            outputs: build_node(solver, inputs),
        }
    }
}

fn build_node(solver: &mut Solver, inputs: &[Lit]) -> Vec<Lit> {
    if inputs.len() == 1 {
        return vec![inputs[0]];
    }
    let (left, right) = inputs.split_at(inputs.len() / 2);
    let a = build_node(solver, left);
    let b = build_node(solver, right);
    let out: Vec<Lit> = (0..inputs.len()).map(|_| solver.new_var().pos()).collect();
    // a[i - 1] stands for "at least i on the left"; index 0 is the constant true.
    for i in 0..=a.len() {
        for j in 0..=b.len() {
            if i + j > 0 {
                let mut c = Vec::with_capacity(3);
                if i > 0 {
                    c.push(!a[i - 1]);
                }
                if j > 0 {
                    c.push(!b[j - 1]);
                }
                c.push(out[i + j - 1]);
                solver.add_clause(&c);
            }
            if i + j < out.len() {
                let mut c = Vec::with_capacity(3);
                if i < a.len() {
                    c.push(a[i]);
                }
                if j < b.len() {
                    c.push(b[j]);
                }
                c.push(!out[i + j]);
                solver.add_clause(&c);
            }
        }
    }
    out
}

/// A MaxSAT session with a fixed set of soft literals and growing hard
/// clauses.
#[derive(Debug, Clone)]
pub struct UnitMaxSat {
    solver: Solver,
    softs: Vec<Lit>,
    totalizer: Option<Totalizer>,
}

impl UnitMaxSat {
    pub fn new(config: SolverConfig, num_vars: usize, softs: Vec<Lit>) -> Self {
        let mut solver = Solver::new(config);
        solver.ensure_vars(num_vars);
        if let Some(max) = softs.iter().map(|l| l.var().index()).max() {
            solver.ensure_vars(max + 1);
        }
        UnitMaxSat {
            solver,
            softs,
            totalizer: None,
        }
    }

    pub fn add_hard(&mut self, clause: &[Lit]) -> bool {
        self.solver.add_clause(clause)
    }

    pub fn new_var(&mut self) -> Var {
        self.solver.new_var()
    }

    pub fn softs(&self) -> &[Lit] {
        &self.softs
    }

    pub fn stats(&self) -> &SolverStats {
        self.solver.stats()
    }

    /// Maximizes the satisfied soft literals subject to the hard clauses and
    /// `fixed`. Returns `None` when those are unsatisfiable.
    pub fn solve(&mut self, fixed: &[Lit]) -> Result<Option<MaxSatOutcome>, SolveError> {
        let mut best = match self.solver.solve_assuming(fixed)? {
            SolveResult::Sat(m) => self.outcome(m),
            SolveResult::Unsat { .. } => return Ok(None),
        };
        while best.satisfied.len() < self.softs.len() {
            if self.totalizer.is_none() {
                self.totalizer = Some(Totalizer::build(&mut self.solver, &self.softs));
            }
            let bound = self.totalizer.as_ref().expect("built above").outputs[best.satisfied.len()];
            let mut assumptions = fixed.to_vec();
            assumptions.push(bound);
            match self.solver.solve_assuming(&assumptions)? {
                SolveResult::Sat(m) => best = self.outcome(m),
                SolveResult::Unsat { .. } => break,
            }
        }
        Ok(Some(best))
    }

    fn outcome(&self, model: Model) -> MaxSatOutcome {
        let satisfied = self
            .softs
            .iter()
            .enumerate()
            .filter(|(_, &l)| model.lit_value(l))
            .map(|(i, _)| i)
            .collect();
        MaxSatOutcome { model, satisfied }
    }
}
