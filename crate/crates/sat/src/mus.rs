//! Enumeration of minimal unsatisfiable subsets of soft literals (MARCO).
//!
//! A map solver over one variable per soft literal tracks the subsets not yet
//! explored. Satisfiable seeds are grown to maximal satisfiable subsets and
//! block their subsets; unsatisfiable seeds are shrunk to a MUS and block
//! their supersets.

use crate::lit::{Lit, Var};
use crate::solver::{SolveResult, Solver, SolverConfig, SolverStats};
use crate::SolveError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MusEnumeration {
    /// Each MUS as sorted indices into the soft literals.
    pub muses: Vec<Vec<usize>>,
    /// The hard clauses alone are unsatisfiable; `muses` is then `[[]]`.
    pub hard_unsat: bool,
    pub stats: SolverStats,
}

pub fn enumerate_muses(
    config: SolverConfig,
    num_vars: usize,
    hard: &[Vec<Lit>],
    softs: &[Lit],
) -> Result<MusEnumeration, SolveError> {
    let mut sub = Solver::new(config);
    sub.ensure_vars(num_vars);
    for c in hard {
        sub.add_clause(c);
    }
    let mut result = MusEnumeration::default();
    if !sub.solve()?.is_sat() {
        result.muses.push(Vec::new());
        result.hard_unsat = true;
        result.stats = *sub.stats();
        return Ok(result);
    }

    let n = softs.len();
    let mut map = Solver::new(config);
    map.ensure_vars(n);

    while let SolveResult::Sat(m) = map.solve()? {
        let seed: Vec<usize> = (0..n).filter(|&i| m.var_value(Var(i as u32))).collect();
        let assumptions: Vec<Lit> = seed.iter().map(|&i| softs[i]).collect();
        match sub.solve_assuming(&assumptions)? {
            SolveResult::Sat(model) => {
                let mut inside = vec![false; n];
                for (i, &s) in softs.iter().enumerate() {
                    inside[i] = model.lit_value(s);
                }
                for &i in &seed {
                    inside[i] = true;
                }
                for i in 0..n {
                    if inside[i] {
                        continue;
                    }
                    inside[i] = true;
                    let trial: Vec<Lit> = (0..n).filter(|&k| inside[k]).map(|k| softs[k]).collect();
                    match sub.solve_assuming(&trial)? {
                        SolveResult::Sat(m) => {
                            for (k, &s) in softs.iter().enumerate() {
                                if m.lit_value(s) {
                                    inside[k] = true;
                                }
                            }
                        }
                        SolveResult::Unsat { .. } => inside[i] = false,
                    }
                }
                let block: Vec<Lit> = (0..n)
                    .filter(|&i| !inside[i])
                    .map(|i| Var(i as u32).pos())
                    .collect();
                map.add_clause(&block);
            }
            SolveResult::Unsat { core } => {
                let mus = shrink(&mut sub, softs, &seed, &core)?;
                let block: Vec<Lit> = mus.iter().map(|&i| Var(i as u32).neg()).collect();
                map.add_clause(&block);
                result.muses.push(mus);
            }
        }
    }

    result.stats = *sub.stats();
    result.stats.absorb(map.stats());
    Ok(result)
}

fn shrink(
    sub: &mut Solver,
    softs: &[Lit],
    seed: &[usize],
    core: &[Lit],
) -> Result<Vec<usize>, SolveError> {
    let mut current: Vec<usize> = restrict_to_core(seed, softs, core);
    let mut k = 0;
    while k < current.len() {
        let trial: Vec<usize> = current
            .iter()
            .enumerate()
            .filter(|&(pos, _)| pos != k)
            .map(|(_, &i)| i)
            .collect();
        let assumptions: Vec<Lit> = trial.iter().map(|&i| softs[i]).collect();
        match sub.solve_assuming(&assumptions)? {
            SolveResult::Sat(_) => k += 1,
            SolveResult::Unsat { core } => current = restrict_to_core(&trial, softs, &core),
        }
    }
    current.sort_unstable();
    Ok(current)
}

fn restrict_to_core(set: &[usize], softs: &[Lit], core: &[Lit]) -> Vec<usize> {
    set.iter()
        .copied()
        .filter(|&i| core.contains(&softs[i]))
        .collect()
}
