//! Conflict-driven clause learning with two watched literals.
//!
//! Decisions follow a fixed order: the lowest-numbered unassigned variable,
//! positive phase first (the phase is flipped per variable by a hash of the
//! seed when the seed is non-zero). Assumptions occupy the first decision
//! levels, and a failed assumption yields a core expressed in terms of the
//! assumption literals.

use std::time::{Duration, Instant};

use crate::lit::{Lit, Model, Var};
use crate::SolveError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Value {
    True,
    False,
    Unassigned,
}

#[derive(Debug, Clone)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    clause: u32,
    blocker: Lit,
}

/// Tunables for a solver session.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverConfig {
    /// Zero keeps the positive-first phase on every variable.
    pub seed: u64,
    /// Maximum number of conflicts a single `solve` call may spend.
    pub conflict_budget: Option<u64>,
}

/// Counters accumulated over the lifetime of a session.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolverStats {
    pub solves: u64,
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub learnt_clauses: u64,
    pub restarts: u64,
    pub wall_time: Duration,
}

impl SolverStats {
    pub fn absorb(&mut self, other: &SolverStats) {
        self.solves += other.solves;
        self.decisions += other.decisions;
        self.conflicts += other.conflicts;
        self.propagations += other.propagations;
        self.learnt_clauses += other.learnt_clauses;
        self.restarts += other.restarts;
        self.wall_time += other.wall_time;
    }
}

/// Verdict of a single solve call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Model),
    /// `core` is a subset of the assumptions that is already unsatisfiable
    /// together with the clauses; it is empty when the clauses alone are.
    Unsat { core: Vec<Lit> },
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SolveResult::Sat(m) => Some(m),
            SolveResult::Unsat { .. } => None,
        }
    }
}

/// An incremental solver session. Clauses are append-only.
#[derive(Debug, Clone)]
pub struct Solver {
    config: SolverConfig,
    clauses: Vec<Clause>,
    original: Vec<Vec<Lit>>,
    watches: Vec<Vec<Watcher>>,
    values: Vec<Value>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    phase: Vec<bool>,
    seen: Vec<bool>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    next_decision: usize,
    num_learnts: usize,
    max_learnts: usize,
    ok: bool,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverConfig::default())
    }
}

const RESTART_UNIT: u64 = 100;

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver {
            config,
            clauses: Vec::new(),
            original: Vec::new(),
            watches: Vec::new(),
            values: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            phase: Vec::new(),
            seen: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            next_decision: 0,
            num_learnts: 0,
            max_learnts: 2000,
            ok: true,
            stats: SolverStats::default(),
        }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn set_conflict_budget(&mut self, budget: Option<u64>) {
        self.config.conflict_budget = budget;
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.original.len()
    }

    pub fn stats(&self) -> &SolverStats {
        &self.stats
    }

    pub fn new_var(&mut self) -> Var {
        let v = Var(self.values.len() as u32);
        self.values.push(Value::Unassigned);
        self.level.push(0);
        self.reason.push(None);
        self.phase.push(initial_phase(self.config.seed, v));
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        v
    }

    /// Makes sure variables `0..n` exist.
    pub fn ensure_vars(&mut self, n: usize) {
        while self.values.len() < n {
            self.new_var();
        }
    }

    /// Adds a clause at the root level. Returns `false` once the clause set
    /// is known to be unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if let Some(max) = lits.iter().map(|l| l.var().index()).max() {
            self.ensure_vars(max + 1);
        }
        self.original.push(lits.to_vec());
        if !self.ok {
            return false;
        }
        debug_assert_eq!(self.decision_level(), 0);

        let mut c: Vec<Lit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return true;
        }
        let mut kept = Vec::with_capacity(c.len());
        for &l in &c {
            match self.value(l) {
                Value::True => return true,
                Value::False => {}
                Value::Unassigned => kept.push(l),
            }
        }
        match kept.len() {
            0 => {
                self.ok = false;
            }
            1 => {
                self.assign(kept[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(kept, false);
            }
        }
        self.ok
    }

    pub fn solve(&mut self) -> Result<SolveResult, SolveError> {
        self.solve_assuming(&[])
    }

    /// Decides the clause set under `assumptions`. The session stays usable
    /// afterwards with any other set of assumptions.
    pub fn solve_assuming(&mut self, assumptions: &[Lit]) -> Result<SolveResult, SolveError> {
        let start = Instant::now();
        if let Some(max) = assumptions.iter().map(|l| l.var().index()).max() {
            self.ensure_vars(max + 1);
        }
        self.stats.solves += 1;
        let result = self.search(assumptions);
        self.cancel_until(0);
        self.stats.wall_time += start.elapsed();
        if let Ok(SolveResult::Sat(model)) = &result {
            // Every hard clause must hold; anything else is an engine bug.
            for c in &self.original {
                assert!(model.satisfies(c), "model violates clause {c:?}");
            }
        }
        result
    }

    fn search(&mut self, assumptions: &[Lit]) -> Result<SolveResult, SolveError> {
        if !self.ok {
            return Ok(SolveResult::Unsat { core: Vec::new() });
        }
        let mut conflicts_this_call: u64 = 0;
        let mut restart_round: u32 = 0;
        let mut restart_limit = luby(restart_round) * RESTART_UNIT;
        let mut conflicts_since_restart: u64 = 0;

        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_this_call += 1;
                conflicts_since_restart += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Ok(SolveResult::Unsat { core: Vec::new() });
                }
                if let Some(budget) = self.config.conflict_budget {
                    if conflicts_this_call > budget {
                        return Err(SolveError::BudgetExhausted { conflicts: budget });
                    }
                }
                let (learnt, backjump) = self.analyze(confl);
                self.cancel_until(backjump);
                if learnt.len() == 1 {
                    self.assign(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.assign(first, Some(cref));
                }
                continue;
            }

            if conflicts_since_restart >= restart_limit {
                self.stats.restarts += 1;
                restart_round += 1;
                restart_limit = luby(restart_round) * RESTART_UNIT;
                conflicts_since_restart = 0;
                self.cancel_until(0);
                if self.num_learnts > self.max_learnts {
                    self.reduce_learnts();
                }
                continue;
            }

            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let p = assumptions[self.decision_level()];
                match self.value(p) {
                    Value::True => self.trail_lim.push(self.trail.len()),
                    Value::False => {
                        let core = self.analyze_final(p);
                        return Ok(SolveResult::Unsat { core });
                    }
                    Value::Unassigned => {
                        next = Some(p);
                        break;
                    }
                }
            }

            let decision = match next {
                Some(p) => p,
                None => match self.pick_branch() {
                    Some(p) => p,
                    None => {
                        let values = self.values.iter().map(|v| *v == Value::True).collect();
                        return Ok(SolveResult::Sat(Model::new(values)));
                    }
                },
            };
            self.stats.decisions += 1;
            self.trail_lim.push(self.trail.len());
            self.assign(decision, None);
        }
    }

    #[inline]
    fn value(&self, lit: Lit) -> Value {
        match self.values[lit.var().index()] {
            Value::Unassigned => Value::Unassigned,
            Value::True if lit.is_positive() => Value::True,
            Value::False if !lit.is_positive() => Value::True,
            _ => Value::False,
        }
    }

    #[inline]
    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn assign(&mut self, lit: Lit, reason: Option<u32>) {
        let v = lit.var().index();
        debug_assert_eq!(self.values[v], Value::Unassigned);
        self.values[v] = if lit.is_positive() {
            Value::True
        } else {
            Value::False
        };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        debug_assert!(lits.len() >= 2);
        let cref = self.clauses.len() as u32;
        self.watches[lits[0].code()].push(Watcher {
            clause: cref,
            blocker: lits[1],
        });
        self.watches[lits[1].code()].push(Watcher {
            clause: cref,
            blocker: lits[0],
        });
        if learnt {
            self.num_learnts += 1;
            self.stats.learnt_clauses += 1;
        }
        self.clauses.push(Clause { lits, learnt });
        cref
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level];
        for i in (lim..self.trail.len()).rev() {
            let v = self.trail[i].var().index();
            self.values[v] = Value::Unassigned;
            self.reason[v] = None;
            if v < self.next_decision {
                self.next_decision = v;
            }
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while self.next_decision < self.values.len() {
            let v = self.next_decision;
            if self.values[v] == Value::Unassigned {
                return Some(Lit::new(Var(v as u32), self.phase[v]));
            }
            self.next_decision += 1;
        }
        None
    }

    /// Unit propagation over the watch lists. Returns a conflicting clause.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == Value::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.clause as usize;
                let lits = &mut self.clauses[cref].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                if first != w.blocker && value_of(&self.values, first) == Value::True {
                    ws[j] = Watcher {
                        clause: w.clause,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    if value_of(&self.values, lits[k]) != Value::False {
                        lits.swap(1, k);
                        let new_watch = lits[1];
                        self.watches[new_watch.code()].push(Watcher {
                            clause: w.clause,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watcher {
                    clause: w.clause,
                    blocker: first,
                };
                j += 1;
                if self.value(first) == Value::False {
                    conflict = Some(w.clause);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.assign(first, Some(w.clause));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    /// First-UIP conflict analysis with local minimization.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, usize) {
        let current = self.decision_level() as u32;
        let mut learnt = vec![Lit::new(Var(0), true)];
        let mut path = 0usize;
        let mut idx = self.trail.len();
        let mut pivot: Option<Lit> = None;

        loop {
            let lits = &self.clauses[confl as usize].lits;
            let skip = usize::from(pivot.is_some());
            for &q in &lits[skip..] {
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] == current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var().index()] {
                    break;
                }
            }
            let p = self.trail[idx];
            let v = p.var().index();
            self.seen[v] = false;
            path -= 1;
            pivot = Some(p);
            if path == 0 {
                learnt[0] = !p;
                break;
            }
            confl = self.reason[v].expect("implied literal without reason");
        }

        // Drop literals implied by the rest of the clause through one reason.
        let before = learnt.clone();
        let mut kept = vec![learnt[0]];
        for &q in &learnt[1..] {
            let v = q.var().index();
            let redundant = match self.reason[v] {
                None => false,
                Some(r) => self.clauses[r as usize].lits[1..].iter().all(|l| {
                    let u = l.var().index();
                    self.seen[u] || self.level[u] == 0
                }),
            };
            if !redundant {
                kept.push(q);
            }
        }
        for q in &before {
            self.seen[q.var().index()] = false;
        }
        let mut learnt = kept;

        let backjump = if learnt.len() == 1 {
            0
        } else {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var().index()] > self.level[learnt[best].var().index()] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            self.level[learnt[1].var().index()] as usize
        };
        (learnt, backjump)
    }

    /// Collects the assumptions responsible for `failed` being false.
    fn analyze_final(&mut self, failed: Lit) -> Vec<Lit> {
        let mut core = vec![failed];
        let fv = failed.var().index();
        if self.level[fv] == 0 {
            return core;
        }
        self.seen[fv] = true;
        let start = self.trail_lim[0];
        for i in (start..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = lit.var().index();
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                None => {
                    if v != fv {
                        core.push(lit);
                    } else if lit != failed {
                        // `!failed` was itself assumed.
                        core.push(lit);
                    }
                }
                Some(r) => {
                    for l in &self.clauses[r as usize].lits[1..] {
                        let u = l.var().index();
                        if self.level[u] > 0 {
                            self.seen[u] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[fv] = false;
        core.sort_unstable();
        core.dedup();
        core
    }

    /// Drops the longer half of the learnt clauses. Only called at level 0,
    /// where no learnt clause is the reason of a relevant assignment.
    fn reduce_learnts(&mut self) {
        debug_assert_eq!(self.decision_level(), 0);
        let mut learnt: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| self.clauses[i].learnt)
            .collect();
        learnt.sort_by_key(|&i| (self.clauses[i].lits.len(), i));
        let mut drop = vec![false; self.clauses.len()];
        for &i in &learnt[learnt.len() / 2..] {
            drop[i] = self.clauses[i].lits.len() > 2;
        }
        let mut idx = 0;
        self.clauses.retain(|_| {
            idx += 1;
            !drop[idx - 1]
        });
        for r in self.reason.iter_mut() {
            *r = None;
        }
        for w in self.watches.iter_mut() {
            w.clear();
        }
        self.num_learnts = 0;
        for (i, c) in self.clauses.iter().enumerate() {
            self.watches[c.lits[0].code()].push(Watcher {
                clause: i as u32,
                blocker: c.lits[1],
            });
            self.watches[c.lits[1].code()].push(Watcher {
                clause: i as u32,
                blocker: c.lits[0],
            });
            if c.learnt {
                self.num_learnts += 1;
            }
        }
        self.max_learnts += self.max_learnts / 10;
        self.qhead = 0;
        if self.propagate().is_some() {
            self.ok = false;
        }
    }
}

#[inline]
fn value_of(values: &[Value], lit: Lit) -> Value {
    match values[lit.var().index()] {
        Value::Unassigned => Value::Unassigned,
        Value::True if lit.is_positive() => Value::True,
        Value::False if !lit.is_positive() => Value::True,
        _ => Value::False,
    }
}

fn initial_phase(seed: u64, var: Var) -> bool {
    if seed == 0 {
        return true;
    }
    let mut x = seed ^ (u64::from(var.0).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    x & 1 == 0
}

/// The Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ...
fn luby(mut i: u32) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < u64::from(i) + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = u64::from(i);
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    i = seq;
    1u64 << i
}
