//! Prioritized knowledge bases at the conflict-graph level.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::ModelError;

/// Dense fact identifier; doubles as an index into the fact table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactId(pub u32);

impl FactId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FactId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub type FactSet = BTreeSet<FactId>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub id: FactId,
    pub label: Option<String>,
}

fn ordered(a: FactId, b: FactId) -> (FactId, FactId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Binary conflicts as normalized `(min, max)` pairs, plus unary ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConflictSet {
    pairs: BTreeSet<(FactId, FactId)>,
    self_inconsistent: BTreeSet<FactId>,
}

impl ConflictSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (FactId, FactId)>,
    {
        let mut c = ConflictSet::new();
        for (a, b) in pairs {
            c.add_pair(a, b)?;
        }
        Ok(c)
    }

    /// Returns whether the pair was new.
    pub fn add_pair(&mut self, a: FactId, b: FactId) -> Result<bool, ModelError> {
        if a == b {
            return Err(ModelError::SelfPair(a));
        }
        Ok(self.pairs.insert(ordered(a, b)))
    }

    pub fn add_self_inconsistent(&mut self, a: FactId) -> bool {
        self.self_inconsistent.insert(a)
    }

    pub fn contains(&self, a: FactId, b: FactId) -> bool {
        self.pairs.contains(&ordered(a, b))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (FactId, FactId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn self_inconsistent(&self) -> &BTreeSet<FactId> {
        &self.self_inconsistent
    }

    pub fn is_self_inconsistent(&self, a: FactId) -> bool {
        self.self_inconsistent.contains(&a)
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// Facts occurring in some binary conflict.
    pub fn conflicting_facts(&self) -> FactSet {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn max_fact(&self) -> Option<FactId> {
        let p = self.pairs.iter().map(|&(_, b)| b).max();
        let s = self.self_inconsistent.iter().next_back().copied();
        p.max(s)
    }
}

/// A set of `(preferred, dominated)` edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PriorityRelation {
    edges: BTreeSet<(FactId, FactId)>,
}

impl PriorityRelation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I: IntoIterator<Item = (FactId, FactId)>>(edges: I) -> Self {
        PriorityRelation {
            edges: edges.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, preferred: FactId, dominated: FactId) -> bool {
        self.edges.insert((preferred, dominated))
    }

    pub fn prefers(&self, a: FactId, b: FactId) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn edges(&self) -> impl Iterator<Item = (FactId, FactId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// First violated condition found by [`validate_priority`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PriorityViolation {
    NotAConflict { preferred: FactId, dominated: FactId },
    Symmetric { a: FactId, b: FactId },
    /// The facts of a cycle in priority order.
    Cycle(Vec<FactId>),
}

impl fmt::Display for PriorityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriorityViolation::NotAConflict {
                preferred,
                dominated,
            } => write!(f, "{preferred} > {dominated} does not cover a conflict"),
            PriorityViolation::Symmetric { a, b } => {
                write!(f, "{a} and {b} are preferred to each other")
            }
            PriorityViolation::Cycle(c) => {
                let names: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "priority cycle {}", names.join(" > "))
            }
        }
    }
}

pub fn validate_priority(
    conflicts: &ConflictSet,
    priority: &PriorityRelation,
) -> Result<(), PriorityViolation> {
    for (a, b) in priority.edges() {
        if !conflicts.contains(a, b) {
            return Err(PriorityViolation::NotAConflict {
                preferred: a,
                dominated: b,
            });
        }
    }
    for (a, b) in priority.edges() {
        if a < b && priority.prefers(b, a) {
            return Err(PriorityViolation::Symmetric { a, b });
        }
    }
    match find_cycle(priority.edges()) {
        Some(c) => Err(PriorityViolation::Cycle(c)),
        None => Ok(()),
    }
}

/// Some cycle of the directed graph given by `edges`, if any.
pub(crate) fn find_cycle<I: IntoIterator<Item = (FactId, FactId)>>(edges: I) -> Option<Vec<FactId>> {
    let mut adj: std::collections::BTreeMap<FactId, Vec<FactId>> = Default::default();
    for (a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default();
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: std::collections::BTreeMap<FactId, u8> = adj.keys().map(|&k| (k, 0)).collect();
    let nodes: Vec<FactId> = adj.keys().copied().collect();
    for start in nodes {
        if state[&start] != 0 {
            continue;
        }
        let mut stack: Vec<(FactId, usize)> = vec![(start, 0)];
        state.insert(start, 1);
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            let succ = &adj[&v];
            if *i < succ.len() {
                let w = succ[*i];
                *i += 1;
                match state[&w] {
                    0 => {
                        state.insert(w, 1);
                        stack.push((w, 0));
                    }
                    1 => {
                        let pos = stack.iter().position(|&(x, _)| x == w).expect("on stack");
                        return Some(stack[pos..].iter().map(|&(x, _)| x).collect());
                    }
                    _ => {}
                }
            } else {
                state.insert(v, 2);
                stack.pop();
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialAnswer {
    pub answer_id: String,
    pub causes: Vec<FactSet>,
}

/// Edge `a -> b` iff `a` and `b` conflict and `a` is not preferred to `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedConflictGraph {
    out: Vec<Vec<FactId>>,
}

impl DirectedConflictGraph {
    pub fn new(conflicts: &ConflictSet, priority: &PriorityRelation) -> Self {
        let n = conflicts.max_fact().map_or(0, |f| f.index() + 1);
        Self::with_size(conflicts, priority, n)
    }

    fn with_size(conflicts: &ConflictSet, priority: &PriorityRelation, n: usize) -> Self {
        let mut out = vec![Vec::new(); n];
        for (a, b) in conflicts.pairs() {
            if conflicts.is_self_inconsistent(a) || conflicts.is_self_inconsistent(b) {
                continue;
            }
            if !priority.prefers(a, b) {
                out[a.index()].push(b);
            }
            if !priority.prefers(b, a) {
                out[b.index()].push(a);
            }
        }
        for o in &mut out {
            o.sort_unstable();
        }
        DirectedConflictGraph { out }
    }

    pub fn out_edges(&self, a: FactId) -> &[FactId] {
        self.out.get(a.index()).map_or(&[], |v| v.as_slice())
    }

    pub fn out_degree(&self, a: FactId) -> usize {
        self.out_edges(a).len()
    }

    pub fn edges(&self) -> Vec<(FactId, FactId)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, o)| o.iter().map(move |&b| (FactId(i as u32), b)))
            .collect()
    }
}

pub fn directed_conflict_graph(
    conflicts: &ConflictSet,
    priority: &PriorityRelation,
) -> DirectedConflictGraph {
    DirectedConflictGraph::new(conflicts, priority)
}

/// Closure of `seed` under out-edges.
pub fn reachable_set(dcg: &DirectedConflictGraph, seed: &FactSet) -> FactSet {
    let mut seen: FactSet = seed.clone();
    let mut queue: VecDeque<FactId> = seed.iter().copied().collect();
    while let Some(a) = queue.pop_front() {
        for &b in dcg.out_edges(a) {
            if seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    seen
}

/// Closure of `seed` under: for `a` in the set and `b > a`, add every
/// contradictor of `b` that `b` does not dominate.
pub fn reachable_minus_set(
    conflicts: &ConflictSet,
    priority: &PriorityRelation,
    seed: &FactSet,
) -> FactSet {
    let dcg = DirectedConflictGraph::new(conflicts, priority);
    let mut dominators: std::collections::BTreeMap<FactId, Vec<FactId>> = Default::default();
    for (b, a) in priority.edges() {
        dominators.entry(a).or_default().push(b);
    }
    reachable_minus_with(&dcg, |a| dominators.get(&a).map_or(&[][..], |v| v.as_slice()), seed)
}

fn reachable_minus_with<'a, F>(dcg: &DirectedConflictGraph, dominators: F, seed: &FactSet) -> FactSet
where
    F: Fn(FactId) -> &'a [FactId],
{
    let mut seen: FactSet = seed.clone();
    let mut queue: VecDeque<FactId> = seed.iter().copied().collect();
    while let Some(a) = queue.pop_front() {
        for &b in dominators(a) {
            for &g in dcg.out_edges(b) {
                if seen.insert(g) {
                    queue.push_back(g);
                }
            }
        }
    }
    seen
}

/// A validated prioritized knowledge base together with its potential
/// answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrioritizedInstance {
    facts: Vec<Fact>,
    conflicts: ConflictSet,
    priority: PriorityRelation,
    answers: Vec<PotentialAnswer>,
    dcg: DirectedConflictGraph,
    neighbors: Vec<Vec<FactId>>,
    dominators: Vec<Vec<FactId>>,
}

impl PrioritizedInstance {
    pub fn new(
        facts: Vec<Fact>,
        conflicts: ConflictSet,
        priority: PriorityRelation,
        answers: Vec<PotentialAnswer>,
    ) -> Result<Self, ModelError> {
        for (i, f) in facts.iter().enumerate() {
            if f.id.index() != i {
                return Err(ModelError::NonDenseIds { position: i, id: f.id });
            }
        }
        let n = facts.len();
        let check = |a: FactId| {
            if a.index() < n {
                Ok(())
            } else {
                Err(ModelError::UnknownFact(a))
            }
        };
        for (a, b) in conflicts.pairs() {
            check(a)?;
            check(b)?;
        }
        for &a in conflicts.self_inconsistent() {
            check(a)?;
        }
        validate_priority(&conflicts, &priority).map_err(ModelError::InvalidPriority)?;
        for ans in &answers {
            if ans.causes.is_empty() {
                return Err(ModelError::NoCauses(ans.answer_id.clone()));
            }
            for c in &ans.causes {
                if c.is_empty() {
                    return Err(ModelError::EmptyCause(ans.answer_id.clone()));
                }
                for &a in c {
                    check(a)?;
                }
            }
        }

        let dcg = DirectedConflictGraph::with_size(&conflicts, &priority, n);
        let mut neighbors = vec![Vec::new(); n];
        for (a, b) in conflicts.pairs() {
            neighbors[a.index()].push(b);
            neighbors[b.index()].push(a);
        }
        for v in &mut neighbors {
            v.sort_unstable();
        }
        let mut dominators = vec![Vec::new(); n];
        for (b, a) in priority.edges() {
            dominators[a.index()].push(b);
        }
        Ok(PrioritizedInstance {
            facts,
            conflicts,
            priority,
            answers,
            dcg,
            neighbors,
            dominators,
        })
    }

    /// Facts `0..n` without labels.
    pub fn unlabeled_facts(n: usize) -> Vec<Fact> {
        (0..n)
            .map(|i| Fact {
                id: FactId(i as u32),
                label: None,
            })
            .collect()
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn num_facts(&self) -> usize {
        self.facts.len()
    }

    pub fn fact_ids(&self) -> impl Iterator<Item = FactId> {
        (0..self.facts.len() as u32).map(FactId)
    }

    pub fn label(&self, a: FactId) -> String {
        self.facts
            .get(a.index())
            .and_then(|f| f.label.clone())
            .unwrap_or_else(|| a.to_string())
    }

    pub fn conflicts(&self) -> &ConflictSet {
        &self.conflicts
    }

    pub fn priority(&self) -> &PriorityRelation {
        &self.priority
    }

    pub fn answers(&self) -> &[PotentialAnswer] {
        &self.answers
    }

    pub fn dcg(&self) -> &DirectedConflictGraph {
        &self.dcg
    }

    pub fn conflicting(&self, a: FactId, b: FactId) -> bool {
        self.conflicts.contains(a, b)
    }

    pub fn prefers(&self, a: FactId, b: FactId) -> bool {
        self.priority.prefers(a, b)
    }

    /// All binary contradictors of `a`.
    pub fn neighbors(&self, a: FactId) -> &[FactId] {
        &self.neighbors[a.index()]
    }

    /// Contradictors of `a` that `a` is not preferred to.
    pub fn non_dominated_contradictors(&self, a: FactId) -> &[FactId] {
        self.dcg.out_edges(a)
    }

    /// Facts preferred to `a`.
    pub fn dominators(&self, a: FactId) -> &[FactId] {
        &self.dominators[a.index()]
    }

    pub fn is_self_inconsistent(&self, a: FactId) -> bool {
        self.conflicts.is_self_inconsistent(a)
    }

    pub fn reachable(&self, seed: &FactSet) -> FactSet {
        reachable_set(&self.dcg, seed)
    }

    pub fn reachable_minus(&self, seed: &FactSet) -> FactSet {
        reachable_minus_with(&self.dcg, |a| self.dominators(a), seed)
    }

    /// The same knowledge base with an empty priority relation.
    pub fn without_priority(&self) -> Self {
        self.with_parts(self.conflicts.clone(), PriorityRelation::new(), self.answers.clone())
            .expect("dropping the priority keeps an instance valid")
    }

    pub fn with_answers(&self, answers: Vec<PotentialAnswer>) -> Result<Self, ModelError> {
        self.with_parts(self.conflicts.clone(), self.priority.clone(), answers)
    }

    pub fn with_priority(&self, priority: PriorityRelation) -> Result<Self, ModelError> {
        self.with_parts(self.conflicts.clone(), priority, self.answers.clone())
    }

    pub fn with_parts(
        &self,
        conflicts: ConflictSet,
        priority: PriorityRelation,
        answers: Vec<PotentialAnswer>,
    ) -> Result<Self, ModelError> {
        PrioritizedInstance::new(self.facts.clone(), conflicts, priority, answers)
    }
}
