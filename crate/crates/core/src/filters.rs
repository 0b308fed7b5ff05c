//! Preprocessing and the SAT-based answer filtering algorithms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use orbits_sat::{
    enumerate_muses, Lit, SolveError, SolveResult, Solver, SolverConfig, SolverStats, UnitMaxSat,
};

use crate::encoder::{
    CnfFormula, Encoder, EncoderOptions, EncodingSpec, NegVariant, RepairType, Semantics, Target,
};
use crate::error::FilterError;
use crate::model::{
    ConflictSet, FactId, FactSet, PotentialAnswer, PrioritizedInstance, PriorityRelation,
};
use crate::priority::is_score_structured;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Simple,
    AllMaxSat,
    AllMuses,
    Assumptions,
    CauseByCause,
    IarCauses,
    IarFacts,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Simple,
        Algorithm::AllMaxSat,
        Algorithm::AllMuses,
        Algorithm::Assumptions,
        Algorithm::CauseByCause,
        Algorithm::IarCauses,
        Algorithm::IarFacts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Simple => "simple",
            Algorithm::AllMaxSat => "all-maxsat",
            Algorithm::AllMuses => "all-muses",
            Algorithm::Assumptions => "assumptions",
            Algorithm::CauseByCause => "cause-by-cause",
            Algorithm::IarCauses => "iar-causes",
            Algorithm::IarFacts => "iar-facts",
        }
    }

    pub fn supports(self, sem: Semantics) -> bool {
        match self {
            Algorithm::CauseByCause => sem != Semantics::Ar,
            Algorithm::IarCauses | Algorithm::IarFacts => sem == Semantics::Iar,
            _ => true,
        }
    }

    pub fn all_for(sem: Semantics) -> Vec<Algorithm> {
        Self::ALL.into_iter().filter(|a| a.supports(sem)).collect()
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|a| a.name() == key || a.name().replace('-', "") == key)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Debug, Clone)]
pub struct FilterRequest<'a> {
    pub instance: &'a PrioritizedInstance,
    pub spec: EncodingSpec,
    pub algorithm: Algorithm,
    pub solver: SolverConfig,
    pub encoder: EncoderOptions,
}

impl<'a> FilterRequest<'a> {
    pub fn new(instance: &'a PrioritizedInstance, spec: EncodingSpec, algorithm: Algorithm) -> Self {
        FilterRequest {
            instance,
            spec,
            algorithm,
            solver: SolverConfig::default(),
            encoder: EncoderOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Timings {
    pub preprocessing: Duration,
    pub encoding: Duration,
    pub solving: Duration,
}

impl Timings {
    pub fn total(&self) -> Duration {
        self.preprocessing + self.encoding + self.solving
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterReport {
    /// Per answer of the request, in input order.
    pub holds: Vec<bool>,
    pub answers: BTreeSet<String>,
    pub trivial_answers: BTreeSet<String>,
    /// Input indices of the trivial answers.
    pub trivial: Vec<usize>,
    pub removed_self_inconsistent: FactSet,
    pub timings: Timings,
    pub solver_stats: SolverStats,
    /// Number of SAT or MaxSAT calls made.
    pub solver_calls: u64,
    /// False when the conflict budget ran out; `holds` then marks only the
    /// answers confirmed before that point.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SelfInconsistencyReport {
    pub removed_facts: FactSet,
    pub dropped_causes: usize,
    pub dropped_answers: Vec<String>,
    /// Input indices of the answers that remain, in order.
    pub kept_answers: Vec<usize>,
}

/// Drops causes with a self-inconsistent fact, answers left without causes,
/// and the binary conflicts and priority edges touching such facts.
pub fn remove_self_inconsistent(
    inst: &PrioritizedInstance,
) -> (PrioritizedInstance, SelfInconsistencyReport) {
    let bad = inst.conflicts().self_inconsistent().clone();
    let mut report = SelfInconsistencyReport {
        removed_facts: bad.clone(),
        ..Default::default()
    };
    if bad.is_empty() {
        report.kept_answers = (0..inst.answers().len()).collect();
        return (inst.clone(), report);
    }
    let mut conflicts = ConflictSet::new();
    for &a in &bad {
        conflicts.add_self_inconsistent(a);
    }
    for (a, b) in inst.conflicts().pairs() {
        if !bad.contains(&a) && !bad.contains(&b) {
            conflicts.add_pair(a, b).expect("pair was valid");
        }
    }
    let priority = PriorityRelation::from_edges(
        inst.priority()
            .edges()
            .filter(|(a, b)| !bad.contains(a) && !bad.contains(b)),
    );
    let mut answers = Vec::new();
    for (i, ans) in inst.answers().iter().enumerate() {
        let causes: Vec<FactSet> = ans
            .causes
            .iter()
            .filter(|c| c.is_disjoint(&bad))
            .cloned()
            .collect();
        report.dropped_causes += ans.causes.len() - causes.len();
        if causes.is_empty() {
            report.dropped_answers.push(ans.answer_id.clone());
        } else {
            report.kept_answers.push(i);
            answers.push(PotentialAnswer {
                answer_id: ans.answer_id.clone(),
                causes,
            });
        }
    }
    let out = inst
        .with_parts(conflicts, priority, answers)
        .expect("restriction of a valid instance");
    (out, report)
}

/// Removes facts with no outgoing edge in the directed conflict graph from
/// every cause. Returns the indices of answers left with an empty cause and
/// the remaining answers with their reduced causes.
pub fn extract_trivial_answers(inst: &PrioritizedInstance) -> (Vec<usize>, Vec<(usize, PotentialAnswer)>) {
    let mut trivial = Vec::new();
    let mut rest = Vec::new();
    for (i, ans) in inst.answers().iter().enumerate() {
        let causes: Vec<FactSet> = ans
            .causes
            .iter()
            .map(|c| c.iter().copied().filter(|&a| inst.dcg().out_degree(a) > 0).collect())
            .collect();
        if causes.iter().any(FactSet::is_empty) {
            trivial.push(i);
        } else {
            rest.push((
                i,
                PotentialAnswer {
                    answer_id: ans.answer_id.clone(),
                    causes,
                },
            ));
        }
    }
    (trivial, rest)
}

/// An instance after both preprocessing steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preprocessed {
    /// Remaining answers with reduced causes; priority dropped for subset
    /// repairs.
    pub reduced: PrioritizedInstance,
    /// Input indices of the trivial answers.
    pub trivial: Vec<usize>,
    /// Input index of each answer of `reduced`.
    pub remaining: Vec<usize>,
    pub removed: SelfInconsistencyReport,
}

pub fn preprocess(inst: &PrioritizedInstance, repair: RepairType) -> Preprocessed {
    let base;
    let inst = if repair == RepairType::Subset && !inst.priority().is_empty() {
        base = inst.without_priority();
        &base
    } else {
        inst
    };
    let (clean, removed) = remove_self_inconsistent(inst);
    let (trivial, rest) = extract_trivial_answers(&clean);
    let reduced = clean
        .with_answers(rest.iter().map(|(_, a)| a.clone()).collect())
        .expect("reduced causes stay valid");
    Preprocessed {
        reduced,
        trivial: trivial.iter().map(|&i| removed.kept_answers[i]).collect(),
        remaining: rest.iter().map(|(i, _)| removed.kept_answers[*i]).collect(),
        removed,
    }
}

/// Solver bookkeeping shared by the algorithms.
struct Run<'e> {
    enc: Encoder<'e>,
    cfg: SolverConfig,
    stats: SolverStats,
    calls: u64,
    encoding: Duration,
    solving: Duration,
}

impl<'e> Run<'e> {
    fn encode<F>(&mut self, build: F) -> Result<CnfFormula, FilterError>
    where
        F: FnOnce(&Encoder<'e>) -> Result<CnfFormula, crate::error::EncodeError>,
    {
        let t = Instant::now();
        let f = build(&self.enc)?;
        self.encoding += t.elapsed();
        Ok(f)
    }

    fn solver_for(&self, f: &CnfFormula) -> Solver {
        let mut s = Solver::new(self.cfg);
        s.ensure_vars(f.num_vars());
        for c in f.hard() {
            s.add_clause(c);
        }
        s
    }

    fn solve_on(&mut self, s: &mut Solver, assumptions: &[Lit]) -> Result<bool, SolveError> {
        let before = *s.stats();
        let t = Instant::now();
        let r = s.solve_assuming(assumptions);
        self.solving += t.elapsed();
        self.calls += 1;
        let after = *s.stats();
        self.stats.absorb(&diff(&after, &before));
        Ok(matches!(r?, SolveResult::Sat(_)))
    }

    fn is_sat(&mut self, f: &CnfFormula) -> Result<bool, SolveError> {
        let mut s = self.solver_for(f);
        self.solve_on(&mut s, &[])
    }

    fn single(&mut self, target: Target) -> Result<bool, FilterFailure> {
        let f = self.encode(|e| e.single(target))?;
        Ok(self.is_sat(&f)?)
    }

    /// Repeated MaxSAT over the soft units of `f`, fixing each newly
    /// satisfied soft literal to false. Returns the satisfied indices.
    fn maxsat_rounds(&mut self, f: &CnfFormula, single_round: bool) -> Result<BTreeSet<usize>, FilterFailure> {
        let softs = f.soft_units().to_vec();
        let mut ms = UnitMaxSat::new(self.cfg, f.num_vars(), softs.clone());
        for c in f.hard() {
            ms.add_hard(c);
        }
        let mut seen = BTreeSet::new();
        let mut fixed = Vec::new();
        let before = *ms.stats();
        let t = Instant::now();
        let result = loop {
            self.calls += 1;
            let out = match ms.solve(&fixed) {
                Ok(Some(out)) => out,
                Ok(None) => break Ok(()),
                Err(e) => break Err(e),
            };
            let fresh: Vec<usize> = out.satisfied.into_iter().filter(|k| !seen.contains(k)).collect();
            if fresh.is_empty() {
                break Ok(());
            }
            for k in fresh {
                seen.insert(k);
                fixed.push(!softs[k]);
            }
            if single_round || seen.len() == softs.len() {
                break Ok(());
            }
        };
        self.solving += t.elapsed();
        self.stats.absorb(&diff(ms.stats(), &before));
        match result {
            Ok(()) => Ok(seen),
            Err(e) => Err(FilterFailure::Budget(e, seen)),
        }
    }
}

fn diff(after: &SolverStats, before: &SolverStats) -> SolverStats {
    SolverStats {
        solves: after.solves - before.solves,
        decisions: after.decisions - before.decisions,
        conflicts: after.conflicts - before.conflicts,
        propagations: after.propagations - before.propagations,
        learnt_clauses: after.learnt_clauses - before.learnt_clauses,
        restarts: after.restarts - before.restarts,
        wall_time: after.wall_time.saturating_sub(before.wall_time),
    }
}

/// Why an algorithm stopped early.
enum FilterFailure {
    Error(FilterError),
    /// Budget exhausted; carries soft indices observed so far where known.
    Budget(SolveError, BTreeSet<usize>),
}

impl From<FilterError> for FilterFailure {
    fn from(e: FilterError) -> Self {
        FilterFailure::Error(e)
    }
}

impl From<SolveError> for FilterFailure {
    fn from(e: SolveError) -> Self {
        FilterFailure::Budget(e, BTreeSet::new())
    }
}

/// Verdicts for the answers of the encoder's instance, written into `holds`
/// as they are established.
fn run_algorithm(run: &mut Run<'_>, algorithm: Algorithm, holds: &mut [bool]) -> Result<(), FilterFailure> {
    let sem = run.enc.spec().sem;
    let brave = sem == Semantics::Brave;
    let n = run.enc.instance().answers().len();
    if n == 0 {
        return Ok(());
    }
    match algorithm {
        Algorithm::Simple => {
            for (i, h) in holds.iter_mut().enumerate() {
                *h = run.single(Target::Answer(i))? == brave;
            }
        }
        Algorithm::Assumptions => {
            let all: Vec<usize> = (0..n).collect();
            let f = run.encode(|e| e.multi_answers(&all))?;
            let mut s = run.solver_for(&f);
            for (i, h) in holds.iter_mut().enumerate() {
                let a = f.soft_units()[i];
                *h = run.solve_on(&mut s, &[a])? == brave;
            }
        }
        Algorithm::AllMaxSat => {
            let all: Vec<usize> = (0..n).collect();
            let f = run.encode(|e| e.multi_answers(&all))?;
            let seen = match run.maxsat_rounds(&f, sem == Semantics::Iar) {
                Ok(seen) => seen,
                Err(FilterFailure::Budget(e, seen)) => {
                    if brave {
                        for k in seen.iter() {
                            holds[*k] = true;
                        }
                    }
                    return Err(FilterFailure::Budget(e, seen));
                }
                Err(e) => return Err(e),
            };
            for (i, h) in holds.iter_mut().enumerate() {
                *h = seen.contains(&i) == brave;
            }
        }
        Algorithm::AllMuses => {
            let all: Vec<usize> = (0..n).collect();
            let f = run.encode(|e| e.multi_answers(&all))?;
            let t = Instant::now();
            let r = enumerate_muses(run.cfg, f.num_vars(), f.hard(), f.soft_units());
            run.solving += t.elapsed();
            run.calls += 1;
            let mus = r?;
            run.stats.absorb(&mus.stats);
            let singles: BTreeSet<usize> = if mus.hard_unsat {
                (0..n).collect()
            } else {
                mus.muses.iter().filter(|m| m.len() == 1).map(|m| m[0]).collect()
            };
            for (i, h) in holds.iter_mut().enumerate() {
                *h = singles.contains(&i) != brave;
            }
        }
        Algorithm::CauseByCause => {
            let inst = run.enc.instance().clone();
            for (i, ans) in inst.answers().iter().enumerate() {
                for c in 0..ans.causes.len() {
                    let sat = run.single(Target::Cause { answer: i, cause: c })?;
                    if sat == brave {
                        holds[i] = true;
                        break;
                    }
                }
            }
        }
        Algorithm::IarCauses => {
            let inst = run.enc.instance().clone();
            let mut iar = FactSet::new();
            let mut non_iar = FactSet::new();
            for (i, ans) in inst.answers().iter().enumerate() {
                'causes: for cause in &ans.causes {
                    if !cause.is_disjoint(&non_iar) {
                        continue;
                    }
                    let open: Vec<FactId> = cause.difference(&iar).copied().collect();
                    for a in open {
                        if run.single(Target::Fact(a))? {
                            non_iar.insert(a);
                            continue 'causes;
                        }
                        iar.insert(a);
                    }
                    holds[i] = true;
                    break;
                }
            }
        }
        Algorithm::IarFacts => {
            let inst = run.enc.instance().clone();
            let mut iar = FactSet::new();
            let mut non_iar = FactSet::new();
            for (i, ans) in inst.answers().iter().enumerate() {
                let rel: FactSet = ans
                    .causes
                    .iter()
                    .flatten()
                    .copied()
                    .filter(|a| !iar.contains(a) && !non_iar.contains(a))
                    .collect();
                if !rel.is_empty() {
                    let f = run.encode(|e| e.multi_facts(&rel))?;
                    let rel_vec: Vec<_> = rel.iter().copied().collect();
                    let seen = run.maxsat_rounds(&f, false)?;
                    let fresh: FactSet = seen.iter().map(|&k| rel_vec[k]).collect();
                    iar.extend(rel.difference(&fresh).copied());
                    non_iar.extend(fresh);
                }
                holds[i] = ans.causes.iter().any(|c| c.is_subset(&iar));
            }
        }
    }
    Ok(())
}

/// Preprocesses, filters the remaining answers with the requested algorithm
/// and adds back the trivial answers.
pub fn answer_query(req: &FilterRequest<'_>) -> Result<FilterReport, FilterError> {
    let sem = req.spec.sem;
    if !req.algorithm.supports(sem) {
        return Err(FilterError::InvalidPairing {
            semantics: sem.name(),
            algorithm: req.algorithm.name(),
        });
    }
    req.spec
        .validate(is_score_structured(req.instance.conflicts(), req.instance.priority()))?;

    let start = Instant::now();
    let pre = preprocess(req.instance, req.spec.repair);
    let preprocessing = start.elapsed();

    let ids: Vec<String> = req.instance.answers().iter().map(|a| a.answer_id.clone()).collect();
    let mut holds = vec![false; ids.len()];
    for &i in &pre.trivial {
        holds[i] = true;
    }

    let mut run = Run {
        enc: Encoder::new(&pre.reduced, req.spec, req.encoder)?,
        cfg: req.solver,
        stats: SolverStats::default(),
        calls: 0,
        encoding: Duration::ZERO,
        solving: Duration::ZERO,
    };
    let mut local = vec![false; pre.remaining.len()];
    let complete = match run_algorithm(&mut run, req.algorithm, &mut local) {
        Ok(()) => true,
        Err(FilterFailure::Budget(..)) => false,
        Err(FilterFailure::Error(e)) => return Err(e),
    };
    for (k, &i) in pre.remaining.iter().enumerate() {
        if local[k] {
            holds[i] = true;
        }
    }

    let answers = ids
        .iter()
        .zip(&holds)
        .filter(|(_, &h)| h)
        .map(|(id, _)| id.clone())
        .collect();
    Ok(FilterReport {
        holds,
        answers,
        trivial_answers: pre.trivial.iter().map(|&i| ids[i].clone()).collect(),
        trivial: pre.trivial,
        removed_self_inconsistent: pre.removed.removed_facts,
        timings: Timings {
            preprocessing,
            encoding: run.encoding,
            solving: run.solving,
        },
        solver_stats: run.stats,
        solver_calls: run.calls,
        complete,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnswerClass {
    Trivial,
    IarNotTrivial,
    ArNotIar,
    BraveNotAr,
    NotBrave,
}

impl AnswerClass {
    pub const ALL: [AnswerClass; 5] = [
        AnswerClass::Trivial,
        AnswerClass::IarNotTrivial,
        AnswerClass::ArNotIar,
        AnswerClass::BraveNotAr,
        AnswerClass::NotBrave,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnswerClass::Trivial => "trivial",
            AnswerClass::IarNotTrivial => "IAR\\trivial",
            AnswerClass::ArNotIar => "AR\\IAR",
            AnswerClass::BraveNotAr => "brave\\AR",
            AnswerClass::NotBrave => "not-brave",
        }
    }
}

/// Buckets every answer by the strongest semantics under which it holds.
pub fn classify_answers(
    inst: &PrioritizedInstance,
    repair: RepairType,
    solver: SolverConfig,
    encoder: EncoderOptions,
) -> Result<Vec<AnswerClass>, FilterError> {
    let mut reports = Vec::new();
    for sem in [Semantics::Iar, Semantics::Ar, Semantics::Brave] {
        let mut req = FilterRequest::new(
            inst,
            EncodingSpec::new(sem, repair, NegVariant::Neg1),
            Algorithm::Simple,
        );
        req.solver = solver;
        req.encoder = encoder;
        let r = answer_query(&req)?;
        if !r.complete {
            return Err(FilterError::Incomplete);
        }
        reports.push(r);
    }
    let (iar, ar, brave) = (&reports[0], &reports[1], &reports[2]);
    Ok((0..inst.answers().len())
        .map(|i| {
            if iar.trivial.contains(&i) {
                AnswerClass::Trivial
            } else if iar.holds[i] {
                AnswerClass::IarNotTrivial
            } else if ar.holds[i] {
                AnswerClass::ArNotIar
            } else if brave.holds[i] {
                AnswerClass::BraveNotAr
            } else {
                AnswerClass::NotBrave
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: FactId = FactId(0);
    const B: FactId = FactId(1);
    const G: FactId = FactId(2);
    const D: FactId = FactId(3);

    fn example() -> PrioritizedInstance {
        PrioritizedInstance::new(
            PrioritizedInstance::unlabeled_facts(4),
            ConflictSet::from_pairs([(A, B), (G, D), (A, D), (B, G)]).unwrap(),
            PriorityRelation::from_edges([(A, B), (G, D)]),
            vec![PotentialAnswer {
                answer_id: "q(a)".into(),
                causes: vec![FactSet::from([A]), FactSet::from([B])],
            }],
        )
        .unwrap()
    }

    fn run(inst: &PrioritizedInstance, sem: Semantics, repair: RepairType, alg: Algorithm) -> FilterReport {
        let req = FilterRequest::new(inst, EncodingSpec::new(sem, repair, NegVariant::Neg1), alg);
        answer_query(&req).unwrap()
    }

    #[test]
    fn example_verdicts_all_algorithms() {
        let k = example();
        for (sem, repair, expected) in [
            (Semantics::Ar, RepairType::Pareto, true),
            (Semantics::Iar, RepairType::Pareto, false),
            (Semantics::Iar, RepairType::Completion, true),
            (Semantics::Brave, RepairType::Pareto, true),
        ] {
            for alg in Algorithm::all_for(sem) {
                let r = run(&k, sem, repair, alg);
                assert!(r.complete);
                assert_eq!(r.holds, vec![expected], "{sem:?} {repair:?} {alg}");
                assert!(r.trivial_answers.is_empty());
            }
        }
    }

    #[test]
    fn pairing_rejected_before_solving() {
        let k = example();
        let req = FilterRequest::new(
            &k,
            EncodingSpec::new(Semantics::Brave, RepairType::Subset, NegVariant::Neg1),
            Algorithm::IarCauses,
        );
        assert_eq!(
            answer_query(&req),
            Err(FilterError::InvalidPairing {
                semantics: "brave",
                algorithm: "iar-causes"
            })
        );
    }

    #[test]
    fn self_inconsistent_preprocessing() {
        let mut c = ConflictSet::from_pairs([(A, B)]).unwrap();
        c.add_self_inconsistent(A);
        let k = PrioritizedInstance::new(
            PrioritizedInstance::unlabeled_facts(2),
            c,
            PriorityRelation::from_edges([(A, B)]),
            vec![
                PotentialAnswer {
                    answer_id: "x".into(),
                    causes: vec![FactSet::from([A]), FactSet::from([B])],
                },
                PotentialAnswer {
                    answer_id: "y".into(),
                    causes: vec![FactSet::from([A])],
                },
            ],
        )
        .unwrap();
        let (clean, rep) = remove_self_inconsistent(&k);
        assert_eq!(rep.removed_facts, FactSet::from([A]));
        assert_eq!(rep.dropped_answers, vec!["y".to_string()]);
        assert_eq!(clean.answers().len(), 1);
        assert_eq!(clean.answers()[0].causes, vec![FactSet::from([B])]);
        assert_eq!(clean.conflicts().num_pairs(), 0);
        assert!(clean.priority().is_empty());

        let r = run(&k, Semantics::Ar, RepairType::Pareto, Algorithm::Simple);
        assert_eq!(r.holds, vec![true, false]);
        assert_eq!(r.trivial_answers, BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn trivial_answers_skip_the_solver() {
        let k = PrioritizedInstance::new(
            PrioritizedInstance::unlabeled_facts(3),
            ConflictSet::from_pairs([(A, B)]).unwrap(),
            PriorityRelation::from_edges([(A, B)]),
            vec![
                PotentialAnswer {
                    answer_id: "dominant".into(),
                    causes: vec![FactSet::from([A])],
                },
                PotentialAnswer {
                    answer_id: "free".into(),
                    causes: vec![FactSet::from([G])],
                },
            ],
        )
        .unwrap();
        assert_eq!(extract_trivial_answers(&k).0, vec![0, 1]);
        let r = run(&k, Semantics::Iar, RepairType::Pareto, Algorithm::Simple);
        assert_eq!(r.holds, vec![true, true]);
        assert_eq!(r.solver_calls, 0);
        // Without the priority only the conflict-free answer is trivial.
        let r = run(&k, Semantics::Iar, RepairType::Subset, Algorithm::Simple);
        assert_eq!(r.holds, vec![false, true]);
        assert_eq!(r.trivial_answers, BTreeSet::from(["free".to_string()]));
    }

    #[test]
    fn example_has_no_trivial_answers() {
        let (trivial, rest) = extract_trivial_answers(&example());
        assert!(trivial.is_empty());
        assert_eq!(rest.len(), 1);
    }

    #[test]
    fn iar_fact_cache_is_shared() {
        let k = example().with_answers(vec![
            PotentialAnswer {
                answer_id: "p".into(),
                causes: vec![FactSet::from([A])],
            },
            PotentialAnswer {
                answer_id: "q".into(),
                causes: vec![FactSet::from([A])],
            },
        ]);
        let k = k.unwrap();
        let r = run(&k, Semantics::Iar, RepairType::Completion, Algorithm::IarCauses);
        assert_eq!(r.holds, vec![true, true]);
        assert_eq!(r.solver_calls, 1);
        let r = run(&k, Semantics::Iar, RepairType::Completion, Algorithm::IarFacts);
        assert_eq!(r.holds, vec![true, true]);
    }

    #[test]
    fn classification() {
        let k = example();
        let cfg = SolverConfig::default();
        let opts = EncoderOptions::default();
        assert_eq!(
            classify_answers(&k, RepairType::Completion, cfg, opts).unwrap(),
            vec![AnswerClass::IarNotTrivial]
        );
        assert_eq!(
            classify_answers(&k, RepairType::Pareto, cfg, opts).unwrap(),
            vec![AnswerClass::ArNotIar]
        );
    }

    #[test]
    fn empty_answer_set() {
        let k = example().with_answers(vec![]).unwrap();
        for alg in Algorithm::ALL {
            let r = run(&k, Semantics::Iar, RepairType::Pareto, alg);
            assert!(r.answers.is_empty() && r.complete);
        }
    }

    #[test]
    fn algorithm_names_parse() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>(), Ok(a));
        }
        assert_eq!("AllMaxSAT".parse::<Algorithm>(), Ok(Algorithm::AllMaxSat));
        assert!("bogus".parse::<Algorithm>().is_err());
    }
}
