//! Randomized agreement checks between the SAT pipeline and the oracle.

use anyhow::{Context, Result};
use orbits_core::crosscheck::{cross_check, CrossCheckOptions, Mismatch};
use orbits_core::generate::{random_instance, InstanceParams};
use orbits_core::priority::{build_random_priority, build_score_priority, random_scores};
use orbits_core::{PrioritizedInstance, PriorityRelation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::io::{dense, instance_files, AnswersFile, InstanceFile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorityMode {
    Empty,
    Score(u32),
    Random(f64),
}

impl PriorityMode {
    /// The rotation used by random trials.
    pub const MIXED: [PriorityMode; 5] = [
        PriorityMode::Empty,
        PriorityMode::Score(2),
        PriorityMode::Score(5),
        PriorityMode::Random(0.5),
        PriorityMode::Random(0.8),
    ];

    pub fn describe(&self) -> String {
        match self {
            PriorityMode::Empty => "empty".into(),
            PriorityMode::Score(n) => format!("score n={n}"),
            PriorityMode::Random(p) => format!("random p={p}"),
        }
    }

    pub fn build(&self, inst: &PrioritizedInstance, seed: u64) -> PriorityRelation {
        match *self {
            PriorityMode::Empty => PriorityRelation::new(),
            PriorityMode::Score(levels) => {
                let scores = random_scores(inst.conflicts(), levels, seed);
                build_score_priority(inst.conflicts(), &scores).expect("every conflicting fact is scored")
            }
            PriorityMode::Random(p) => {
                build_random_priority(inst.conflicts(), p, seed).expect("probability in range")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialShape {
    pub max_facts: usize,
    pub max_conflicts: usize,
    pub answers: usize,
    /// Whether some trials mark one fact self-inconsistent.
    pub self_inconsistent: bool,
}

impl Default for TrialShape {
    fn default() -> Self {
        TrialShape {
            max_facts: 8,
            max_conflicts: 12,
            answers: 3,
            self_inconsistent: true,
        }
    }
}

/// Trial `index` of the stream for `seed`, with the priority mode taken
/// from `modes` in rotation.
pub fn trial_instance(
    seed: u64,
    index: u64,
    shape: &TrialShape,
    modes: &[PriorityMode],
) -> (PrioritizedInstance, PriorityMode) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = rng.gen_range(2..=shape.max_facts.max(2));
    let max_c = (n * (n - 1) / 2).min(shape.max_conflicts);
    let params = InstanceParams {
        facts: n,
        conflicts: rng.gen_range(0..=max_c),
        self_inconsistent: usize::from(shape.self_inconsistent && rng.gen_bool(0.25)),
        answers: shape.answers,
        max_causes: 3,
        max_cause_size: 2,
    };
    let base = random_instance(&params, rng.gen()).expect("parameters are feasible");
    let mode = modes[(index as usize) % modes.len()];
    let prio = mode.build(&base, rng.gen());
    (base.with_priority(prio).expect("generated priorities are valid"), mode)
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    /// `None` for a supplied fixture.
    pub trial: Option<u64>,
    pub mode: Option<PriorityMode>,
    pub instance: PrioritizedInstance,
    pub runs: usize,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub trial: Option<u64>,
    pub priority_mode: Option<String>,
    pub mismatches: Vec<String>,
    pub kb: InstanceFile,
    pub answers: AnswersFile,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub instances: usize,
    pub runs: usize,
    pub mismatching_instances: usize,
    pub mismatches: usize,
    pub first_counterexample: Option<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

fn check(
    trial: Option<u64>,
    mode: Option<PriorityMode>,
    instance: PrioritizedInstance,
    opts: &CrossCheckOptions,
) -> Result<TrialOutcome> {
    let c = cross_check(&instance, opts).with_context(|| match trial {
        Some(t) => format!("trial {t}"),
        None => "fixture".to_string(),
    })?;
    Ok(TrialOutcome {
        trial,
        mode,
        instance,
        runs: c.runs,
        mismatches: c.mismatches,
    })
}

/// Checks `fixtures` and then `trials` random instances. With `jobs > 1`
/// trials run on a thread pool; the outcome order is unaffected.
pub fn run_verify(
    fixtures: &[PrioritizedInstance],
    trials: u64,
    seed: u64,
    shape: &TrialShape,
    opts: &CrossCheckOptions,
    jobs: usize,
) -> Result<(VerifyReport, Vec<TrialOutcome>)> {
    let mut outcomes = Vec::new();
    for f in fixtures {
        outcomes.push(check(None, None, f.clone(), opts)?);
    }
    let one = |t: u64| {
        let (inst, mode) = trial_instance(seed, t, shape, &PriorityMode::MIXED);
        check(Some(t), Some(mode), inst, opts)
    };
    let random: Vec<TrialOutcome> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
        pool.install(|| (0..trials).into_par_iter().map(one).collect::<Result<_>>())?
    } else {
        (0..trials).map(one).collect::<Result<_>>()?
    };
    outcomes.extend(random);

    let first = outcomes.iter().find(|o| !o.mismatches.is_empty()).map(|o| {
        let (kb, answers) = instance_files(&dense(o.instance.clone(), "verify"));
        Counterexample {
            trial: o.trial,
            priority_mode: o.mode.map(|m| m.describe()),
            mismatches: o.mismatches.iter().map(ToString::to_string).collect(),
            kb,
            answers,
        }
    });
    let report = VerifyReport {
        instances: outcomes.len(),
        runs: outcomes.iter().map(|o| o.runs).sum(),
        mismatching_instances: outcomes.iter().filter(|o| !o.mismatches.is_empty()).count(),
        mismatches: outcomes.iter().map(|o| o.mismatches.len()).sum(),
        first_counterexample: first,
    };
    Ok((report, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_are_reproducible_and_bounded() {
        let shape = TrialShape::default();
        for t in 0..40 {
            let (a, ma) = trial_instance(7, t, &shape, &PriorityMode::MIXED);
            let (b, mb) = trial_instance(7, t, &shape, &PriorityMode::MIXED);
            assert_eq!(a, b);
            assert_eq!(ma, mb);
            assert!(a.num_facts() <= 8);
            assert!(a.conflicts().num_pairs() <= 12);
            assert_eq!(a.answers().len(), 3);
        }
    }

    #[test]
    fn parallel_and_serial_agree() {
        let opts = CrossCheckOptions::default();
        let shape = TrialShape::default();
        let (a, _) = run_verify(&[], 6, 1, &shape, &opts, 1).unwrap();
        let (b, _) = run_verify(&[], 6, 1, &shape, &opts, 3).unwrap();
        assert_eq!((a.runs, a.mismatches), (b.runs, b.mismatches));
        assert!(a.passed());
    }
}
