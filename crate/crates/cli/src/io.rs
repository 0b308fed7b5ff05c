//! JSON files for instances, answers, priorities and results.
//!
//! Fact ids in files are arbitrary non-negative integers. On load they are
//! renumbered densely in order of appearance; the original ids are kept for
//! writing files back.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use orbits_core::filters::FilterReport;
use orbits_core::{
    ConflictSet, EncodingSpec, Fact, FactId, FactSet, PotentialAnswer, PrioritizedInstance,
    PriorityRelation,
};
use serde::{Deserialize, Serialize};

pub const RESULT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactEntry {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub facts: Vec<FactEntry>,
    #[serde(default)]
    pub conflicts: Vec<Vec<u64>>,
    #[serde(default)]
    pub priority: Vec<[u64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerEntry {
    pub id: String,
    pub causes: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnswersFile {
    #[serde(default)]
    pub query: String,
    pub answers: Vec<AnswerEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorityFile {
    pub priority: Vec<[u64; 2]>,
    pub score_structured: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingsMs {
    pub preprocessing: f64,
    pub encoding: f64,
    pub solving: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsEntry {
    pub solver_calls: u64,
    pub solves: u64,
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub learnt_clauses: u64,
    pub restarts: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub version: u32,
    pub query: String,
    pub semantics: String,
    pub repair: String,
    pub encoding: String,
    pub algorithm: String,
    pub complete: bool,
    pub trivial: Vec<String>,
    pub answers: Vec<String>,
    pub removed_self_inconsistent: Vec<u64>,
    pub timings_ms: TimingsMs,
    pub solver_stats: StatsEntry,
}

/// A loaded instance with the file ids of its facts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loaded {
    pub instance: PrioritizedInstance,
    /// File id of each dense fact id.
    pub file_ids: Vec<u64>,
    pub query: String,
}

impl Loaded {
    pub fn file_id(&self, a: FactId) -> u64 {
        self.file_ids[a.index()]
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        anyhow!(
            "{}: line {}, column {}: {}",
            path.display(),
            e.line(),
            e.column(),
            e
        )
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn load_instance(kb_path: &Path, answers_path: &Path) -> Result<Loaded> {
    let kb: InstanceFile = read_json(kb_path)?;
    let ans: AnswersFile = read_json(answers_path)?;
    build_instance(&kb, &ans).with_context(|| {
        format!(
            "invalid instance in {} / {}",
            kb_path.display(),
            answers_path.display()
        )
    })
}

pub fn build_instance(kb: &InstanceFile, ans: &AnswersFile) -> Result<Loaded> {
    let mut index = BTreeMap::new();
    let mut facts = Vec::with_capacity(kb.facts.len());
    for (i, f) in kb.facts.iter().enumerate() {
        if index.insert(f.id, FactId(i as u32)).is_some() {
            bail!("fact id {} appears twice", f.id);
        }
        facts.push(Fact {
            id: FactId(i as u32),
            label: f.label.clone(),
        });
    }
    let resolve = |id: u64, what: &str| -> Result<FactId> {
        index
            .get(&id)
            .copied()
            .ok_or_else(|| anyhow!("{what} refers to unknown fact id {id}"))
    };
    let mut conflicts = ConflictSet::new();
    for c in &kb.conflicts {
        match c.as_slice() {
            [a] => {
                conflicts.add_self_inconsistent(resolve(*a, "conflict")?);
            }
            [a, b] => {
                let (a, b) = (resolve(*a, "conflict")?, resolve(*b, "conflict")?);
                if a == b {
                    conflicts.add_self_inconsistent(a);
                } else {
                    conflicts.add_pair(a, b)?;
                }
            }
            other => bail!("conflict {other:?} must list one or two fact ids"),
        }
    }
    let mut priority = PriorityRelation::new();
    for &[hi, lo] in &kb.priority {
        priority.insert(resolve(hi, "priority")?, resolve(lo, "priority")?);
    }
    let mut answers = Vec::with_capacity(ans.answers.len());
    for a in &ans.answers {
        let causes = a
            .causes
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&id| resolve(id, &format!("answer `{}`", a.id)))
                    .collect::<Result<FactSet>>()
            })
            .collect::<Result<Vec<_>>>()?;
        answers.push(PotentialAnswer {
            answer_id: a.id.clone(),
            causes,
        });
    }
    let instance = PrioritizedInstance::new(facts, conflicts, priority, answers)?;
    Ok(Loaded {
        instance,
        file_ids: kb.facts.iter().map(|f| f.id).collect(),
        query: ans.query.clone(),
    })
}

/// The instance as files, using the file ids of `loaded`.
pub fn instance_files(loaded: &Loaded) -> (InstanceFile, AnswersFile) {
    let k = &loaded.instance;
    let id = |a: FactId| loaded.file_id(a);
    let facts = k
        .facts()
        .iter()
        .map(|f| FactEntry {
            id: id(f.id),
            label: f.label.clone(),
        })
        .collect();
    let mut conflicts: Vec<Vec<u64>> = k
        .conflicts()
        .self_inconsistent()
        .iter()
        .map(|&a| vec![id(a)])
        .collect();
    conflicts.extend(k.conflicts().pairs().map(|(a, b)| vec![id(a), id(b)]));
    let priority = priority_entries(loaded, k.priority());
    let answers = k
        .answers()
        .iter()
        .map(|a| AnswerEntry {
            id: a.answer_id.clone(),
            causes: a
                .causes
                .iter()
                .map(|c| c.iter().map(|&f| id(f)).collect())
                .collect(),
        })
        .collect();
    (
        InstanceFile {
            facts,
            conflicts,
            priority,
        },
        AnswersFile {
            query: loaded.query.clone(),
            answers,
        },
    )
}

pub fn priority_entries(loaded: &Loaded, p: &PriorityRelation) -> Vec<[u64; 2]> {
    p.edges()
        .map(|(a, b)| [loaded.file_id(a), loaded.file_id(b)])
        .collect()
}

/// Wraps a generated instance whose fact ids are already dense.
pub fn dense(instance: PrioritizedInstance, query: &str) -> Loaded {
    let file_ids = (0..instance.num_facts() as u64).collect();
    Loaded {
        instance,
        file_ids,
        query: query.to_string(),
    }
}

pub fn save_instance(loaded: &Loaded, kb_path: &Path, answers_path: &Path) -> Result<()> {
    let (kb, ans) = instance_files(loaded);
    write_json(kb_path, &kb)?;
    write_json(answers_path, &ans)
}

pub fn repair_label(spec: &EncodingSpec) -> String {
    use orbits_core::{MaxVariant, RepairType};
    match (spec.repair, spec.max) {
        (RepairType::Subset, _) => "S".into(),
        (RepairType::Pareto, m) => m.name().into(),
        (RepairType::Completion, MaxVariant::C) => "C".into(),
        (RepairType::Completion, m) => format!("C/{}", m.name()),
    }
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

pub fn result_file(
    loaded: &Loaded,
    spec: &EncodingSpec,
    algorithm: &str,
    report: &FilterReport,
) -> ResultFile {
    let k = &loaded.instance;
    // Input order, not set order, for readability.
    let ordered = |pred: &dyn Fn(usize) -> bool| -> Vec<String> {
        (0..k.answers().len())
            .filter(|&i| pred(i))
            .map(|i| k.answers()[i].answer_id.clone())
            .collect()
    };
    let t = &report.timings;
    let s = &report.solver_stats;
    ResultFile {
        version: RESULT_VERSION,
        query: loaded.query.clone(),
        semantics: spec.sem.name().into(),
        repair: repair_label(spec),
        encoding: spec.neg.name().into(),
        algorithm: algorithm.into(),
        complete: report.complete,
        trivial: ordered(&|i| report.trivial.contains(&i)),
        answers: ordered(&|i| report.holds[i]),
        removed_self_inconsistent: report
            .removed_self_inconsistent
            .iter()
            .map(|&a| loaded.file_id(a))
            .collect(),
        timings_ms: TimingsMs {
            preprocessing: ms(t.preprocessing),
            encoding: ms(t.encoding),
            solving: ms(t.solving),
            total: ms(t.total()),
        },
        solver_stats: StatsEntry {
            solver_calls: report.solver_calls,
            solves: s.solves,
            decisions: s.decisions,
            conflicts: s.conflicts,
            propagations: s.propagations,
            learnt_clauses: s.learnt_clauses,
            restarts: s.restarts,
        },
    }
}
