//! Command-line interface.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use orbits_core::crosscheck::CrossCheckOptions;
use orbits_core::filters::{answer_query, preprocess, Algorithm, FilterRequest};
use orbits_core::generate::{random_instance, InstanceParams};
use orbits_core::oracle::OracleConfig;
use orbits_core::priority::{
    build_random_priority, build_score_priority, is_score_structured, random_scores,
};
use orbits_core::{
    EncodeError, Encoder, EncoderOptions, EncodingSpec, FilterError, MaxVariant, NegVariant,
    RepairType, Semantics,
};
use orbits_sat::SolverConfig;

use crate::bench::{run_bench, write_csv};
use crate::io::{
    build_instance, dense, load_instance, priority_entries, read_json, result_file,
    save_instance, write_json, AnswersFile, InstanceFile, Loaded, PriorityFile,
};
use crate::verify::{run_verify, TrialShape};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Disagreement,
    InvalidCombination,
    BudgetExhausted,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Disagreement => 1,
            Status::InvalidCombination => 2,
            Status::BudgetExhausted => 3,
        }
    }
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s.code())
    }
}

#[derive(Debug, Parser)]
#[command(name = "orbits", version, about = "Filter query answers under prioritized repair semantics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the answers that hold under a semantics and repair notion.
    Filter(FilterArgs),
    /// Generate a priority relation for a knowledge base.
    Genpriority(GenPriorityArgs),
    /// Generate a random instance and answers file.
    Geninstance(GenInstanceArgs),
    /// Compare the pipeline against brute-force repair enumeration.
    Verify(VerifyArgs),
    /// Time filter configurations and write a CSV table.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SemArg {
    Ar,
    Iar,
    Brave,
}

impl From<SemArg> for Semantics {
    fn from(s: SemArg) -> Self {
        match s {
            SemArg::Ar => Semantics::Ar,
            SemArg::Iar => Semantics::Iar,
            SemArg::Brave => Semantics::Brave,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepairArg {
    S,
    P1,
    P2,
    C,
}

impl RepairArg {
    fn parts(self) -> (RepairType, MaxVariant) {
        match self {
            RepairArg::S => (RepairType::Subset, MaxVariant::S),
            RepairArg::P1 => (RepairType::Pareto, MaxVariant::P1),
            RepairArg::P2 => (RepairType::Pareto, MaxVariant::P2),
            RepairArg::C => (RepairType::Completion, MaxVariant::C),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Simple,
    Maxsat,
    Muses,
    Assume,
    Cause,
    Iarcauses,
    Iarfacts,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Simple => Algorithm::Simple,
            AlgoArg::Maxsat => Algorithm::AllMaxSat,
            AlgoArg::Muses => Algorithm::AllMuses,
            AlgoArg::Assume => Algorithm::Assumptions,
            AlgoArg::Cause => Algorithm::CauseByCause,
            AlgoArg::Iarcauses => Algorithm::IarCauses,
            AlgoArg::Iarfacts => Algorithm::IarFacts,
        }
    }
}

fn spec_of(sem: SemArg, repair: RepairArg, neg: u8) -> EncodingSpec {
    let (r, max) = repair.parts();
    let neg = if neg == 1 { NegVariant::Neg1 } else { NegVariant::Neg2 };
    EncodingSpec::new(sem.into(), r, neg).with_max(max)
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Solver seed; affects models and timings, never answers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Conflict budget per solver call.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Largest reachable set for the completion encoding.
    #[arg(long, default_value_t = 64)]
    pub completion_cap: usize,
}

impl SolverArgs {
    fn solver(&self) -> SolverConfig {
        SolverConfig {
            seed: self.seed,
            conflict_budget: self.budget,
        }
    }

    fn encoder(&self) -> EncoderOptions {
        EncoderOptions {
            completion_node_cap: self.completion_cap,
            drop_acyclicity: false,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FilterArgs {
    #[arg(long, value_enum)]
    pub sem: SemArg,
    #[arg(long, value_enum)]
    pub repair: RepairArg,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub neg: u8,
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    #[arg(long)]
    pub kb: PathBuf,
    #[arg(long)]
    pub ans: PathBuf,
    /// Result file; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the multi-answer formula of the non-trivial answers as WCNF.
    #[arg(long)]
    pub dump_cnf: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PriorityModeArg {
    Score,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct GenPriorityArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[arg(long, value_enum)]
    pub mode: PriorityModeArg,
    /// Number of score levels for `score` mode.
    #[arg(long)]
    pub levels: Option<u32>,
    /// Orientation probability for `random` mode.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Priority file; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the knowledge base with the new priority.
    #[arg(long)]
    pub kb_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenInstanceArgs {
    #[arg(long)]
    pub facts: usize,
    #[arg(long)]
    pub conflicts: usize,
    #[arg(long, default_value_t = 0)]
    pub self_inconsistent: usize,
    #[arg(long, default_value_t = 3)]
    pub answers: usize,
    #[arg(long, default_value_t = 3)]
    pub max_causes: usize,
    #[arg(long, default_value_t = 2)]
    pub max_cause_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub kb_out: PathBuf,
    #[arg(long)]
    pub ans_out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mutant {
    /// Leave out the acyclicity constraints of the completion encoding.
    DropAcyc,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 8)]
    pub max_facts: usize,
    #[arg(long, default_value_t = 12)]
    pub max_conflicts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fixture checked before the random trials (with --ans).
    #[arg(long, requires = "ans")]
    pub kb: Option<PathBuf>,
    #[arg(long, requires = "kb")]
    pub ans: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mutate: Option<Mutant>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// JSON report file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[arg(long)]
    pub ans: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub sem: Vec<SemArg>,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub repair: Vec<RepairArg>,
    #[arg(long, value_delimiter = ',', default_value = "1", value_parser = clap::value_parser!(u8).range(1..=2))]
    pub neg: Vec<u8>,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub algo: Vec<AlgoArg>,
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// CSV file; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

pub fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Filter(a) => run_filter(&a),
        Command::Genpriority(a) => run_genpriority(&a),
        Command::Geninstance(a) => run_geninstance(&a),
        Command::Verify(a) => run_verify_cmd(&a),
        Command::Bench(a) => run_bench_cmd(&a),
    }
}

fn is_invalid_combination(e: &FilterError) -> bool {
    matches!(
        e,
        FilterError::InvalidPairing { .. } | FilterError::Encode(EncodeError::InvalidSpec(_))
    )
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn run_filter(a: &FilterArgs) -> Result<Status> {
    let loaded = load_instance(&a.kb, &a.ans)?;
    let spec = spec_of(a.sem, a.repair, a.neg);
    let algorithm = Algorithm::from(a.algo);
    let mut req = FilterRequest::new(&loaded.instance, spec, algorithm);
    req.solver = a.solver.solver();
    req.encoder = a.solver.encoder();
    let report = match answer_query(&req) {
        Ok(r) => r,
        Err(e) if is_invalid_combination(&e) => {
            eprintln!("error: {e}");
            return Ok(Status::InvalidCombination);
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(path) = &a.dump_cnf {
        dump_cnf(&loaded, spec, req.encoder, path)?;
    }
    let result = result_file(&loaded, &spec, algorithm.name(), &report);
    let text = serde_json::to_string_pretty(&result)? + "\n";
    emit(a.out.as_ref(), &text)?;
    if report.complete {
        Ok(Status::Ok)
    } else {
        eprintln!("warning: solver budget exhausted; result is partial");
        Ok(Status::BudgetExhausted)
    }
}

fn dump_cnf(loaded: &Loaded, spec: EncodingSpec, opts: EncoderOptions, path: &PathBuf) -> Result<()> {
    let pre = preprocess(&loaded.instance, spec.repair);
    let enc = Encoder::new(&pre.reduced, spec, opts)?;
    let all: Vec<usize> = (0..pre.reduced.answers().len()).collect();
    let f = enc.multi_answers(&all)?;
    fs::write(path, f.export_dimacs(true)).with_context(|| format!("writing {}", path.display()))
}

pub fn run_genpriority(a: &GenPriorityArgs) -> Result<Status> {
    let loaded = load_instance_kb_only(&a.kb)?;
    let conflicts = loaded.instance.conflicts();
    let priority = match a.mode {
        PriorityModeArg::Score => {
            let Some(levels) = a.levels.filter(|&l| l >= 1) else {
                eprintln!("error: score mode needs --levels of at least 1");
                return Ok(Status::InvalidCombination);
            };
            build_score_priority(conflicts, &random_scores(conflicts, levels, a.seed))?
        }
        PriorityModeArg::Random => {
            let Some(p) = a.p.filter(|p| (0.0..=1.0).contains(p)) else {
                eprintln!("error: random mode needs --p within [0, 1]");
                return Ok(Status::InvalidCombination);
            };
            build_random_priority(conflicts, p, a.seed)?
        }
    };
    let file = PriorityFile {
        priority: priority_entries(&loaded, &priority),
        score_structured: is_score_structured(conflicts, &priority),
    };
    emit(a.out.as_ref(), &(serde_json::to_string_pretty(&file)? + "\n"))?;
    if let Some(path) = &a.kb_out {
        let with = Loaded {
            instance: loaded.instance.with_priority(priority)?,
            ..loaded.clone()
        };
        let (kb, _) = crate::io::instance_files(&with);
        write_json(path, &kb)?;
    }
    Ok(Status::Ok)
}

/// A knowledge base without answers.
fn load_instance_kb_only(kb: &Path) -> Result<Loaded> {
    let file: InstanceFile = read_json(kb)?;
    let none = AnswersFile {
        query: String::new(),
        answers: Vec::new(),
    };
    build_instance(&file, &none).with_context(|| format!("invalid knowledge base in {}", kb.display()))
}

pub fn run_geninstance(a: &GenInstanceArgs) -> Result<Status> {
    let params = InstanceParams {
        facts: a.facts,
        conflicts: a.conflicts,
        self_inconsistent: a.self_inconsistent,
        answers: a.answers,
        max_causes: a.max_causes,
        max_cause_size: a.max_cause_size,
    };
    let inst = match random_instance(&params, a.seed) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(Status::InvalidCombination);
        }
    };
    save_instance(&dense(inst, "q"), &a.kb_out, &a.ans_out)?;
    Ok(Status::Ok)
}

pub fn run_verify_cmd(a: &VerifyArgs) -> Result<Status> {
    let oracle = OracleConfig::default();
    if a.max_facts > oracle.fact_cap || a.max_facts < 2 {
        bail!("--max-facts must lie in 2..={}", oracle.fact_cap);
    }
    let fixtures = match (&a.kb, &a.ans) {
        (Some(kb), Some(ans)) => vec![load_instance(kb, ans)?.instance],
        _ => Vec::new(),
    };
    let opts = CrossCheckOptions {
        encoder: EncoderOptions {
            drop_acyclicity: a.mutate == Some(Mutant::DropAcyc),
            ..Default::default()
        },
        solver: SolverConfig::default(),
        oracle,
    };
    let shape = TrialShape {
        max_facts: a.max_facts,
        max_conflicts: a.max_conflicts,
        ..Default::default()
    };
    let (report, _) = run_verify(&fixtures, a.trials, a.seed, &shape, &opts, a.jobs)?;
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "instances: {}  runs: {}  mismatching instances: {}  mismatches: {}",
        report.instances, report.runs, report.mismatching_instances, report.mismatches
    )?;
    if let Some(c) = &report.first_counterexample {
        writeln!(out, "first counterexample:\n{}", serde_json::to_string_pretty(c)?)?;
    }
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    Ok(if report.passed() {
        Status::Ok
    } else {
        Status::Disagreement
    })
}

pub fn run_bench_cmd(a: &BenchArgs) -> Result<Status> {
    let loaded = load_instance(&a.kb, &a.ans)?;
    let mut cells = Vec::new();
    for &sem in &a.sem {
        for &repair in &a.repair {
            for &neg in &a.neg {
                for &algo in &a.algo {
                    cells.push((spec_of(sem, repair, neg), Algorithm::from(algo)));
                }
            }
        }
    }
    let rows = match run_bench(
        &loaded.instance,
        &cells,
        a.repeat,
        a.solver.solver(),
        a.solver.encoder(),
        a.jobs,
    ) {
        Ok(rows) => rows,
        Err(e) if is_invalid_combination(&e) => {
            eprintln!("error: {e}");
            return Ok(Status::InvalidCombination);
        }
        Err(e) => return Err(e.into()),
    };
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows)?;
    emit(a.out.as_ref(), &String::from_utf8(buf)?)?;
    if rows.iter().all(|r| r.complete) {
        Ok(Status::Ok)
    } else {
        Ok(Status::BudgetExhausted)
    }
}
