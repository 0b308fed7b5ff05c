//! Propositional encodings of the repair-based semantics.
//!
//! Formulas are first built over symbolic [`VarKey`] literals and then
//! interned into a [`CnfFormula`] whose variables are dense indices.
//! Under subset repairs the priority relation is ignored throughout.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;

use orbits_sat::{dimacs, Lit, Var};

use crate::error::EncodeError;
use crate::model::{FactId, FactSet, PrioritizedInstance};
use crate::priority::is_score_structured;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    Ar,
    Iar,
    Brave,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [Semantics::Ar, Semantics::Iar, Semantics::Brave];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Ar => "AR",
            Semantics::Iar => "IAR",
            Semantics::Brave => "brave",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RepairType {
    Subset,
    Pareto,
    Completion,
}

impl RepairType {
    pub const ALL: [RepairType; 3] = [RepairType::Subset, RepairType::Pareto, RepairType::Completion];

    pub fn name(self) -> &'static str {
        match self {
            RepairType::Subset => "S",
            RepairType::Pareto => "P",
            RepairType::Completion => "C",
        }
    }
}

/// Which maximality formula is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MaxVariant {
    S,
    P1,
    P2,
    C,
}

impl MaxVariant {
    pub fn name(self) -> &'static str {
        match self {
            MaxVariant::S => "S",
            MaxVariant::P1 => "P1",
            MaxVariant::P2 => "P2",
            MaxVariant::C => "C",
        }
    }
}

/// How a cause is contradicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NegVariant {
    Neg1,
    Neg2,
}

impl NegVariant {
    pub fn name(self) -> &'static str {
        match self {
            NegVariant::Neg1 => "neg1",
            NegVariant::Neg2 => "neg2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EncodingSpec {
    pub sem: Semantics,
    pub repair: RepairType,
    pub max: MaxVariant,
    pub neg: NegVariant,
}

impl EncodingSpec {
    /// The default maximality formula for `repair`.
    pub fn new(sem: Semantics, repair: RepairType, neg: NegVariant) -> Self {
        let max = match repair {
            RepairType::Subset => MaxVariant::S,
            RepairType::Pareto => MaxVariant::P1,
            RepairType::Completion => MaxVariant::C,
        };
        EncodingSpec {
            sem,
            repair,
            max,
            neg,
        }
    }

    pub fn with_max(mut self, max: MaxVariant) -> Self {
        self.max = max;
        self
    }

    /// Completion repairs may use a Pareto maximality formula only when the
    /// priority is score-structured, where both repair notions coincide.
    pub fn validate(&self, score_structured: bool) -> Result<(), EncodeError> {
        let ok = match (self.repair, self.max) {
            (RepairType::Subset, MaxVariant::S) => true,
            (RepairType::Pareto, MaxVariant::P1 | MaxVariant::P2) => true,
            (RepairType::Completion, MaxVariant::C) => true,
            (RepairType::Completion, MaxVariant::P1 | MaxVariant::P2) => score_structured,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(EncodeError::InvalidSpec(format!(
                "repair {} with maximality {}{}",
                self.repair.name(),
                self.max.name(),
                if self.repair == RepairType::Completion {
                    " requires a score-structured priority"
                } else {
                    ""
                }
            )))
        }
    }

    /// Every valid combination for `sem`, given whether the priority is
    /// score-structured.
    pub fn all_for(sem: Semantics, score_structured: bool) -> Vec<EncodingSpec> {
        let mut out = Vec::new();
        for neg in [NegVariant::Neg1, NegVariant::Neg2] {
            for (repair, max) in [
                (RepairType::Subset, MaxVariant::S),
                (RepairType::Pareto, MaxVariant::P1),
                (RepairType::Pareto, MaxVariant::P2),
                (RepairType::Completion, MaxVariant::C),
                (RepairType::Completion, MaxVariant::P1),
                (RepairType::Completion, MaxVariant::P2),
            ] {
                let s = EncodingSpec {
                    sem,
                    repair,
                    max,
                    neg,
                };
                if s.validate(score_structured).is_ok() {
                    out.push(s);
                }
            }
        }
        out
    }
}

impl fmt::Display for EncodingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-{} max={} {}",
            self.repair.name(),
            self.sem.name(),
            self.max.name(),
            self.neg.name()
        )
    }
}

/// Variable namespace; `None` is the shared one.
pub type Ns = Option<u32>;

/// Symbolic name of a propositional variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKey {
    Fact(FactId),
    NsFact(u32, FactId),
    CauseSel { answer: u32, cause: u32 },
    Answer(u32),
    AssumeFact(FactId),
    /// `from` is selected and preferred to `to`.
    PrefEdge { ns: Ns, from: FactId, to: FactId },
    /// `hi` is above `lo` in the chosen completion.
    CompOrder { ns: Ns, hi: FactId, lo: FactId },
    /// Transitive closure of the completion.
    Trans { ns: Ns, from: FactId, to: FactId },
}

impl VarKey {
    pub fn fact(ns: Ns, a: FactId) -> VarKey {
        match ns {
            None => VarKey::Fact(a),
            Some(k) => VarKey::NsFact(k, a),
        }
    }

    /// The fact behind a `Fact`/`NsFact` key, when in namespace `ns`.
    pub fn fact_in(&self, ns: Ns) -> Option<FactId> {
        match (*self, ns) {
            (VarKey::Fact(a), None) => Some(a),
            (VarKey::NsFact(k, a), Some(j)) if k == j => Some(a),
            _ => None,
        }
    }
}

fn ns_suffix(ns: Ns) -> String {
    ns.map(|k| format!("^{k}")).unwrap_or_default()
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarKey::Fact(a) => write!(f, "x[{a}]"),
            VarKey::NsFact(k, a) => write!(f, "x^{k}[{a}]"),
            VarKey::CauseSel { answer, cause } => write!(f, "sel[a{answer},c{cause}]"),
            VarKey::Answer(i) => write!(f, "ans[a{i}]"),
            VarKey::AssumeFact(a) => write!(f, "y[{a}]"),
            VarKey::PrefEdge { ns, from, to } => write!(f, "pref{}[{from}->{to}]", ns_suffix(ns)),
            VarKey::CompOrder { ns, hi, lo } => write!(f, "ord{}[{hi}>{lo}]", ns_suffix(ns)),
            VarKey::Trans { ns, from, to } => write!(f, "t{}[{from},{to}]", ns_suffix(ns)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KeyLit {
    pub key: VarKey,
    pub positive: bool,
}

impl KeyLit {
    pub fn pos(key: VarKey) -> KeyLit {
        KeyLit {
            key,
            positive: true,
        }
    }

    pub fn neg(key: VarKey) -> KeyLit {
        KeyLit {
            key,
            positive: false,
        }
    }
}

impl fmt::Display for KeyLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.key)
        } else {
            write!(f, "-{}", self.key)
        }
    }
}

pub type KeyClause = Vec<KeyLit>;

fn push_unique(c: &mut KeyClause, l: KeyLit) {
    if !c.contains(&l) {
        c.push(l);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncoderOptions {
    /// Largest reachable set for which the completion formula is built.
    pub completion_node_cap: usize,
    /// Omits the acyclicity constraints; only for mutation testing.
    pub drop_acyclicity: bool,
}

impl Default for EncoderOptions {
    fn default() -> Self {
        EncoderOptions {
            completion_node_cap: 64,
            drop_acyclicity: false,
        }
    }
}

fn check_cause(inst: &PrioritizedInstance, cause: &FactSet) -> Result<(), EncodeError> {
    match cause.iter().find(|&&a| inst.is_self_inconsistent(a)) {
        Some(&a) => Err(EncodeError::SelfInconsistentInCause(a)),
        None => Ok(()),
    }
}

/// Clauses forcing some fact of `cause` to be contradicted. With an
/// activator `y`, `-y` joins the first clause only.
pub fn encode_neg_cause(
    inst: &PrioritizedInstance,
    cause: &FactSet,
    variant: NegVariant,
    ns: Ns,
    activator: Option<VarKey>,
) -> Result<Vec<KeyClause>, EncodeError> {
    check_cause(inst, cause)?;
    let mut first = KeyClause::new();
    let mut rest = Vec::new();
    match variant {
        NegVariant::Neg1 => {
            for &a in cause {
                for &b in inst.non_dominated_contradictors(a) {
                    push_unique(&mut first, KeyLit::pos(VarKey::fact(ns, b)));
                }
            }
        }
        NegVariant::Neg2 => {
            for &a in cause {
                first.push(KeyLit::neg(VarKey::fact(ns, a)));
                let mut c = vec![KeyLit::pos(VarKey::fact(ns, a))];
                for &b in inst.non_dominated_contradictors(a) {
                    push_unique(&mut c, KeyLit::pos(VarKey::fact(ns, b)));
                }
                rest.push(c);
            }
        }
    }
    if let Some(y) = activator {
        first.insert(0, KeyLit::neg(y));
    }
    let mut out = vec![first];
    out.extend(rest);
    Ok(out)
}

/// Contradicts every cause of answer `index`, in the shared namespace.
pub fn encode_neg_query(
    inst: &PrioritizedInstance,
    index: usize,
    variant: NegVariant,
    multi: bool,
) -> Result<Vec<KeyClause>, EncodeError> {
    let activator = multi.then_some(VarKey::Answer(index as u32));
    let mut out = Vec::new();
    for cause in &inst.answers()[index].causes {
        out.extend(encode_neg_cause(inst, cause, variant, None, activator)?);
    }
    Ok(out)
}

pub fn encode_pos_cause(cause: &FactSet, ns: Ns) -> Vec<KeyClause> {
    cause
        .iter()
        .map(|&a| vec![KeyLit::pos(VarKey::fact(ns, a))])
        .collect()
}

/// Selects some cause of answer `index` and forces its facts.
pub fn encode_pos_query(inst: &PrioritizedInstance, index: usize, multi: bool) -> Vec<KeyClause> {
    let answer = &inst.answers()[index];
    let sel = |c: usize| VarKey::CauseSel {
        answer: index as u32,
        cause: c as u32,
    };
    let mut first: KeyClause = Vec::new();
    if multi {
        first.push(KeyLit::neg(VarKey::Answer(index as u32)));
    }
    first.extend((0..answer.causes.len()).map(|c| KeyLit::pos(sel(c))));
    let mut out = vec![first];
    for (c, cause) in answer.causes.iter().enumerate() {
        for &a in cause {
            out.push(vec![KeyLit::neg(sel(c)), KeyLit::pos(VarKey::Fact(a))]);
        }
    }
    out
}

pub fn encode_consistency(inst: &PrioritizedInstance, scope: &FactSet, ns: Ns) -> Vec<KeyClause> {
    let mut out = Vec::new();
    for &a in scope {
        for &b in inst.neighbors(a) {
            if a < b && scope.contains(&b) {
                out.push(vec![
                    KeyLit::neg(VarKey::fact(ns, a)),
                    KeyLit::neg(VarKey::fact(ns, b)),
                ]);
            }
        }
    }
    out
}

/// Facts whose variable (in namespace `ns`) occurs in `clauses`.
pub fn facts_in(clauses: &[KeyClause], ns: Ns) -> FactSet {
    clauses
        .iter()
        .flatten()
        .filter_map(|l| l.key.fact_in(ns))
        .collect()
}

/// Maximality constraints over `scope`, with the facts they mention.
pub fn encode_max(
    inst: &PrioritizedInstance,
    variant: MaxVariant,
    scope: &FactSet,
    ns: Ns,
    opts: &EncoderOptions,
) -> Result<(Vec<KeyClause>, FactSet), EncodeError> {
    let x = |a: FactId| VarKey::fact(ns, a);
    let mut out: Vec<KeyClause> = Vec::new();
    match variant {
        MaxVariant::S => {}
        MaxVariant::P1 => {
            for a in inst.reachable(scope) {
                let mut c = vec![KeyLit::pos(x(a))];
                c.extend(inst.non_dominated_contradictors(a).iter().map(|&b| KeyLit::pos(x(b))));
                out.push(c);
            }
        }
        MaxVariant::P2 => {
            for a in inst.reachable_minus(scope) {
                for &b in inst.dominators(a) {
                    let mut c = vec![KeyLit::neg(x(a))];
                    c.extend(inst.non_dominated_contradictors(b).iter().map(|&g| KeyLit::pos(x(g))));
                    out.push(c);
                }
            }
        }
        MaxVariant::C => {
            let r = inst.reachable(scope);
            if r.len() > opts.completion_node_cap {
                return Err(EncodeError::CapacityExceeded {
                    nodes: r.len(),
                    cap: opts.completion_node_cap,
                });
            }
            encode_completion_max(inst, &r, ns, opts.drop_acyclicity, &mut out);
        }
    }
    let used = facts_in(&out, ns);
    Ok((out, used))
}

fn encode_completion_max(
    inst: &PrioritizedInstance,
    r: &FactSet,
    ns: Ns,
    drop_acyclicity: bool,
    out: &mut Vec<KeyClause>,
) {
    let x = |a: FactId| VarKey::fact(ns, a);
    let edge = |from: FactId, to: FactId| VarKey::PrefEdge { ns, from, to };
    let ord = |hi: FactId, lo: FactId| VarKey::CompOrder { ns, hi, lo };
    let t = |from: FactId, to: FactId| VarKey::Trans { ns, from, to };
    let inside = |a: FactId| -> Vec<FactId> {
        inst.neighbors(a)
            .iter()
            .copied()
            .filter(|b| r.contains(b))
            .collect()
    };

    // Preference: an omitted fact needs a selected, preferred contradictor.
    for &a in r {
        let mut c = vec![KeyLit::pos(x(a))];
        c.extend(inside(a).into_iter().map(|b| KeyLit::pos(edge(b, a))));
        out.push(c);
    }
    for &a in r {
        for b in inside(a) {
            out.push(vec![KeyLit::neg(edge(b, a)), KeyLit::pos(x(b))]);
            out.push(vec![KeyLit::neg(edge(b, a)), KeyLit::pos(ord(b, a))]);
        }
    }

    // Completion: exactly one orientation per pair, extending the priority.
    for &a in r {
        for b in inside(a) {
            if a < b {
                out.push(vec![KeyLit::pos(ord(a, b)), KeyLit::pos(ord(b, a))]);
                out.push(vec![KeyLit::neg(ord(a, b)), KeyLit::neg(ord(b, a))]);
            }
        }
    }
    for &a in r {
        for b in inside(a) {
            if inst.prefers(a, b) {
                out.push(vec![KeyLit::pos(ord(a, b))]);
            }
        }
    }

    if drop_acyclicity {
        return;
    }
    // Acyclicity through the transitive closure of the orientation.
    for &a in r {
        for b in inside(a) {
            out.push(vec![KeyLit::neg(ord(a, b)), KeyLit::pos(t(a, b))]);
            out.push(vec![KeyLit::neg(ord(a, b)), KeyLit::neg(t(b, a))]);
        }
    }
    for &a in r {
        for &b in r {
            if a == b {
                continue;
            }
            for g in inside(b) {
                if g == a {
                    continue;
                }
                out.push(vec![
                    KeyLit::neg(t(a, b)),
                    KeyLit::neg(ord(b, g)),
                    KeyLit::pos(t(a, g)),
                ]);
            }
        }
    }
}

/// Fact sets a sub-formula ranges over: the facts of the answer part, and
/// those together with the facts of the maximality part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    pub ns: Ns,
    pub first: FactSet,
    pub second: FactSet,
}

/// Dense interning of [`VarKey`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    keys: Vec<VarKey>,
    index: HashMap<VarKey, Var>,
}

impl Registry {
    pub fn intern(&mut self, key: VarKey) -> Var {
        if let Some(&v) = self.index.get(&key) {
            return v;
        }
        let v = Var(self.keys.len() as u32);
        self.keys.push(key);
        self.index.insert(key, v);
        v
    }

    pub fn get(&self, key: &VarKey) -> Option<Var> {
        self.index.get(key).copied()
    }

    pub fn key(&self, v: Var) -> VarKey {
        self.keys[v.index()]
    }

    pub fn keys(&self) -> &[VarKey] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    registry: Registry,
    hard: Vec<Vec<Lit>>,
    soft_units: Vec<Lit>,
    scopes: Vec<Scope>,
}

impl CnfFormula {
    fn add_clauses(&mut self, clauses: Vec<KeyClause>) {
        for c in clauses {
            let lits = c
                .iter()
                .map(|l| Lit::new(self.registry.intern(l.key), l.positive))
                .collect();
            self.hard.push(lits);
        }
    }

    fn add_soft(&mut self, key: VarKey) {
        let v = self.registry.intern(key);
        self.soft_units.push(v.pos());
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn num_vars(&self) -> usize {
        self.registry.len()
    }

    pub fn hard(&self) -> &[Vec<Lit>] {
        &self.hard
    }

    pub fn soft_units(&self) -> &[Lit] {
        &self.soft_units
    }

    pub fn scopes(&self) -> &[Scope] {
        &self.scopes
    }

    pub fn lit(&self, key: &VarKey) -> Option<Lit> {
        self.registry.get(key).map(Var::pos)
    }

    /// Hard clauses rendered with symbolic names, for inspection.
    pub fn symbolic_hard(&self) -> Vec<Vec<KeyLit>> {
        self.hard
            .iter()
            .map(|c| {
                c.iter()
                    .map(|l| KeyLit {
                        key: self.registry.key(l.var()),
                        positive: l.is_positive(),
                    })
                    .collect()
            })
            .collect()
    }

    /// DIMACS text; with `weighted`, soft units become weight-1 clauses of a
    /// WCNF file. Comment lines map each variable to its key.
    pub fn export_dimacs(&self, weighted: bool) -> String {
        let comments: Vec<String> = self
            .registry
            .keys()
            .iter()
            .enumerate()
            .map(|(i, k)| format!("{} {}", i + 1, k))
            .collect();
        if weighted {
            let soft: Vec<Vec<Lit>> = self.soft_units.iter().map(|&l| vec![l]).collect();
            dimacs::write_wcnf(self.num_vars(), &self.hard, &soft, &comments)
        } else {
            dimacs::write_cnf(self.num_vars(), &self.hard, &comments)
        }
    }
}

/// What a single-target formula is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Answer(usize),
    Cause { answer: usize, cause: usize },
    Fact(FactId),
}

/// Builds formulas for one instance under one encoding choice.
#[derive(Debug, Clone)]
pub struct Encoder<'a> {
    inst: Cow<'a, PrioritizedInstance>,
    spec: EncodingSpec,
    opts: EncoderOptions,
}

impl<'a> Encoder<'a> {
    pub fn new(
        inst: &'a PrioritizedInstance,
        spec: EncodingSpec,
        opts: EncoderOptions,
    ) -> Result<Self, EncodeError> {
        spec.validate(is_score_structured(inst.conflicts(), inst.priority()))?;
        let inst = if spec.repair == RepairType::Subset && !inst.priority().is_empty() {
            Cow::Owned(inst.without_priority())
        } else {
            Cow::Borrowed(inst)
        };
        Ok(Encoder { inst, spec, opts })
    }

    /// The instance the formulas are built from.
    pub fn instance(&self) -> &PrioritizedInstance {
        &self.inst
    }

    pub fn spec(&self) -> EncodingSpec {
        self.spec
    }

    /// Adds `core` with the maximality and consistency parts over its facts.
    fn close(&self, f: &mut CnfFormula, core: Vec<KeyClause>, ns: Ns) -> Result<(), EncodeError> {
        let first = facts_in(&core, ns);
        let (max, used) = encode_max(&self.inst, self.spec.max, &first, ns, &self.opts)?;
        let mut second = first.clone();
        second.extend(used);
        let cons = encode_consistency(&self.inst, &second, ns);
        f.add_clauses(core);
        f.add_clauses(max);
        f.add_clauses(cons);
        f.scopes.push(Scope { ns, first, second });
        Ok(())
    }

    /// A formula for one answer, cause or fact. Satisfiable exactly when the
    /// target fails (AR, IAR) or holds (brave).
    pub fn single(&self, target: Target) -> Result<CnfFormula, EncodeError> {
        let inst = &*self.inst;
        let neg = self.spec.neg;
        let mut f = CnfFormula::default();
        match (self.spec.sem, target) {
            (Semantics::Ar, Target::Answer(i)) => {
                self.close(&mut f, encode_neg_query(inst, i, neg, false)?, None)?;
            }
            (Semantics::Brave, Target::Answer(i)) => {
                self.close(&mut f, encode_pos_query(inst, i, false), None)?;
            }
            (Semantics::Brave, Target::Cause { answer, cause }) => {
                let c = &inst.answers()[answer].causes[cause];
                self.close(&mut f, encode_pos_cause(c, None), None)?;
            }
            (Semantics::Iar, Target::Answer(i)) => {
                for (k, cause) in inst.answers()[i].causes.iter().enumerate() {
                    let ns = Some(k as u32);
                    self.close(&mut f, encode_neg_cause(inst, cause, neg, ns, None)?, ns)?;
                }
            }
            (Semantics::Iar, Target::Cause { answer, cause }) => {
                let c = &inst.answers()[answer].causes[cause];
                self.close(&mut f, encode_neg_cause(inst, c, neg, None, None)?, None)?;
            }
            (Semantics::Iar, Target::Fact(a)) => {
                let c = FactSet::from([a]);
                self.close(&mut f, encode_neg_cause(inst, &c, neg, None, None)?, None)?;
            }
            (sem, t) => {
                return Err(EncodeError::InvalidTarget(format!("{t:?} under {}", sem.name())));
            }
        }
        Ok(f)
    }

    /// One formula for the answers at `indices`, with soft unit `Answer(i)`
    /// activating answer `i`.
    pub fn multi_answers(&self, indices: &[usize]) -> Result<CnfFormula, EncodeError> {
        let inst = &*self.inst;
        let neg = self.spec.neg;
        let mut f = CnfFormula::default();
        match self.spec.sem {
            Semantics::Ar | Semantics::Brave => {
                let mut core = Vec::new();
                for &i in indices {
                    if self.spec.sem == Semantics::Ar {
                        core.extend(encode_neg_query(inst, i, neg, true)?);
                    } else {
                        core.extend(encode_pos_query(inst, i, true));
                    }
                }
                self.close(&mut f, core, None)?;
            }
            Semantics::Iar => {
                let mut k = 0u32;
                for &i in indices {
                    for cause in &inst.answers()[i].causes {
                        let ns = Some(k);
                        k += 1;
                        let act = Some(VarKey::Answer(i as u32));
                        self.close(&mut f, encode_neg_cause(inst, cause, neg, ns, act)?, ns)?;
                    }
                }
            }
        }
        for &i in indices {
            f.add_soft(VarKey::Answer(i as u32));
        }
        Ok(f)
    }

    /// IAR only: one namespace per fact of `rel`, with soft unit
    /// `AssumeFact(a)` activating the search for a repair without `a`.
    pub fn multi_facts(&self, rel: &FactSet) -> Result<CnfFormula, EncodeError> {
        if self.spec.sem != Semantics::Iar {
            return Err(EncodeError::InvalidTarget(format!(
                "fact sets under {}",
                self.spec.sem.name()
            )));
        }
        let mut f = CnfFormula::default();
        for (k, &a) in rel.iter().enumerate() {
            let ns = Some(k as u32);
            let c = FactSet::from([a]);
            let clauses = encode_neg_cause(&self.inst, &c, self.spec.neg, ns, Some(VarKey::AssumeFact(a)))?;
            self.close(&mut f, clauses, ns)?;
        }
        for &a in rel {
            f.add_soft(VarKey::AssumeFact(a));
        }
        Ok(f)
    }
}
