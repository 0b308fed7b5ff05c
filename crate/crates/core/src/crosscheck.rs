//! Compares the SAT pipeline with the brute-force oracle on one instance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use orbits_sat::SolverConfig;

use crate::encoder::{EncoderOptions, EncodingSpec, RepairType, Semantics};
use crate::error::{FilterError, OracleError};
use crate::filters::{answer_query, Algorithm, FilterRequest};
use crate::model::PrioritizedInstance;
use crate::oracle::{answers_from_family, enumerate_family, OracleConfig};
use crate::priority::is_score_structured;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub spec: EncodingSpec,
    pub algorithm: Algorithm,
    pub expected: BTreeSet<String>,
    pub got: BTreeSet<String>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} via {}: oracle {:?}, pipeline {:?}",
            self.spec, self.algorithm, self.expected, self.got
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrossCheck {
    /// Pipeline runs compared.
    pub runs: usize,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CrossCheckError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{spec} via {algorithm}: {source}")]
    Filter {
        spec: EncodingSpec,
        algorithm: Algorithm,
        source: FilterError,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CrossCheckOptions {
    pub encoder: EncoderOptions,
    pub solver: SolverConfig,
    pub oracle: OracleConfig,
}

/// Every valid semantics, encoding and algorithm combination; completion
/// repairs also run the Pareto formulas when the priority is
/// score-structured.
pub fn combinations(inst: &PrioritizedInstance) -> Vec<(EncodingSpec, Algorithm)> {
    let ss = is_score_structured(inst.conflicts(), inst.priority());
    let mut out = Vec::new();
    for sem in Semantics::ALL {
        for spec in EncodingSpec::all_for(sem, ss) {
            for alg in Algorithm::all_for(sem) {
                out.push((spec, alg));
            }
        }
    }
    out
}

pub fn cross_check(inst: &PrioritizedInstance, opts: &CrossCheckOptions) -> Result<CrossCheck, CrossCheckError> {
    let mut families = BTreeMap::new();
    for repair in RepairType::ALL {
        families.insert(repair, enumerate_family(inst, repair, &opts.oracle)?);
    }
    let mut report = CrossCheck::default();
    for (spec, algorithm) in combinations(inst) {
        let expected = answers_from_family(inst, spec.sem, &families[&spec.repair]).answers;
        let mut req = FilterRequest::new(inst, spec, algorithm);
        req.encoder = opts.encoder;
        req.solver = opts.solver;
        let got = answer_query(&req)
            .map_err(|source| CrossCheckError::Filter {
                spec,
                algorithm,
                source,
            })?
            .answers;
        report.runs += 1;
        if got != expected {
            report.mismatches.push(Mismatch {
                spec,
                algorithm,
                expected,
                got,
            });
        }
    }
    Ok(report)
}
