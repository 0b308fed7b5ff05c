use crate::model::{FactId, PriorityViolation};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("fact {0} is not part of the instance")]
    UnknownFact(FactId),
    #[error("fact {0} cannot conflict with itself as a pair; use a unary conflict")]
    SelfPair(FactId),
    #[error("fact at position {position} has id {id}; ids must be dense")]
    NonDenseIds { position: usize, id: FactId },
    #[error("answer `{0}` has no cause")]
    NoCauses(String),
    #[error("answer `{0}` has an empty cause")]
    EmptyCause(String),
    #[error("invalid priority: {0}")]
    InvalidPriority(PriorityViolation),
    #[error("no score given for conflicting fact {0}")]
    MissingScore(FactId),
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("completion encoding over {nodes} facts exceeds the cap of {cap}")]
    CapacityExceeded { nodes: usize, cap: usize },
    #[error("invalid encoding choice: {0}")]
    InvalidSpec(String),
    #[error("cause contains self-inconsistent fact {0}; preprocess first")]
    SelfInconsistentInCause(FactId),
    #[error("target not supported for this semantics: {0}")]
    InvalidTarget(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{found} conflicting facts exceed the oracle cap of {cap}")]
    TooManyFacts { found: usize, cap: usize },
    #[error("{found} unoriented conflict pairs exceed the oracle cap of {cap}")]
    TooManyUnorientedPairs { found: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FilterError {
    #[error("algorithm {algorithm} cannot compute {semantics} answers")]
    InvalidPairing {
        semantics: &'static str,
        algorithm: &'static str,
    },
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("solver budget exhausted before all answers were decided")]
    Incomplete,
}
