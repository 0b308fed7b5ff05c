//! Prioritized knowledge bases and SAT-based filtering of query answers
//! under repair semantics.

pub mod crosscheck;
pub mod encoder;
pub mod error;
pub mod filters;
pub mod generate;
pub mod model;
pub mod oracle;
pub mod priority;

pub use encoder::{
    CnfFormula, Encoder, EncoderOptions, EncodingSpec, MaxVariant, NegVariant, RepairType,
    Semantics, Target, VarKey,
};
pub use error::{EncodeError, FilterError, ModelError, OracleError};
pub use model::{
    ConflictSet, DirectedConflictGraph, Fact, FactId, FactSet, PotentialAnswer,
    PrioritizedInstance, PriorityRelation, PriorityViolation,
};
