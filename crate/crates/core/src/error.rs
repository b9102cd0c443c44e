use thiserror::Error;

/// Errors produced anywhere in the recognition pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("automaton is not deterministic")]
    Nondeterministic,

    #[error("alphabets differ")]
    AlphabetMismatch,

    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),

    #[error("regex syntax error at offset {offset}: {message}")]
    Regex { offset: usize, message: String },

    #[error("subset construction exceeded the cap of {limit} states")]
    StateLimit { limit: usize },

    #[error("rank refinement did not stabilize within {rounds} rounds")]
    FixpointDiverged { rounds: usize },

    #[error("rank refinement broke monotonicity at round {round}")]
    RankInvariant { round: usize },

    #[error("invalid OV instance: {0}")]
    InvalidOvInstance(String),

    #[error("witness does not decode to a single cycle pair: {0}")]
    WitnessDecode(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
