use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),

    #[error("matrix entry {0} does not belong to GF({1})")]
    FieldMismatch(u32, u32),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("subspace has type ({m},{k}), expected type ({expected},0)")]
    Type { m: usize, k: usize, expected: usize },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("class ({i},{jmi}) is not admissible for (n,l,m) = ({n},{l},{m})")]
    InadmissibleClass { i: usize, jmi: usize, n: usize, l: usize, m: usize },

    #[error("projected work {projected} exceeds the budget {budget}")]
    Scale { projected: u128, budget: u128 },

    #[error("zero polynomial has no root multiplicity")]
    ZeroPolynomial,

    #[error("image of clique C(W#{0}) is not a clique of the family")]
    NotCliquePreserving(usize),

    #[error("search timed out after {seconds}s ({levels_done} of {levels} levels resolved)")]
    Timeout { seconds: u64, levels_done: usize, levels: usize },

    #[error("internal error: {0}")]
    Internal(String),
}
