use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    /// γ = 0: every ball opens its own box, so the terminal box count is infinite.
    #[error("degenerate: K infinite (gamma = 0 gives the singleton partition)")]
    DegenerateInfiniteK,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("insufficient replicates: {0}")]
    InsufficientReplicates(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
