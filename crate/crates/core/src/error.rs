use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("feature selection is empty")]
    EmptySelection,
    #[error("neighborhood size k={k} must satisfy 1 <= k <= N-1 (N={n})")]
    InvalidK { k: usize, n: usize },
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("enumeration budget exceeded: {required} selections > budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("invalid max coverage instance: {0}")]
    InvalidCoverage(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("target node {target} unreachable from source node {from}")]
    Unreachable { from: usize, target: usize },
    #[error("negative cycle reachable from the source (through edge {edge})")]
    NegativeCycle { edge: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
}
