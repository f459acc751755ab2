use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node {node}: label {label} is not in the node's list")]
    InfeasibleLabel { node: usize, label: i64 },

    #[error("labeling has {got} entries but the instance has {expected} nodes")]
    LabelingLength { expected: usize, got: usize },

    #[error("search space of {product} labelings exceeds cap {cap}")]
    SearchSpaceExceedsCap { product: u128, cap: u128 },

    #[error("graph has {nodes} nodes, brute-force dicut cap is {cap}")]
    DicutSizeCap { nodes: usize, cap: usize },

    #[error("LP is {status}; the construction is buggy (a valid relaxation is always feasible and bounded)")]
    LpStatus { status: &'static str },

    #[error("LP solve hit numerical instability: {0}")]
    LpNumerics(String),

    #[error("solution catalog does not match program: {0}")]
    CatalogMismatch(String),

    #[error("matrix entry ({row},{col}) is negative: {value}")]
    NegativeMatrixEntry { row: usize, col: usize, value: f64 },

    #[error("lp = {lp} exceeds W = {w} beyond tolerance")]
    LpExceedsWeight { lp: f64, w: f64 },

    #[error("inconsistent generator spec: {0}")]
    BadGenSpec(String),

    #[error("unknown fixture name: {0}")]
    UnknownFixture(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
