use thiserror::Error;

/// A violated ribbon graph axiom.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("{which} is not a permutation of 0..{n}")]
    NotPermutation { which: &'static str, n: usize },
    #[error("s1 is not an involution at dart {0}")]
    NotInvolution(usize),
    #[error("s1 fixes dart {0}")]
    FixedPoint(usize),
    #[error("darts split into {0} connected components")]
    Disconnected(usize),
    #[error("dart count {0} is not a positive even integer")]
    DartCount(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ribbon graph: {}", join(.0))]
    InvalidGraph(Vec<Violation>),
    #[error("V - E + F is odd")]
    OddEuler,
    #[error("graph is not orientable")]
    NotOrientable,
    #[error("residue condition violated: signed boundary lengths sum to {0}")]
    ResidueViolation(String),
    #[error("invalid step at word position {pos}: {reason}")]
    InvalidStep { pos: usize, reason: String },
    #[error("multicurve is not simple: {0}")]
    NotSimple(String),
    #[error("cut is not admissible: {0}")]
    NotAdmissible(String),
    #[error("vertex {0} has odd degree")]
    OddDegree(usize),
    #[error("graph component has a single vertex")]
    SingleVertex,
    #[error("vertex {0} is not 4-valent")]
    NotFourValent(usize),
    #[error("unstable type (g={g}, n+={n_plus}, n-={n_minus})")]
    UnstableType { g: u32, n_plus: usize, n_minus: usize },
    #[error("boundary profile mismatch: {0}")]
    ProfileMismatch(String),
    #[error("cell has no interior lattice points")]
    EmptyCell,
    #[error("non-integral or non-positive input: {0}")]
    NonIntegralInput(String),
    #[error("invalid stable graph: {}", join(.0))]
    InvalidStable(Vec<crate::stable::StableViolation>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 1 for internal failures, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 1,
            _ => 2,
        }
    }
}
