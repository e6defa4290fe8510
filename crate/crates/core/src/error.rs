use thiserror::Error;

use crate::pmf::PmfError;

/// Errors from the space, particle, entropy and sampling modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Pmf(#[from] PmfError),
    #[error("step probability {0} outside [0, 1]")]
    InvalidStepProbability(f64),
    #[error("ensemble must contain at least one walk")]
    EmptyEnsemble,
    #[error("step {n} exceeds horizon {horizon}")]
    HorizonExceeded { n: usize, horizon: usize },
    #[error("selection row at step {n}, position {c}: {reason}")]
    InvalidSelection { n: usize, c: i64, reason: String },
    #[error("selection kernel covers {got} walks, ensemble has {expected}")]
    SelectionArity { expected: usize, got: usize },
    #[error("transition row from {c}: {reason}")]
    InvalidTransition { c: i64, reason: String },
    #[error("no mass left at step {n}: selection weights vanish on the support of space")]
    AllMassZero { n: usize },
    #[error("position {c} is not reachable at step {n}")]
    Unreachable { n: usize, c: i64 },
    #[error("conditioning supports disagree at {point}")]
    SupportMismatch { point: i64 },
    #[error("at least one sample is required")]
    NoSamples,
    #[error("time index {t} outside trajectory of length {len}")]
    TimeOutOfRange { t: usize, len: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("not a poset: `{0}` and `{1}` lie on a cycle")]
    NotAPoset(String, String),
    #[error("not a lattice: {kind} of `{x}` and `{y}` does not exist")]
    NotALattice {
        x: String,
        y: String,
        kind: &'static str,
    },
    #[error("lattice has {size} elements, cap is {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("complement map is incomplete or inconsistent at `{0}`")]
    BadComplement(String),
    #[error("lattice is not orthocomplemented")]
    NotOrthocomplemented,
    #[error("subspace closure exceeded {cap} elements")]
    ClosureExplosion { cap: usize },
    #[error("vector has dimension {got}, ambient dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("dimension {0} exceeds the cap of {cap}", cap = 16)]
    DimensionCap(usize),
    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("element is not self-adjoint (deviation {0:e})")]
    NotSelfAdjoint(f64),
    #[error("not a state: {0}")]
    InvalidState(String),
    #[error("not a projector (deviation {0:e})")]
    NotAProjector(f64),
    #[error("event has probability {0:e}; update undefined")]
    ZeroProbabilityEvent(f64),
    #[error("basis does not span a unital *-algebra: {0}")]
    NotAnAlgebra(String),
    #[error("bases are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("evaluation budget {0} is below the minimum of 100")]
    BudgetTooSmall(usize),
    #[error("partition width must be positive, got {0}")]
    InvalidWidth(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
}
