use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by origin: graph construction, spectral
/// preconditions, quadrature failures and configuration/input problems.
/// The CLI maps [`Error::is_input_error`] to exit code 2 and everything
/// else that surfaces from a validation run to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),

    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),

    #[error("self-loop on vertex `{0}` (edge weights must have zero diagonal)")]
    SelfLoop(String),

    #[error("conflicting weights {w1} and {w2} for edge `{a}`-`{b}`")]
    ConflictingEdge { a: String, b: String, w1: f64, w2: f64 },

    #[error("edge weight {w} for `{a}`-`{b}` must be positive")]
    NonpositiveEdgeWeight { a: String, b: String, w: f64 },

    #[error("vertex `{id}` has nonpositive measure m={m}")]
    NonpositiveMeasure { id: String, m: f64 },

    #[error("vertex `{id}` has negative killing c={c}")]
    NegativeKilling { id: String, c: f64 },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex set for restriction is empty")]
    EmptyRestriction,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigendecomposition failed: {0}")]
    EigenFailed(String),

    #[error("no spectral gap: lambda_0 = {lambda0:.3e} is below the gap tolerance {tol:.3e}")]
    NoSpectralGap { lambda0: f64, tol: f64 },

    #[error("spectral function is singular or non-finite at eigenvalue {lambda:.6e}")]
    SingularSpectralFunction { lambda: f64 },

    #[error("parameter {name}={value} outside the admissible range {range}")]
    ParameterRange { name: &'static str, value: f64, range: &'static str },

    #[error("nonpositive time t={0} for the heat semigroup")]
    NonpositiveTime(f64),

    #[error("quadrature tail bound {bound:.3e} exceeds the tolerance {tol:.3e}")]
    QuadratureTail { bound: f64, tol: f64 },

    #[error("quadrature spec invalid: {0}")]
    QuadratureSpec(String),

    #[error("Riesz kernel for alpha={0} is not present in the table")]
    MissingKernel(f64),

    #[error("weight is identically zero")]
    ZeroWeight,

    #[error("quadratic form is indefinite on the restriction (not a Hardy weight on this truncation)")]
    IndefiniteForm,

    #[error("ground state candidate must be strictly positive (v({index}) = {value})")]
    NotStrictlyPositive { index: usize, value: f64 },

    #[error("restriction set is empty")]
    EmptyIndexSet,

    #[error("heat kernel not resolvable: nonpositive value {value:.3e} at (t={t}, x={x})")]
    HeatPositivity { t: f64, x: usize, value: f64 },

    #[error("fit needs at least {needed} points in the window, got {got}")]
    TooFewFitPoints { needed: usize, got: usize },

    #[error("fit input invalid: {0}")]
    FitInput(String),

    #[error("radius {radius} exceeds the safe inner window {max} of the exhaustion")]
    OutsideInnerWindow { radius: usize, max: usize },

    #[error("graph file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Input/configuration problems (CLI exit code 2) as opposed to
    /// numerical validation failures (exit code 1).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DuplicateVertex(_)
                | Error::UnknownVertex(_)
                | Error::SelfLoop(_)
                | Error::ConflictingEdge { .. }
                | Error::NonpositiveEdgeWeight { .. }
                | Error::NonpositiveMeasure { .. }
                | Error::NegativeKilling { .. }
                | Error::Disconnected
                | Error::EmptyRestriction
                | Error::ParameterRange { .. }
                | Error::QuadratureSpec(_)
                | Error::MissingKernel(_)
                | Error::Parse { .. }
                | Error::Config(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
