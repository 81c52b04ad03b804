use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("coefficient vector reaches photon number {max_index} but the cutoff is {cutoff}")]
    CutoffExceeded { max_index: usize, cutoff: usize },

    #[error("cutoff {cutoff} leaves tail mass {tail:.3e} above tolerance {tol:.1e}")]
    CutoffTooSmall { cutoff: usize, tail: f64, tol: f64 },

    #[error("no cutoff up to {max} brings the tail mass below {tol:.1e}")]
    CutoffUnreachable { max: usize, tol: f64 },

    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },

    #[error("mode index {mode} out of range for a {num_modes}-mode state")]
    ModeOutOfRange { mode: usize, num_modes: usize },

    #[error("operator dimension {found} does not match the expected dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (squared norm {0:.15})")]
    NotNormalized(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },

    #[error("operator is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),

    #[error("operator is not a POVM effect (eigenvalue {0:.3e} outside [0, 1])")]
    NotEffect(f64),

    #[error("detector effects do not sum to the identity (defect {0:.3e})")]
    Incomplete(f64),

    #[error("numerical invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }
}
