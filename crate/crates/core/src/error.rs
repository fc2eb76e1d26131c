use cjt_exact::AlgebraError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("subspace is not invariant under the generators")]
    NotInvariant,
    #[error("the zero point does not define a point of projective space")]
    ZeroPoint,
    #[error("modules are incompatible: {0}")]
    Incompatible(String),
    #[error("not locally free: {0}")]
    NotLocallyFree(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl CoreError {
    /// Refusals on mathematical grounds, as opposed to malformed requests.
    pub fn is_mathematical_refusal(&self) -> bool {
        matches!(
            self,
            CoreError::NotLocallyFree(_)
                | CoreError::Unsupported(_)
                | CoreError::Validation(_)
                | CoreError::Inconsistent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
