use thiserror::Error;

/// Errors produced by state-space operations, bounds, and constructions.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An operation that needs `M_k ⊗ M_k` structure was given unequal factors.
    #[error("operation requires equal factor dimensions, got {left}x{right}")]
    NonSquareFactors { left: usize, right: usize },

    /// A matrix expected to be Hermitian failed the tolerance check.
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    /// A bound was requested for a state of numerical rank zero.
    #[error("state has numerical rank zero")]
    ZeroState,

    /// A vector expected to be nonzero was zero.
    #[error("vector is zero")]
    ZeroVector,

    /// The family vectors {a_1..a_n, b_1..b_n} are not linearly independent.
    #[error("family vectors are linearly dependent (singular value ratio {ratio:.3e})")]
    DependentVectors { ratio: f64 },

    /// The separable decomposition enumeration is capped.
    #[error("local dimension {dim} exceeds the enumeration bound {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    /// A requested rank is outside the admissible range.
    #[error("rank {rank} out of range 1..={max}")]
    BadRank { rank: usize, max: usize },

    /// The epsilon post-verification loop never produced a PPT state.
    #[error("epsilon verification failed after {halvings} halvings")]
    EpsilonSearchFailed { halvings: usize },

    /// Mismatched or invalid dimensions in a constructor.
    #[error("invalid dimensions: {0}")]
    BadDimensions(String),

    /// A tolerance parameter was outside (0, 1).
    #[error("tolerance {value:e} must lie strictly between 0 and 1")]
    BadTolerance { value: f64 },

    /// A state failed validation where a valid state is required.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A certified reconstruction missed its tolerance.
    #[error("reconstruction error {error:.3e} exceeds tolerance {tol:.3e}")]
    ReconstructionFailed { error: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
