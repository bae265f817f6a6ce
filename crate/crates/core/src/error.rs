use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes across the crate.
///
/// Residuals are carried as `f64` regardless of the scalar type so the error
/// type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid algebra descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
    #[error("descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },
    #[error("matrix is not an element of {descriptor}: {reason}")]
    OutsideAlgebra { descriptor: String, reason: String },
    #[error("element is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("group of order {order} exceeds the cap {cap}")]
    GroupTooLarge { order: u128, cap: u128 },
    #[error("element is not normal (residual {residual:e})")]
    NotNormal { residual: f64 },
    #[error("elements {i} and {j} do not commute (||[a,b]|| = {residual:e})")]
    NotCommuting { i: usize, j: usize, residual: f64 },
    #[error("element is not a member of the subalgebra (residual {residual:e})")]
    NotMember { residual: f64 },
    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),
    #[error("character {0} is not valid for this subalgebra")]
    InvalidCharacter(String),
    #[error("points are not distinct")]
    NotDistinct,
    #[error("no separating element found; canonical forms disagree with evaluations")]
    SeparationFailure,
    #[error("subalgebra is not maximal abelian")]
    NotMaximal,
    #[error("the character at infinity carries no rank-one projection")]
    NoProjection,
    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },
    #[error("arrows are not composable: source {source_point} differs from range {range_point}")]
    NotComposable { source_point: String, range_point: String },
    #[error("set is not a group: {0}")]
    NotAGroup(String),
    #[error("unitary does not belong to the Haar system's group")]
    NotInGroup,
    #[error("functions live on different groupoids")]
    GroupoidMismatch,
    #[error("point set is missing characters of the subalgebra")]
    MissingCharacters,
    #[error("size {size} exceeds the supported maximum {max}")]
    TooLarge { size: usize, max: usize },
    #[error("partition has no block with two or more elements")]
    NoCoarseBlock,
    #[error("unknown primitive ideal label {0:?}")]
    UnknownIdeal(String),
    #[error("invalid containment order: {0}")]
    InvalidOrder(String),
}
