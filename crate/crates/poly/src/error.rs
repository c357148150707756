use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("constraint references dimension {dim} but the ambient dimension is {ambient}")]
    DimensionOutOfRange { dim: usize, ambient: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {dim} is constrained but has no image under the remapping")]
    UnmappedDimension { dim: usize },
    #[error("remapping is not injective or maps outside the new space")]
    BadMapping,
}
