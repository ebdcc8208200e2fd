use thiserror::Error;

use crate::rat::Rat;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum KernelError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cone is not pointed (contains a line)")]
    NotPointed,
    #[error("generators span only a {rank}-dimensional subspace of R^{dim}")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("polyhedron is unbounded along {ray:?}")]
    Unbounded { ray: Vec<Rat> },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}
