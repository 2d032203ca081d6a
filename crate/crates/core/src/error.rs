use thiserror::Error;

use crate::complex::VertexId;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("the complex has no facets")]
    EmptyComplex,
    #[error("the poset has no elements")]
    EmptyPoset,
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("vertex {0} is not a vertex of the complex")]
    UnknownVertex(VertexId),
    #[error("element {0} is not an element of the poset")]
    UnknownElement(u32),
    #[error("cannot delete the only vertex of a complex")]
    LastVertex,
    #[error("cannot delete the only element of a poset")]
    LastElement,
    #[error("search budget of {budget} nodes exhausted")]
    SearchBudgetExceeded { budget: u64 },
    #[error("maps do not share source and target")]
    MapMismatch,
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("vertex {dominated} is not dominated by {dominator}")]
    InvalidWitness { dominated: VertexId, dominator: VertexId },
    #[error("not a full subcomplex: {0}")]
    NotFullSubcomplex(String),
    #[error("relation has a cycle through {0}")]
    AntisymmetryViolation(String),
    #[error("invalid trace at move {index}: {reason}")]
    InvalidTrace { index: usize, reason: String },
    #[error("the complex is not vertex-homogeneous")]
    NotVertexHomogeneous,
    #[error("no simplex is fixed by the group")]
    NoInvariantSimplex,
    #[error("input too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("operation does not apply to a {0}")]
    KindMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
