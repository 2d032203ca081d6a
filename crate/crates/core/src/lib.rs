//! Strong homotopy types, nerves, finite spaces and the collapse hierarchy
//! for finite simplicial complexes and posets.

pub mod canon;
pub mod catalog;
pub mod collapse;
pub mod complex;
pub mod error;
pub mod nerve;
pub mod poset;
pub mod report;
pub mod search;
pub mod strong;
pub mod symmetry;
pub mod trace;
pub mod workbench;

pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use complex::{are_contiguous, parse_scx, write_scx, Simplex, SimplicialComplex, SimplicialMap, VertexId};
pub use error::{Error, Result};
pub use search::{Answer, Budget, MemoCache, DEFAULT_BUDGET};
pub use trace::{Direction, DominationWitness, Move, MoveTrace};
