//! Relational complexity and lift complexity of finite relational structures.

pub mod amalgamation;
pub mod canon;
pub mod complexity;
pub mod cuts;
pub mod error;
pub mod generators;
pub mod homogeneity;
pub mod homogenization;
pub mod io;
pub mod limits;
pub mod morphisms;
pub mod perm;
pub(crate) mod refine;
pub mod structure;

pub use error::{Error, Result};
pub use limits::Limits;
pub use structure::{GraphView, Lift, PartialMap, Signature, Structure, Tuple};
