//! Tensor products over an algebra, Tor groups, and certification of
//! homological and stratifying ideals.
//!
//! A right `A`-module is a left module over `opposite(A)` on the same basis,
//! so `m·a` is `ρ(a) m` in its action matrices.

pub mod addre;
pub mod ideals;
pub mod tensor;
pub mod tor;

pub use addre::{add_re_member, add_re_resolution, AddReResolution};
pub use ideals::{is_homological_ideal, is_stratifying, HomologicalReport, StratifyingReport};
pub use tensor::{tensor_over, tensor_over_naive, Tensor};
pub use tor::{tor, tor_from_resolution, TorProfile, TorStatus};

use crate::algebra::AlgError;
use crate::modules::ModError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomalgError {
    #[error("the first module must live over the opposite of the second module's algebra")]
    AlgebraMismatch,
    #[error("precondition fails: Tor_{degree}(R/J, M) has dimension {dim}")]
    PreconditionFailed { degree: usize, dim: usize },
    #[error("no finite resolution within {0} steps")]
    BoundExceeded(usize),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}
