//! Exact linear algebra over the rationals and prime fields.

pub mod factor;
pub mod field;
pub mod mat;
pub mod poly;
pub mod scalar;
pub mod subspace;

pub use field::FieldSpec;
pub use mat::{solve_linear, vecops, LaError, Mat, Rref, Solution};
pub use poly::Poly;
pub use scalar::Q;
pub use subspace::Subspace;
