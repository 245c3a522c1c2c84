//! Exact linear algebra and finite-dimensional algebra kernel.

mod matrix;
pub mod poly;
mod sca;

pub use matrix::{kernel_basis, kernel_vectors, rank, row_space, solve_linear, Echelon, Matrix};
pub use sca::StructureConstantAlgebra;
