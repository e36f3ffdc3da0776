//! Exact sparse linear algebra over the rationals.

mod complex;
mod elim;
mod matrix;
mod sparse;

pub use complex::{
    euler_characteristic, homology, ChainComplexWindow, ComparisonTable, ComplexError,
    DimComparison, HomologyReport,
};
pub use elim::{kernel_basis, rank, rank_of_vectors, solve, Rref};
pub use matrix::SparseMatrix;
pub use sparse::{Accumulator, SparseVec};
