//! Exact degreewise computations for augmented bigraded dg algebras: bar
//! constructions, Koszul duals, Hochschild and cyclic theories, and K₀-level
//! Chern characters.

pub mod algebra;
pub mod bar;
pub mod chern;
pub mod cli;
pub mod corpus;
pub mod cyclic;
pub mod exactlin;
pub mod grading;
