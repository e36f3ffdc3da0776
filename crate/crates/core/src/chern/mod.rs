//! K₀ bookkeeping on canonical generators, the degree-0 Chern character into
//! negative cyclic homology, and the cyclic pairing.

mod character;
mod checks;
mod k0;

pub use character::{
    chern0, contravariant_chern0, describe_class, loday_triangle_check, pairing, unit_cocycle,
    ContravariantReport, Idempotent, TriangleReport,
};
pub use checks::{pairing_checks, PairingChecks};
pub use k0::{
    euler_class, k0_transport, koszul_transform_generator, transport_square, ConeMap,
    GeneratorExpr, K0Class, K0Side, PerfObject, TransformedObject, TransportSquare,
};

use crate::cyclic::CyclicError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChernError {
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error("expected a class on {expected}, got one on {found}")]
    WrongSide { expected: K0Side, found: K0Side },
    #[error("transport refused: weak Adams connectivity fails")]
    NotWeaklyAdamsConnected,
    #[error("not an idempotent: {0}")]
    NotIdempotent(String),
    #[error("idempotent entry ({row}, {col}) is not a cycle of bidegree (0, 0)")]
    EntryNotCycle { row: usize, col: usize },
    #[error("invalid perfect object: {detail}")]
    InvalidPerfObject { detail: String },
    #[error("outside the computed window: {detail}")]
    OutOfWindow { detail: String },
    #[error("{0}")]
    Grammar(String),
    #[error("cannot pair {left} with {right}")]
    VariantMismatch { left: String, right: String },
    #[error("class does not belong to this mixed complex")]
    AlgebraMismatch,
    #[error("representative is not a cycle of the total differential")]
    NotACycle,
    #[error("degree-0 groups are not both one-dimensional (HC-_0(A^!) = {negative_dual}, HC^0(A) = {cochain})")]
    DegreeZeroMismatch {
        negative_dual: usize,
        cochain: usize,
    },
}

#[cfg(test)]
mod tests;
