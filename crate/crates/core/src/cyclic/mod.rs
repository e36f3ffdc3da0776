//! Normalized Hochschild mixed complexes, the cyclic-type total complexes,
//! and the dimension-level comparison between negative cyclic homology and
//! cyclic cohomology of the Koszul dual.

mod compare;
mod mixed;
mod total;

pub use compare::{jones_mccleary_compare, jones_mccleary_tables, mirrored, JonesMcClearyReport};
pub use mixed::{
    coalgebra_mixed, hochschild_mixed, induced_on_mixed, Chain, MixedComplexWindow, MixedMorphism,
};
pub use total::{
    cyclic_cochain, cyclic_complex, cyclic_homology, is_cycle, total_differential, CyclicClass,
    CyclicComplex, CyclicVariant,
};

use crate::bar::BarError;
use crate::grading::Bidegree;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CyclicError {
    #[error(transparent)]
    Bar(#[from] BarError),
    #[error("`{algebra}` has Adams slices that are not homologically bounded")]
    Unbounded { algebra: String },
    #[error("mixed identity {identity} fails at {degree} on {chain}")]
    MixedIdentity {
        identity: String,
        degree: Bidegree,
        chain: String,
    },
    #[error("induced map does not commute with {operator} on {chain}")]
    NotAChainMap { chain: String, operator: String },
}
