//! Presentations of augmented bigraded dg algebras and their expansion to
//! explicit bases and structure tables.

mod expand;
mod finiteness;
mod morphism;
mod presentation;
mod window;

pub use expand::{expand_presentation, reduce_poly};
pub use finiteness::{classify_finiteness, FinitenessReport, Verdict};
pub use morphism::{induced_on_algebra, AlgebraMorphism, PresentationMorphism};
pub use presentation::{render_word, word_degree, Generator, Poly, Presentation, Word};
pub use window::{
    algebra_homology, check_axioms, render_element, AlgebraWindow, AxiomReport, AxiomViolation,
    BasisElement,
};

use crate::grading::Bidegree;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("duplicate generator label `{0}`")]
    DuplicateGenerator(String),
    #[error("relation `{relation}` is not homogeneous: {detail}")]
    InhomogeneousRelation { relation: String, detail: String },
    #[error("bad differential on `{generator}`: {detail}")]
    BadDifferential { generator: String, detail: String },
    #[error("generator `{0}` has Adams degree 0; its Adams slice would be infinite-dimensional")]
    AdamsZeroGenerator(String),
    #[error("generators `{positive}` and `{negative}` have Adams degrees of opposite sign")]
    MixedAdamsSigns { positive: String, negative: String },
    #[error("d does not preserve the relation ideal: d({relation}) ≢ 0 at {degree}")]
    DifferentialNotIdealPreserving { relation: String, degree: Bidegree },
    #[error("d² ≠ 0 on generator `{generator}` at {degree}")]
    SquareNonzero { generator: String, degree: Bidegree },
    #[error("expanded algebra violates {count} axiom(s), first: {first}")]
    AxiomViolation { count: usize, first: String },
    #[error("not a homomorphism: {witness}")]
    NotAHomomorphism { witness: String },
}
