//! Bar construction, Koszul dual algebra, quadratic duals and the
//! double-dual comparison.

mod coalgebra;
mod dual;
mod quadratic;

pub use coalgebra::{bar_construction, BarWord, CoalgebraWindow};
pub use dual::{
    double_dual_report, dual_of_coalgebra, koszul_dual, DoubleDualReport, DualAlgebraWindow,
};
pub use quadratic::{compare_quadratic_vs_bar, quadratic_dual};

use crate::algebra::AlgebraError;
use crate::grading::Bidegree;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BarError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("`{algebra}` is not Adams connected: augmentation ideal is not concentrated in Adams degrees of one nonzero sign")]
    NotAdamsConnected { algebra: String },
    #[error("bar codifferential squares to a nonzero value on {word} at {degree}")]
    CodifferentialSquare { word: String, degree: Bidegree },
    #[error("coalgebra axiom `{axiom}` fails on {word}")]
    CoalgebraAxiom { word: String, axiom: String },
    #[error("dual algebra violates {count} axiom(s), first: {first}")]
    DualAxiom { count: usize, first: String },
    #[error("not a quadratic presentation: {0}")]
    NotQuadratic(String),
}
