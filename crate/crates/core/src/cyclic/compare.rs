use super::mixed::{hochschild_mixed, MixedComplexWindow};
use super::total::{cyclic_homology, CyclicVariant};
use super::CyclicError;
use crate::algebra::AlgebraWindow;
use crate::bar::koszul_dual;
use crate::exactlin::{ComparisonTable, HomologyReport};
use crate::grading::{Bidegree, Window};

/// The window with both gradings negated.
pub fn mirrored(w: &Window) -> Window {
    Window::new(-w.a_max, -w.a_min, -w.h_max, -w.h_min)
}

#[derive(Clone, Debug)]
pub struct JonesMcClearyReport {
    /// `HC⁻_n(A)` at `(n, a)` against `HC^•(A^!)` at `(-n, -a)`
    pub forward: ComparisonTable,
    /// `HC⁻_n(A^!)` at `(n, a)` against `HC^•(A)` at `(-n, -a)`
    pub mirrored: ComparisonTable,
    pub negative_a: HomologyReport,
    pub cochain_dual: HomologyReport,
    pub negative_dual: HomologyReport,
    pub cochain_a: HomologyReport,
}

impl JonesMcClearyReport {
    pub fn passes(&self) -> bool {
        self.forward.passes() && self.mirrored.passes()
    }
}

fn table(
    title: &str,
    left: &HomologyReport,
    right: &HomologyReport,
    w: &Window,
) -> ComparisonTable {
    let mut t = ComparisonTable::new(title);
    for a in w.a_min..=w.a_max {
        for n in w.h_min..=w.h_max {
            let l = Bidegree::new(n, a);
            let r = -l;
            let truncated = left.is_truncated(l) || right.is_truncated(r);
            t.push(l, r, left.dim(l), right.dim(r), truncated);
        }
    }
    t
}

/// Compares both directions on the given mixed complexes.
pub fn jones_mccleary_tables(
    mixed_a: &MixedComplexWindow,
    mixed_dual: &MixedComplexWindow,
    w: &Window,
) -> JonesMcClearyReport {
    let wm = mirrored(w);
    let negative_a = cyclic_homology(mixed_a, CyclicVariant::Negative, w);
    let cochain_dual = cyclic_homology(mixed_dual, CyclicVariant::CochainCyclic, &wm);
    let negative_dual = cyclic_homology(mixed_dual, CyclicVariant::Negative, &wm);
    let cochain_a = cyclic_homology(mixed_a, CyclicVariant::CochainCyclic, w);
    JonesMcClearyReport {
        forward: table("HC-(A) vs HC^(A^!)", &negative_a, &cochain_dual, w),
        mirrored: table("HC-(A^!) vs HC^(A)", &negative_dual, &cochain_a, &wm),
        negative_a,
        cochain_dual,
        negative_dual,
        cochain_a,
    }
}

pub fn jones_mccleary_compare(
    alg: &AlgebraWindow,
    w: &Window,
) -> Result<JonesMcClearyReport, CyclicError> {
    let dual = koszul_dual(alg, w)?;
    let mixed_a = hochschild_mixed(alg, w)?;
    let mixed_dual = hochschild_mixed(&dual.algebra, w)?;
    Ok(jones_mccleary_tables(&mixed_a, &mixed_dual, w))
}
