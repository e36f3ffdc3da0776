use std::collections::HashMap;

use super::coalgebra::{bar_construction, CoalgebraWindow};
use super::BarError;
use crate::algebra::{algebra_homology, check_axioms, AlgebraWindow, BasisElement};
use crate::exactlin::{Accumulator, ComparisonTable, HomologyReport, SparseVec};
use crate::grading::{koszul_parity, sign_scalar, Bidegree, Window};

/// The degreewise linear dual of a bar construction, with its algebra
/// structure. Basis element `k` is the dual of bar word `k`.
#[derive(Clone, Debug)]
pub struct DualAlgebraWindow {
    pub algebra: AlgebraWindow,
    pub bar: CoalgebraWindow,
}

impl std::ops::Deref for DualAlgebraWindow {
    type Target = AlgebraWindow;

    fn deref(&self) -> &AlgebraWindow {
        &self.algebra
    }
}

/// Dualizes a coalgebra: `w*` sits at `-deg(w)`, products are signed
/// concatenations and the differential is the signed transpose.
pub fn dual_of_coalgebra(bar: &CoalgebraWindow, name: &str) -> AlgebraWindow {
    let n = bar.dim();
    let elements: Vec<BasisElement> = (0..n)
        .map(|i| BasisElement {
            label: format!("{}*", bar.label(i)),
            degree: -bar.degree(i),
        })
        .collect();
    let (lo, hi) = bar.adams_range();
    let range = (-hi, -lo);
    let in_range = |a: i64| range.0 <= a && a <= range.1;

    let mut products = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            if !in_range(elements[i].degree.a + elements[j].degree.a) {
                continue;
            }
            let mut w = bar.word(i).clone();
            w.extend_from_slice(bar.word(j));
            let Some(k) = bar.index_of(&w) else { continue };
            let s = sign_scalar(koszul_parity(bar.degree(i).h, bar.degree(j).h));
            products.insert((i, j), SparseVec::from_pairs([(k, s)]));
        }
    }

    // δ(w*) = -(-1)^{h(w)} Σ_x [D]_{w,x} x*
    let mut acc: Vec<Accumulator> = (0..n).map(|_| Accumulator::new()).collect();
    for x in 0..n {
        for (w, c) in bar.codifferential(x).iter() {
            let s = sign_scalar(!bar.degree(w).is_odd());
            acc[w].add(x, s * c);
        }
    }
    let differential: Vec<SparseVec> = acc.into_iter().map(Accumulator::finish).collect();
    let unit = bar.counit_index();
    AlgebraWindow::from_tables(
        name,
        elements,
        unit,
        range,
        products,
        differential,
        SparseVec::unit(unit),
    )
}

/// `A^!`: bar construction followed by degreewise duality, axioms verified.
pub fn koszul_dual(alg: &AlgebraWindow, w: &Window) -> Result<DualAlgebraWindow, BarError> {
    let bar = bar_construction(alg, w)?;
    let dual = dual_of_coalgebra(&bar, &format!("{}^!", alg.name));
    let report = check_axioms(&dual);
    if let Some(first) = report.violations.first() {
        return Err(BarError::DualAxiom {
            count: report.violations.len(),
            first: format!("{first:?}"),
        });
    }
    Ok(DualAlgebraWindow { algebra: dual, bar })
}

/// Side-by-side dimensions of `H((A^!)^!)` and `H(A)`.
#[derive(Clone, Debug)]
pub struct DoubleDualReport {
    pub original: HomologyReport,
    pub double_dual: HomologyReport,
    pub table: ComparisonTable,
}

impl DoubleDualReport {
    pub fn passes(&self) -> bool {
        self.table.passes()
    }
}

pub fn double_dual_report(alg: &AlgebraWindow, w: &Window) -> Result<DoubleDualReport, BarError> {
    let dual = koszul_dual(alg, w)?;
    let double = koszul_dual(&dual.algebra, w)?;
    let original = algebra_homology(alg);
    let double_dual = algebra_homology(&double.algebra);
    let mut table = ComparisonTable::new("H((A^!)^!) vs H(A)");
    // Every Adams slice within reach is complete on both sides, and outside
    // an algebra's Adams range its slices vanish, so no entry is truncated.
    for a in w.a_min..=w.a_max {
        for h in w.h_min..=w.h_max {
            let d = Bidegree::new(h, a);
            table.push(d, d, double_dual.dim(d), original.dim(d), false);
        }
    }
    Ok(DoubleDualReport {
        original,
        double_dual,
        table,
    })
}
