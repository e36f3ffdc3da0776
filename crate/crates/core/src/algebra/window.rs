use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::presentation::Word;
use crate::exactlin::{
    homology, Accumulator, ChainComplexWindow, HomologyReport, SparseMatrix, SparseVec,
};
use crate::grading::{koszul_parity, sign_scalar, Bidegree, GradedBasis, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub degree: Bidegree,
}

/// A bigraded dg algebra materialized on complete Adams slices.
///
/// The basis is `{1} ∪ (basis of the augmentation ideal)`, so the
/// augmentation is the coordinate of the unit. Products are stored for every
/// pair whose Adams degree stays in range; a missing entry is zero.
#[derive(Clone, Debug)]
pub struct AlgebraWindow {
    pub name: String,
    elements: Vec<BasisElement>,
    by_degree: BTreeMap<Bidegree, Vec<usize>>,
    unit: usize,
    adams_range: (i64, i64),
    products: HashMap<(usize, usize), SparseVec>,
    differential: Vec<SparseVec>,
    augmentation: SparseVec,
    word_forms: Option<HashMap<Word, SparseVec>>,
    normal_words: Option<Vec<Word>>,
}

impl AlgebraWindow {
    /// Assembles an algebra from raw tables without checking any axiom; see
    /// [`check_axioms`].
    pub fn from_tables(
        name: impl Into<String>,
        elements: Vec<BasisElement>,
        unit: usize,
        adams_range: (i64, i64),
        products: HashMap<(usize, usize), SparseVec>,
        differential: Vec<SparseVec>,
        augmentation: SparseVec,
    ) -> Self {
        assert_eq!(elements.len(), differential.len());
        let mut by_degree: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            by_degree.entry(e.degree).or_default().push(i);
        }
        let products = products.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        AlgebraWindow {
            name: name.into(),
            elements,
            by_degree,
            unit,
            adams_range,
            products,
            differential,
            augmentation,
            word_forms: None,
            normal_words: None,
        }
    }

    pub(crate) fn with_word_forms(
        mut self,
        forms: HashMap<Word, SparseVec>,
        normal: Vec<Word>,
    ) -> Self {
        self.word_forms = Some(forms);
        self.normal_words = Some(normal);
        self
    }

    /// The normal word represented by basis element `i`, for algebras built
    /// from a presentation.
    pub fn normal_word(&self, i: usize) -> Option<&Word> {
        self.normal_words.as_ref().map(|w| &w[i])
    }

    /// Normal form of a word in the generators, for algebras built from a
    /// presentation. `None` outside the window or for table-built algebras.
    pub fn word_form(&self, w: &[usize]) -> Option<&SparseVec> {
        self.word_forms.as_ref()?.get(w)
    }

    pub fn has_word_forms(&self) -> bool {
        self.word_forms.is_some()
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &BasisElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn degree(&self, i: usize) -> Bidegree {
        self.elements[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i].label
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn adams_range(&self) -> (i64, i64) {
        self.adams_range
    }

    pub fn in_range(&self, a: i64) -> bool {
        self.adams_range.0 <= a && a <= self.adams_range.1
    }

    pub fn augmentation(&self) -> &SparseVec {
        &self.augmentation
    }

    /// Indices of the basis of the augmentation ideal, in basis order.
    pub fn ideal_basis(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.elements.len()).filter(move |i| *i != self.unit)
    }

    pub fn indices_at(&self, d: Bidegree) -> &[usize] {
        self.by_degree.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn basis(&self) -> GradedBasis {
        let mut b = GradedBasis::new();
        for e in &self.elements {
            b.push(e.degree, e.label.clone());
        }
        b
    }

    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.by_degree.iter().map(|(d, v)| (*d, v.len())).collect()
    }

    /// Product of two basis elements; `None` when it leaves the window.
    pub fn product(&self, i: usize, j: usize) -> Option<SparseVec> {
        let a = self.degree(i).a + self.degree(j).a;
        if !self.in_range(a) {
            return None;
        }
        Some(self.products.get(&(i, j)).cloned().unwrap_or_default())
    }

    pub fn product_ref(&self, i: usize, j: usize) -> Option<&SparseVec> {
        self.products.get(&(i, j))
    }

    pub fn multiply(&self, x: &SparseVec, y: &SparseVec) -> Option<SparseVec> {
        let mut acc = Accumulator::new();
        for (i, p) in x.iter() {
            for (j, q) in y.iter() {
                let v = self.product(i, j)?;
                acc.add_vec(&(p * q), &v);
            }
        }
        Some(acc.finish())
    }

    pub fn d(&self, i: usize) -> &SparseVec {
        &self.differential[i]
    }

    pub fn apply_d(&self, x: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, q) in x.iter() {
            acc.add_vec(q, &self.differential[i]);
        }
        acc.finish()
    }

    /// Matrix of `d` out of bidegree `from`, in the bases of `from` and `from + (-1, 0)`.
    pub fn differential_matrix(&self, from: Bidegree) -> SparseMatrix {
        let src = self.indices_at(from);
        let tgt = self.indices_at(from + Bidegree::DIFFERENTIAL);
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let cols = src
            .iter()
            .map(|i| self.differential[*i].map_indices(|j| pos[&j]))
            .collect();
        SparseMatrix::from_columns(tgt.len(), cols)
    }

    /// Iterates over all stored nonzero products.
    pub fn product_table(&self) -> impl Iterator<Item = (&(usize, usize), &SparseVec)> + '_ {
        self.products.iter()
    }
}

impl AlgebraWindow {
    /// The underlying chain complex; every Adams slice is complete.
    pub fn to_complex(&self) -> ChainComplexWindow {
        let mut c = ChainComplexWindow {
            closed: true,
            ..Default::default()
        };
        let mut spans: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
        for (d, idx) in &self.by_degree {
            for i in idx {
                c.basis.push(*d, self.label(*i));
            }
            let s = spans.entry(d.a).or_insert((d.h, d.h));
            s.0 = s.0.min(d.h);
            s.1 = s.1.max(d.h);
        }
        for (a, (lo, hi)) in spans {
            c.set_span(a, lo, hi);
        }
        for d in self.by_degree.keys() {
            let m = self.differential_matrix(*d);
            if !m.is_zero() {
                c.differentials.insert(*d, m);
            }
        }
        c
    }
}

/// Homology of the underlying complex of an algebra.
pub fn algebra_homology(alg: &AlgebraWindow) -> HomologyReport {
    homology(&alg.to_complex()).expect("algebra differentials square to zero")
}

/// One failed axiom, with the basis elements witnessing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    DifferentialDegree {
        element: usize,
    },
    DifferentialSquare {
        element: usize,
        degree: Bidegree,
    },
    ProductDegree {
        left: usize,
        right: usize,
    },
    Unit {
        element: usize,
    },
    Augmentation {
        detail: String,
    },
    Associativity {
        a: usize,
        b: usize,
        c: usize,
        degree: Bidegree,
    },
    Leibniz {
        left: usize,
        right: usize,
        degree: Bidegree,
    },
}

/// Diagnostics from [`check_axioms`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    pub triples_checked: usize,
    pub pairs_checked: usize,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Enumerates every in-window violation of d² = 0, degree compatibility,
/// unit, augmentation, associativity and the Leibniz rule.
pub fn check_axioms(alg: &AlgebraWindow) -> AxiomReport {
    let n = alg.dim();
    let mut report = AxiomReport::default();
    let v = &mut report.violations;

    for i in 0..n {
        let want = alg.degree(i) + Bidegree::DIFFERENTIAL;
        if alg.d(i).iter().any(|(j, _)| alg.degree(j) != want) {
            v.push(AxiomViolation::DifferentialDegree { element: i });
        }
        if !alg.apply_d(alg.d(i)).is_zero() {
            v.push(AxiomViolation::DifferentialSquare {
                element: i,
                degree: alg.degree(i),
            });
        }
    }

    let unit = alg.unit();
    if alg.degree(unit) != Bidegree::ZERO {
        v.push(AxiomViolation::Unit { element: unit });
    }
    for i in 0..n {
        let e = SparseVec::unit(i);
        if alg.product(unit, i).as_ref() != Some(&e) || alg.product(i, unit).as_ref() != Some(&e) {
            v.push(AxiomViolation::Unit { element: i });
        }
    }
    if !alg.d(unit).is_zero() {
        v.push(AxiomViolation::Unit { element: unit });
    }

    let eps = alg.augmentation();
    if eps.get(unit) != Scalar::one() {
        v.push(AxiomViolation::Augmentation {
            detail: "ε(1) ≠ 1".into(),
        });
    }
    for i in 0..n {
        if !eps.dot(alg.d(i)).is_zero() {
            v.push(AxiomViolation::Augmentation {
                detail: format!("ε(d {}) ≠ 0", alg.label(i)),
            });
        }
    }

    // Pairs: product degrees, augmentation multiplicativity, Leibniz.
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| alg.in_range(alg.degree(*i).a + alg.degree(*j).a))
        .collect();
    report.pairs_checked = pairs.len();
    let pair_violations: Vec<AxiomViolation> = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let mut out = Vec::new();
            let prod = alg.product(i, j).unwrap_or_default();
            let want = alg.degree(i) + alg.degree(j);
            if prod.iter().any(|(k, _)| alg.degree(k) != want) {
                out.push(AxiomViolation::ProductDegree { left: i, right: j });
            }
            if eps.dot(&prod) != eps.get(i) * eps.get(j) {
                out.push(AxiomViolation::Augmentation {
                    detail: format!("ε({}·{}) ≠ ε·ε", alg.label(i), alg.label(j)),
                });
            }
            let lhs = alg.apply_d(&prod);
            let ei = SparseVec::unit(i);
            let ej = SparseVec::unit(j);
            let t1 = alg.multiply(alg.d(i), &ej).unwrap_or_default();
            let t2 = alg.multiply(&ei, alg.d(j)).unwrap_or_default();
            let sign = sign_scalar(koszul_parity(alg.degree(i).h, 1));
            let rhs = t1.add_scaled(&sign, &t2);
            if lhs != rhs {
                out.push(AxiomViolation::Leibniz {
                    left: i,
                    right: j,
                    degree: want,
                });
            }
            out
        })
        .collect();
    v.extend(pair_violations);

    // Triples for associativity.
    let triples: Vec<(usize, usize, usize)> = pairs
        .iter()
        .flat_map(|&(i, j)| (0..n).map(move |k| (i, j, k)))
        .filter(|(i, j, k)| alg.in_range(alg.degree(*i).a + alg.degree(*j).a + alg.degree(*k).a))
        .collect();
    report.triples_checked = triples.len();
    let assoc: Vec<AxiomViolation> = triples
        .par_iter()
        .filter_map(|&(i, j, k)| {
            let ij = alg.product(i, j)?;
            let jk = alg.product(j, k)?;
            let left = alg.multiply(&ij, &SparseVec::unit(k))?;
            let right = alg.multiply(&SparseVec::unit(i), &jk)?;
            (left != right).then(|| AxiomViolation::Associativity {
                a: i,
                b: j,
                c: k,
                degree: alg.degree(i) + alg.degree(j) + alg.degree(k),
            })
        })
        .collect();
    v.extend(assoc);
    report
}

/// Expands a sparse vector into a readable string, for diagnostics.
pub fn render_element(alg: &AlgebraWindow, x: &SparseVec) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.iter()
        .map(|(i, q)| {
            if q.is_one() {
                alg.label(i).to_string()
            } else {
                format!("({q})·{}", alg.label(i))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::scalar;

    /// Basis 1, x (1,1), y (0,1), xy (1,2), t (0,2) with x·y = xy the only
    /// nontrivial product and d(xy) given.
    fn tiny(d_of_xy: SparseVec) -> AlgebraWindow {
        let elements = vec![
            BasisElement {
                label: "1".into(),
                degree: Bidegree::new(0, 0),
            },
            BasisElement {
                label: "x".into(),
                degree: Bidegree::new(1, 1),
            },
            BasisElement {
                label: "y".into(),
                degree: Bidegree::new(0, 1),
            },
            BasisElement {
                label: "xy".into(),
                degree: Bidegree::new(1, 2),
            },
            BasisElement {
                label: "t".into(),
                degree: Bidegree::new(0, 2),
            },
        ];
        let mut products = HashMap::new();
        for i in 0..5 {
            products.insert((0, i), SparseVec::unit(i));
            products.insert((i, 0), SparseVec::unit(i));
        }
        products.insert((1, 2), SparseVec::unit(3));
        let mut differential = vec![SparseVec::new(); 5];
        differential[3] = d_of_xy;
        AlgebraWindow::from_tables(
            "tiny",
            elements,
            0,
            (0, 2),
            products,
            differential,
            SparseVec::unit(0),
        )
    }

    #[test]
    fn leibniz_violation_is_reported_once() {
        // Leibniz forces d(x·y) = 0; claim d(xy) = t instead.
        let alg = tiny(SparseVec::unit(4));
        let report = check_axioms(&alg);
        let leibniz: Vec<_> = report
            .violations
            .iter()
            .filter(|v| matches!(v, AxiomViolation::Leibniz { .. }))
            .collect();
        assert_eq!(leibniz.len(), 1, "{:?}", report.violations);
        assert!(matches!(
            leibniz[0],
            AxiomViolation::Leibniz {
                left: 1,
                right: 2,
                ..
            }
        ));
    }

    #[test]
    fn consistent_tables_are_clean() {
        let alg = tiny(SparseVec::new());
        let report = check_axioms(&alg);
        assert!(report.is_clean(), "{:?}", report.violations);
    }

    #[test]
    fn nonassociative_triple_is_reported() {
        // 0 = 1, 1 = p (0,1), 2 = q (0,2), 3 = r (0,3)
        let elements = vec![
            BasisElement {
                label: "1".into(),
                degree: Bidegree::new(0, 0),
            },
            BasisElement {
                label: "p".into(),
                degree: Bidegree::new(0, 1),
            },
            BasisElement {
                label: "q".into(),
                degree: Bidegree::new(0, 2),
            },
            BasisElement {
                label: "r".into(),
                degree: Bidegree::new(0, 3),
            },
        ];
        let mut products = HashMap::new();
        for i in 0..4 {
            products.insert((0, i), SparseVec::unit(i));
            products.insert((i, 0), SparseVec::unit(i));
        }
        products.insert((1, 1), SparseVec::unit(2));
        products.insert((2, 1), SparseVec::unit(3));
        products.insert((1, 2), SparseVec::unit(3).scale(&scalar(2)));
        let alg = AlgebraWindow::from_tables(
            "skew",
            elements,
            0,
            (0, 3),
            products,
            vec![SparseVec::new(); 4],
            SparseVec::unit(0),
        );
        let report = check_axioms(&alg);
        let assoc: Vec<_> = report
            .violations
            .iter()
            .filter(|v| matches!(v, AxiomViolation::Associativity { .. }))
            .collect();
        assert_eq!(
            assoc,
            vec![&AxiomViolation::Associativity {
                a: 1,
                b: 1,
                c: 1,
                degree: Bidegree::new(0, 3)
            }]
        );
    }
}
