use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::elim::rank;
use super::matrix::SparseMatrix;
use crate::grading::{Bidegree, GradedBasis, Window};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("d∘d ≠ 0 from {source_degree}: entry ({row}, {col}) of the composite is nonzero")]
    NotAComplex {
        source_degree: Bidegree,
        row: usize,
        col: usize,
    },
    #[error("differential out of {0} has shape {1}x{2}, expected {3}x{4}")]
    ShapeMismatch(Bidegree, usize, usize, usize, usize),
}

/// A chain complex materialized over a range of bidegrees.
///
/// Differentials have bidegree `(-1, 0)`. For each Adams degree the complex
/// is materialized on a homological span; `closed` records that every
/// space outside those spans is zero (a complete finite complex), otherwise
/// the span edges are treated as truncated.
#[derive(Clone, Debug, Default)]
pub struct ChainComplexWindow {
    pub basis: GradedBasis,
    /// differential out of each bidegree; a missing entry is the zero map
    pub differentials: BTreeMap<Bidegree, SparseMatrix>,
    pub spans: BTreeMap<i64, (i64, i64)>,
    pub closed: bool,
}

impl ChainComplexWindow {
    /// Registers the homological span `[lo, hi]` for Adams degree `a`.
    pub fn set_span(&mut self, a: i64, lo: i64, hi: i64) {
        for h in lo..=hi {
            self.basis.touch(Bidegree::new(h, a));
        }
        self.spans.insert(a, (lo, hi));
    }

    pub fn dim(&self, d: Bidegree) -> usize {
        self.basis.dim(d)
    }

    fn differential(&self, from: Bidegree) -> SparseMatrix {
        match self.differentials.get(&from) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(self.dim(from + Bidegree::DIFFERENTIAL), self.dim(from)),
        }
    }

    fn check_shapes(&self) -> Result<(), ComplexError> {
        for (from, m) in &self.differentials {
            let (r, c) = (self.dim(*from + Bidegree::DIFFERENTIAL), self.dim(*from));
            if m.nrows() != r || m.ncols() != c {
                return Err(ComplexError::ShapeMismatch(
                    *from,
                    m.nrows(),
                    m.ncols(),
                    r,
                    c,
                ));
            }
        }
        Ok(())
    }

    /// Checks `d∘d = 0` wherever both maps are materialized.
    pub fn check_square_zero(&self) -> Result<(), ComplexError> {
        self.check_shapes()?;
        let failures: Vec<ComplexError> = self
            .differentials
            .par_iter()
            .filter_map(|(from, d1)| {
                let d0 = self.differentials.get(&(*from + Bidegree::DIFFERENTIAL))?;
                let comp = d0.compose(d1);
                comp.first_nonzero()
                    .map(|(row, col, _)| ComplexError::NotAComplex {
                        source_degree: *from,
                        row,
                        col,
                    })
            })
            .collect();
        match failures.into_iter().min_by_key(|e| match e {
            ComplexError::NotAComplex { source_degree, .. } => *source_degree,
            _ => Bidegree::ZERO,
        }) {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Homology dimensions per bidegree with truncation flags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyReport {
    pub dims: BTreeMap<Bidegree, usize>,
    /// bidegrees whose dimension depends on data outside the materialized range
    pub truncated: BTreeSet<Bidegree>,
}

impl HomologyReport {
    pub fn dim(&self, d: Bidegree) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    pub fn is_truncated(&self, d: Bidegree) -> bool {
        self.truncated.contains(&d)
    }

    /// True when `d` was computed and is exact.
    pub fn is_exact_at(&self, d: Bidegree) -> bool {
        self.dims.contains_key(&d) && !self.truncated.contains(&d)
    }

    pub fn restrict(&self, w: &Window) -> HomologyReport {
        HomologyReport {
            dims: self
                .dims
                .iter()
                .filter(|(d, _)| w.contains(**d))
                .map(|(d, n)| (*d, *n))
                .collect(),
            truncated: self
                .truncated
                .iter()
                .filter(|d| w.contains(**d))
                .copied()
                .collect(),
        }
    }

    /// Nonzero entries only.
    pub fn support(&self) -> BTreeMap<Bidegree, usize> {
        self.dims
            .iter()
            .filter(|(_, n)| **n > 0)
            .map(|(d, n)| (*d, *n))
            .collect()
    }

    /// Sum of dimensions over homological degrees at a fixed Adams degree.
    pub fn adams_total(&self, a: i64) -> usize {
        self.dims
            .iter()
            .filter(|(d, _)| d.a == a)
            .map(|(_, n)| n)
            .sum()
    }
}

/// Homology of a complex: `dim ker d_b - rank d_{b+(1,0)}` per bidegree.
pub fn homology(c: &ChainComplexWindow) -> Result<HomologyReport, ComplexError> {
    c.check_square_zero()?;
    let mut degrees: Vec<Bidegree> = Vec::new();
    for (&a, &(lo, hi)) in &c.spans {
        for h in lo..=hi {
            degrees.push(Bidegree::new(h, a));
        }
    }
    // Ranks of every differential touching a materialized degree.
    let needed: BTreeSet<Bidegree> = degrees
        .iter()
        .flat_map(|d| [*d, *d + Bidegree::CONNES])
        .filter(|d| c.dim(*d) > 0 && c.dim(*d + Bidegree::DIFFERENTIAL) > 0)
        .collect();
    let ranks: BTreeMap<Bidegree, usize> = needed
        .into_par_iter()
        .map(|d| (d, rank(&c.differential(d))))
        .collect();
    let rank_at = |d: Bidegree| ranks.get(&d).copied().unwrap_or(0);

    let mut report = HomologyReport::default();
    for d in degrees {
        let (lo, hi) = c.spans[&d.a];
        let dim = c.dim(d) - rank_at(d) - rank_at(d + Bidegree::CONNES);
        report.dims.insert(d, dim);
        if !c.closed && (d.h == lo || d.h == hi) {
            report.truncated.insert(d);
        }
    }
    Ok(report)
}

/// One row of a side-by-side dimension comparison.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DimComparison {
    pub left_degree: Bidegree,
    pub right_degree: Bidegree,
    pub left: usize,
    pub right: usize,
    /// either side may depend on data outside its window; not compared
    pub truncated: bool,
}

impl DimComparison {
    pub fn passes(&self) -> bool {
        self.truncated || self.left == self.right
    }
}

/// Per-bidegree equality table between two dimension computations.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ComparisonTable {
    pub title: String,
    pub rows: Vec<DimComparison>,
}

impl ComparisonTable {
    pub fn new(title: impl Into<String>) -> Self {
        ComparisonTable {
            title: title.into(),
            rows: Vec::new(),
        }
    }

    pub fn push(
        &mut self,
        left_degree: Bidegree,
        right_degree: Bidegree,
        left: usize,
        right: usize,
        truncated: bool,
    ) {
        self.rows.push(DimComparison {
            left_degree,
            right_degree,
            left,
            right,
            truncated,
        });
    }

    pub fn passes(&self) -> bool {
        self.rows.iter().all(DimComparison::passes)
    }

    pub fn failures(&self) -> impl Iterator<Item = &DimComparison> + '_ {
        self.rows.iter().filter(|r| !r.passes())
    }

    /// Number of rows actually compared.
    pub fn compared(&self) -> usize {
        self.rows.iter().filter(|r| !r.truncated).count()
    }
}

/// Euler characteristic `Σ (-1)^h dim` of a dimension table at Adams degree `a`.
pub fn euler_characteristic(dims: &BTreeMap<Bidegree, usize>, a: i64) -> i64 {
    dims.iter()
        .filter(|(d, _)| d.a == a)
        .map(|(d, n)| if d.is_odd() { -(*n as i64) } else { *n as i64 })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::scalar;

    fn complex_from(dims: &[usize], ds: &[SparseMatrix]) -> ChainComplexWindow {
        let mut c = ChainComplexWindow {
            closed: true,
            ..Default::default()
        };
        for (h, n) in dims.iter().enumerate() {
            for i in 0..*n {
                c.basis
                    .push(Bidegree::new(h as i64, 0), format!("e{h}_{i}"));
            }
        }
        c.set_span(0, 0, dims.len() as i64 - 1);
        for (k, d) in ds.iter().enumerate() {
            c.differentials
                .insert(Bidegree::new(k as i64 + 1, 0), d.clone());
        }
        c
    }

    #[test]
    fn zero_differential_gives_underlying_dims() {
        let c = complex_from(&[2, 3, 1], &[]);
        let h = homology(&c).unwrap();
        assert_eq!(h.dim(Bidegree::new(0, 0)), 2);
        assert_eq!(h.dim(Bidegree::new(1, 0)), 3);
        assert_eq!(h.dim(Bidegree::new(2, 0)), 1);
        assert!(h.truncated.is_empty());
    }

    #[test]
    fn identity_is_acyclic() {
        let c = complex_from(&[1, 1], &[SparseMatrix::identity(1)]);
        let h = homology(&c).unwrap();
        assert_eq!(h.dim(Bidegree::new(0, 0)), 0);
        assert_eq!(h.dim(Bidegree::new(1, 0)), 0);
    }

    #[test]
    fn three_term_by_rank_nullity() {
        // dims (2, 3, 2), d1: C1 -> C0 rank 1, d2: C2 -> C1 rank 1.
        // H0 = 2 - 1, H1 = (3 - 1) - 1, H2 = 2 - 1.
        let d1 = SparseMatrix::from_entries(2, 3, [(0, 0, scalar(1))]);
        let d2 = SparseMatrix::from_entries(3, 2, [(1, 0, scalar(1)), (1, 1, scalar(2))]);
        let c = complex_from(&[2, 3, 2], &[d1, d2]);
        let h = homology(&c).unwrap();
        let got: Vec<usize> = (0..3).map(|k| h.dim(Bidegree::new(k, 0))).collect();
        assert_eq!(got, vec![1, 1, 1]);
    }

    #[test]
    fn reports_square_nonzero() {
        let c = complex_from(
            &[1, 1, 1],
            &[SparseMatrix::identity(1), SparseMatrix::identity(1)],
        );
        match homology(&c) {
            Err(ComplexError::NotAComplex { source_degree, .. }) => {
                assert_eq!(source_degree, Bidegree::new(2, 0))
            }
            other => panic!("expected d∘d failure, got {other:?}"),
        }
    }

    #[test]
    fn open_complexes_flag_their_edges() {
        let mut c = complex_from(&[1, 1, 1], &[]);
        c.closed = false;
        let h = homology(&c).unwrap();
        assert!(h.is_truncated(Bidegree::new(0, 0)));
        assert!(!h.is_truncated(Bidegree::new(1, 0)));
        assert!(h.is_truncated(Bidegree::new(2, 0)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// A random complex built as d_k = P_{k-1} Q_k with Q_k P_k = 0 is
        /// awkward to generate; instead take block maps of the form
        /// d_k = [[0, I_r],[0, 0]] conjugated by a permutation of the basis.
        fn arb_complex() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<u64>)> {
            (2usize..5).prop_flat_map(|len| {
                (
                    proptest::collection::vec(0usize..4, len),
                    proptest::collection::vec(0usize..3, len - 1),
                    proptest::collection::vec(any::<u64>(), len),
                )
            })
        }

        proptest! {
            #[test]
            fn euler_characteristic_is_preserved_and_permutation_invariant(
                (extra, ranks, seeds) in arb_complex()
            ) {
                // C_h = image part (rank of d_h) + kernel complement part.
                let len = extra.len();
                let mut r = vec![0usize; len + 1];
                for (k, x) in ranks.iter().enumerate() {
                    r[k + 1] = *x;
                }
                let dims: Vec<usize> = (0..len).map(|h| r[h] + r[h + 1] + extra[h]).collect();
                // Basis of C_h: [targets of d_{h+1} (r[h+1]) | sources of d_h (r[h]) | extra].
                let perm = |h: usize, i: usize| -> usize {
                    let n = dims[h];
                    let shift = (seeds[h] % n.max(1) as u64) as usize;
                    (i + shift) % n.max(1)
                };
                let mut ds = Vec::new();
                for h in 1..len {
                    let entries: Vec<_> = (0..r[h])
                        .map(|i| (perm(h - 1, i), perm(h, r[h + 1] + i), scalar(1)))
                        .collect();
                    ds.push(SparseMatrix::from_entries(dims[h - 1], dims[h], entries));
                }
                let c = complex_from(&dims, &ds);
                let hom = homology(&c).unwrap();
                let chain_dims: BTreeMap<Bidegree, usize> =
                    (0..len).map(|h| (Bidegree::new(h as i64, 0), dims[h])).collect();
                prop_assert_eq!(euler_characteristic(&chain_dims, 0), euler_characteristic(&hom.dims, 0));
                for h in 0..len {
                    prop_assert_eq!(hom.dim(Bidegree::new(h as i64, 0)), extra[h]);
                }
            }
        }
    }
}
