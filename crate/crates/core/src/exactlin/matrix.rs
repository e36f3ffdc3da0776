use num_traits::Zero;

use super::sparse::{Accumulator, SparseVec};
use crate::grading::Scalar;

/// Sparse rational matrix stored by columns: column `j` is the image of the
/// `j`-th source basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: (0..n).map(SparseVec::unit).collect(),
        }
    }

    /// Panics if a column refers to a row index `>= rows`.
    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        for c in &cols {
            if let Some(m) = c.max_index() {
                assert!(m < rows, "column entry {m} out of range for {rows} rows");
            }
        }
        SparseMatrix { rows, cols }
    }

    /// Builds from `(row, col, value)` triples; duplicates are summed.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut acc: Vec<Accumulator> = (0..cols).map(|_| Accumulator::new()).collect();
        for (r, c, q) in entries {
            assert!(
                r < rows && c < cols,
                "entry ({r}, {c}) outside {rows}x{cols}"
            );
            acc[c].add(r, q);
        }
        SparseMatrix {
            rows,
            cols: acc.into_iter().map(Accumulator::finish).collect(),
        }
    }

    /// Dense convenience constructor, mostly for tests.
    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let entries = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(move |(c, q)| (r, c, q.clone()))
        });
        SparseMatrix::from_entries(nrows, ncols, entries)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.cols[c].get(r)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    /// All nonzero entries as `(row, col, value)`, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, v)| v.iter().map(move |(r, q)| (r, c, q)))
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (j, q) in v.iter() {
            acc.add_vec(q, &self.cols[j]);
        }
        acc.finish()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.nrows(), "dimension mismatch in compose");
        SparseMatrix {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let entries: Vec<_> = self.entries().map(|(r, c, q)| (c, r, q.clone())).collect();
        SparseMatrix::from_entries(self.ncols(), self.nrows(), entries)
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.ncols(), other.ncols());
        let one = Scalar::from_integer(1.into());
        SparseMatrix {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.add_scaled(&one, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// First nonzero entry, used for diagnostics.
    pub fn first_nonzero(&self) -> Option<(usize, usize, Scalar)> {
        self.entries().next().map(|(r, c, q)| (r, c, q.clone()))
    }
}
