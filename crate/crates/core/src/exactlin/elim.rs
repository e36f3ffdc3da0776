//! Exact elimination.
//!
//! `rank` clears denominators and runs a fraction-free sparse elimination:
//! vectors are inserted sparsest first, each is reduced against the pivot
//! vectors by cross-multiplication and divided by its content after every
//! step, so entries stay integral and small. The elimination runs in `i128`
//! with checked arithmetic and restarts over `BigInt` on overflow.
//!
//! [`Rref`] is the rational reduced echelon form used for kernels, ideal
//! spans and normal forms. Its pivot set is the set of leading columns of the
//! row space, independent of insertion order.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::SparseMatrix;
use super::sparse::SparseVec;
use crate::grading::Scalar;

trait ElimInt: Clone + Sized {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn is_unit(&self) -> bool;
}

impl ElimInt for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
}

impl ElimInt for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

type IntVec<T> = Vec<(usize, T)>;

/// Scales a rational vector to a primitive integer vector.
fn integral(v: &SparseVec) -> IntVec<BigInt> {
    let mut lcm = BigInt::one();
    for (_, q) in v.iter() {
        lcm = lcm.lcm(q.denom());
    }
    v.iter()
        .map(|(i, q)| (i, q.numer() * (&lcm / q.denom())))
        .collect()
}

fn make_primitive<T: ElimInt>(v: &mut IntVec<T>) {
    let mut g: Option<T> = None;
    for (_, x) in v.iter() {
        g = Some(match g {
            None => x.clone(),
            Some(g) => g.gcd(x),
        });
        if g.as_ref().is_some_and(ElimInt::is_unit) {
            return;
        }
    }
    if let Some(g) = g {
        if !g.is_zero() && !g.is_unit() {
            for (_, x) in v.iter_mut() {
                *x = x.div_exact(&g);
            }
        }
    }
}

/// `lp * v - lv * p`, dropping the leading column. Returns None on overflow.
fn cross_reduce<T: ElimInt>(v: &IntVec<T>, p: &IntVec<T>) -> Option<IntVec<T>> {
    let lv = &v[0].1;
    let lp = &p[0].1;
    let g = lv.gcd(lp);
    let (fv, fp) = (lp.div_exact(&g), lv.div_exact(&g));
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (1, 1);
    while i < v.len() || j < p.len() {
        if j == p.len() || (i < v.len() && v[i].0 < p[j].0) {
            out.push((v[i].0, v[i].1.mul(&fv)?));
            i += 1;
        } else if i == v.len() || p[j].0 < v[i].0 {
            out.push((
                p[j].0,
                T::from_big(&BigInt::zero())?.sub(&p[j].1.mul(&fp)?)?,
            ));
            j += 1;
        } else {
            let x = v[i].1.mul(&fv)?.sub(&p[j].1.mul(&fp)?)?;
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn echelon_rank<T: ElimInt>(vectors: &[IntVec<BigInt>]) -> Option<usize> {
    let mut pivots: HashMap<usize, IntVec<T>> = HashMap::new();
    let mut rank = 0;
    for v in vectors {
        let mut v: IntVec<T> = v
            .iter()
            .map(|(i, x)| T::from_big(x).map(|x| (*i, x)))
            .collect::<Option<_>>()?;
        while let Some(&(lead, _)) = v.first() {
            match pivots.get(&lead) {
                None => {
                    make_primitive(&mut v);
                    pivots.insert(lead, v);
                    rank += 1;
                    break;
                }
                Some(p) => {
                    v = cross_reduce(&v, p)?;
                    make_primitive(&mut v);
                }
            }
        }
    }
    Some(rank)
}

/// Exact rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    // rank(M) = rank(M^T): eliminate along whichever side has fewer vectors.
    let vectors: Vec<SparseVec> = if m.ncols() <= m.nrows() {
        m.columns().to_vec()
    } else {
        m.transpose().columns().to_vec()
    };
    rank_of_vectors(&vectors)
}

/// Dimension of the span of a family of vectors.
pub fn rank_of_vectors(vectors: &[SparseVec]) -> usize {
    let mut ints: Vec<IntVec<BigInt>> = vectors
        .iter()
        .filter(|v| !v.is_zero())
        .map(integral)
        .collect();
    ints.sort_by_key(Vec::len);
    match echelon_rank::<i128>(&ints) {
        Some(r) => r,
        None => echelon_rank::<BigInt>(&ints).expect("BigInt elimination cannot overflow"),
    }
}

/// Reduced row echelon form of a family of rational vectors.
#[derive(Clone, Debug, Default)]
pub struct Rref {
    /// pivot column -> reduced row (pivot entry 1, zero at every other pivot column)
    rows: HashMap<usize, SparseVec>,
}

impl Rref {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows<'a, I: IntoIterator<Item = &'a SparseVec>>(rows: I) -> Self {
        let mut r = Rref::new();
        for v in rows {
            r.insert(v);
        }
        r
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<_> = self.rows.keys().copied().collect();
        p.sort_unstable();
        p
    }

    /// Row with the given pivot.
    pub fn row(&self, pivot: usize) -> Option<&SparseVec> {
        self.rows.get(&pivot)
    }

    /// Reduces `v` modulo the row space: the result has no pivot-column entries.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        let hits: Vec<(usize, Scalar)> = v
            .iter()
            .filter(|(i, _)| self.rows.contains_key(i))
            .map(|(i, q)| (i, q.clone()))
            .collect();
        for (i, q) in hits {
            out = out.add_scaled(&-q, &self.rows[&i]);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds a vector; returns true when it enlarged the row space.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some(&(lead, ref c)) = r.entries().first() else {
            return false;
        };
        let inv = c.recip();
        let r = r.scale(&inv);
        for row in self.rows.values_mut() {
            let c = row.get(lead);
            if !c.is_zero() {
                *row = row.add_scaled(&-c, &r);
            }
        }
        self.rows.insert(lead, r);
        true
    }
}

/// Basis of the null space of `m`, one vector per free column.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let rows = m.transpose();
    let rref = Rref::from_rows(rows.columns());
    let mut pivot_rows: Vec<(usize, &SparseVec)> = rref.rows.iter().map(|(p, r)| (*p, r)).collect();
    pivot_rows.sort_by_key(|(p, _)| *p);
    (0..m.ncols())
        .filter(|c| !rref.is_pivot(*c))
        .map(|free| {
            let mut pairs = vec![(free, Scalar::one())];
            for (p, r) in &pivot_rows {
                let c = r.get(free);
                if !c.is_zero() {
                    pairs.push((*p, -c));
                }
            }
            SparseVec::from_pairs(pairs)
        })
        .collect()
}

/// Solves `m x = b`, returning one solution when it exists.
pub fn solve(m: &SparseMatrix, b: &SparseVec) -> Option<SparseVec> {
    // Augmented columns: eliminate rows of [M | b] tracking which combination
    // produced each pivot row.
    let n = m.ncols();
    let rows = m.transpose();
    let mut aug = Rref::new();
    for (i, r) in rows.columns().iter().enumerate() {
        let mut pairs: Vec<(usize, Scalar)> = r.iter().map(|(c, q)| (c, q.clone())).collect();
        pairs.push((n, b.get(i)));
        aug.insert(&SparseVec::from_pairs(pairs));
    }
    if aug.is_pivot(n) {
        return None;
    }
    let mut pairs = Vec::new();
    for (p, r) in &aug.rows {
        let rhs = r.get(n);
        if !rhs.is_zero() {
            pairs.push((*p, rhs));
        }
    }
    Some(SparseVec::from_pairs(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::scalar;

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|x| scalar(*x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    /// Textbook dense Gaussian elimination, kept independent of the sparse path.
    fn dense_rank_oracle(rows: &[Vec<Scalar>]) -> usize {
        let mut a = rows.to_vec();
        let ncols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..a.len() {
                if r != rank && !a[r][col].is_zero() {
                    let f = &a[r][col] / &a[rank][col];
                    for c in 0..ncols {
                        let delta = &f * &a[rank][c];
                        a[r][c] -= delta;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::zero(3, 3)), 0);
        assert_eq!(rank(&SparseMatrix::identity(5)), 5);
        let m = vec![vec![scalar(1), scalar(2)], vec![scalar(2), scalar(4)]];
        assert_eq!(dense_rank_oracle(&m), 1);
        assert_eq!(rank(&SparseMatrix::from_dense(&m)), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(4)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zero(2, 3)).len(), 3);
        let k = kernel_basis(&dense(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].get(0), -k[0].get(1));
        assert!(!k[0].get(0).is_zero());
    }

    #[test]
    fn rank_survives_overflow_of_the_fast_path() {
        // Entries near 2^100 force the BigInt fallback.
        let big = BigInt::one() << 100usize;
        let q = |x: BigInt| Scalar::from_integer(x);
        let m = SparseMatrix::from_dense(&[
            vec![q(big.clone()), q(big.clone() + 1), q(BigInt::from(3))],
            vec![q(big.clone() + 7), q(big.clone()), q(BigInt::from(5))],
            vec![
                q(big.clone() * 2 + 7),
                q(big.clone() * 2 + 1),
                q(BigInt::from(8)),
            ],
        ]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn solve_finds_preimages() {
        let m = dense(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = SparseVec::from_pairs([(0, scalar(2)), (1, scalar(3))]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.apply(&x), b);
        let m = dense(&[&[1, 1], &[1, 1]]);
        let b = SparseVec::from_pairs([(0, scalar(1))]);
        assert!(solve(&m, &b).is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
            (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
                proptest::collection::vec(
                    proptest::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..4], c),
                    r,
                )
            })
        }

        fn to_rows(m: &[Vec<i64>]) -> Vec<Vec<Scalar>> {
            m.iter()
                .map(|r| r.iter().map(|x| scalar(*x)).collect())
                .collect()
        }

        proptest! {
            #[test]
            fn rank_matches_dense_oracle(m in arb_matrix()) {
                let rows = to_rows(&m);
                prop_assert_eq!(rank(&SparseMatrix::from_dense(&rows)), dense_rank_oracle(&rows));
            }

            #[test]
            fn kernel_vectors_are_annihilated(m in arb_matrix()) {
                let sm = SparseMatrix::from_dense(&to_rows(&m));
                let k = kernel_basis(&sm);
                prop_assert_eq!(k.len(), sm.ncols() - rank(&sm));
                for v in &k {
                    prop_assert!(sm.apply(v).is_zero());
                }
                prop_assert_eq!(rank_of_vectors(&k), k.len());
            }
        }
    }
}
