use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use super::BarError;
use crate::algebra::AlgebraWindow;
use crate::exactlin::{
    homology, Accumulator, ChainComplexWindow, HomologyReport, SparseMatrix, SparseVec,
};
use crate::grading::{sign_scalar, Bidegree, Scalar, Window};

/// A tensor word of letters from the augmentation ideal, as algebra basis indices.
pub type BarWord = Vec<usize>;

/// The bar construction on complete Adams slices: tensor words over the
/// suspended augmentation ideal, deconcatenation coproduct, and the
/// codifferential built from `d` and the product.
#[derive(Clone, Debug)]
pub struct CoalgebraWindow {
    pub name: String,
    letter_labels: HashMap<usize, String>,
    letter_degrees: HashMap<usize, Bidegree>,
    words: Vec<BarWord>,
    degrees: Vec<Bidegree>,
    index: HashMap<BarWord, usize>,
    by_degree: BTreeMap<Bidegree, Vec<usize>>,
    codifferential: Vec<SparseVec>,
    adams_range: (i64, i64),
}

/// Suspended degree of a letter.
fn suspended(d: Bidegree) -> Bidegree {
    d + Bidegree::new(1, 0)
}

impl CoalgebraWindow {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn word(&self, i: usize) -> &BarWord {
        &self.words[i]
    }

    pub fn words(&self) -> &[BarWord] {
        &self.words
    }

    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn degree(&self, i: usize) -> Bidegree {
        self.degrees[i]
    }

    pub fn letter_degree(&self, letter: usize) -> Bidegree {
        self.letter_degrees[&letter]
    }

    /// Letters in algebra-basis order.
    pub fn letters(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.letter_degrees.keys().copied().collect();
        l.sort_unstable();
        l
    }

    pub fn adams_range(&self) -> (i64, i64) {
        self.adams_range
    }

    pub fn indices_at(&self, d: Bidegree) -> &[usize] {
        self.by_degree.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.by_degree.iter().map(|(d, v)| (*d, v.len())).collect()
    }

    pub fn counit_index(&self) -> usize {
        self.index[&Vec::new()]
    }

    pub fn label(&self, i: usize) -> String {
        let parts: Vec<&str> = self.words[i]
            .iter()
            .map(|l| self.letter_labels[l].as_str())
            .collect();
        format!("[{}]", parts.join("|"))
    }

    pub fn codifferential(&self, i: usize) -> &SparseVec {
        &self.codifferential[i]
    }

    pub fn apply_codifferential(&self, x: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, c) in x.iter() {
            acc.add_vec(c, &self.codifferential[i]);
        }
        acc.finish()
    }

    /// Deconcatenation: all splittings `(prefix, suffix)` of word `i`.
    pub fn coproduct(&self, i: usize) -> Vec<(usize, usize)> {
        let w = &self.words[i];
        (0..=w.len())
            .map(|k| (self.index[&w[..k]], self.index[&w[k..]]))
            .collect()
    }

    /// Matrix of the codifferential out of bidegree `from`.
    pub fn codifferential_matrix(&self, from: Bidegree) -> SparseMatrix {
        let tgt = self.indices_at(from + Bidegree::DIFFERENTIAL);
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let cols = self
            .indices_at(from)
            .iter()
            .map(|i| self.codifferential[*i].map_indices(|j| pos[&j]))
            .collect();
        SparseMatrix::from_columns(tgt.len(), cols)
    }

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
            let m = self.codifferential_matrix(*d);
            if !m.is_zero() {
                c.differentials.insert(*d, m);
            }
        }
        c
    }

    pub fn homology(&self) -> HomologyReport {
        homology(&self.to_complex()).expect("codifferential squares to zero")
    }

    /// Checks counit, coassociativity and that the codifferential is a
    /// coderivation: `Δ D = (D ⊗ 1 + 1 ⊗ D) Δ` with the Koszul sign on the
    /// second factor.
    pub fn check_coalgebra(&self) -> Result<(), BarError> {
        let unit = self.counit_index();
        let fail = |i: usize, what: &str| BarError::CoalgebraAxiom {
            word: self.label(i),
            axiom: what.to_string(),
        };
        for i in 0..self.dim() {
            let cp = self.coproduct(i);
            if cp.first() != Some(&(unit, i)) || cp.last() != Some(&(i, unit)) {
                return Err(fail(i, "counit"));
            }
            let mut left: Vec<(usize, usize, usize)> = Vec::new();
            let mut right: Vec<(usize, usize, usize)> = Vec::new();
            for (p, s) in &cp {
                for (p1, p2) in self.coproduct(*p) {
                    left.push((p1, p2, *s));
                }
                for (s1, s2) in self.coproduct(*s) {
                    right.push((*p, s1, s2));
                }
            }
            left.sort_unstable();
            right.sort_unstable();
            if left != right {
                return Err(fail(i, "coassociativity"));
            }

            let mut lhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            for (j, c) in self.codifferential[i].iter() {
                for pair in self.coproduct(j) {
                    *lhs.entry(pair).or_insert_with(Scalar::zero) += c;
                }
            }
            let mut rhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            for (p, s) in cp {
                for (j, c) in self.codifferential[p].iter() {
                    *rhs.entry((j, s)).or_insert_with(Scalar::zero) += c;
                }
                let sign = sign_scalar(self.degrees[p].is_odd());
                for (j, c) in self.codifferential[s].iter() {
                    *rhs.entry((p, j)).or_insert_with(Scalar::zero) += &sign * c;
                }
            }
            lhs.retain(|_, v| !v.is_zero());
            rhs.retain(|_, v| !v.is_zero());
            if lhs != rhs {
                return Err(fail(i, "coderivation"));
            }
        }
        Ok(())
    }
}

/// Builds the bar construction of `alg` on the Adams slices reachable in `w`.
pub fn bar_construction(alg: &AlgebraWindow, w: &Window) -> Result<CoalgebraWindow, BarError> {
    let letters: Vec<usize> = alg.ideal_basis().collect();
    let sign = {
        let signs: Vec<i64> = letters.iter().map(|l| alg.degree(*l).a.signum()).collect();
        if signs.contains(&0) || signs.windows(2).any(|p| p[0] != p[1]) {
            return Err(BarError::NotAdamsConnected {
                algebra: alg.name.clone(),
            });
        }
        signs.first().copied().unwrap_or(1)
    };
    let (lo, hi) = alg.adams_range();
    let reach = w.adams_reach();
    let range = (lo.max(-reach), hi.min(reach));

    // Words by Adams magnitude; each letter has |Adams| ≥ 1.
    let mut by_mag: Vec<Vec<BarWord>> = vec![vec![Vec::new()]];
    let max_mag = range.1.max(-range.0);
    for m in 1..=max_mag {
        let mut here = Vec::new();
        for l in &letters {
            let lm = alg.degree(*l).a * sign;
            if lm > m {
                continue;
            }
            for prev in &by_mag[(m - lm) as usize] {
                let mut w = prev.clone();
                w.push(*l);
                here.push(w);
            }
        }
        by_mag.push(here);
    }
    let word_degree = |w: &[usize]| {
        w.iter()
            .fold(Bidegree::ZERO, |d, l| d + suspended(alg.degree(*l)))
    };
    let mut all: Vec<(Bidegree, BarWord)> = by_mag
        .into_iter()
        .flatten()
        .map(|w| (word_degree(&w), w))
        .collect();
    all.sort_by(|(d1, w1), (d2, w2)| (d1, w1.len(), w1).cmp(&(d2, w2.len(), w2)));

    let mut words = Vec::with_capacity(all.len());
    let mut degrees = Vec::with_capacity(all.len());
    let mut index = HashMap::new();
    let mut by_degree: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
    for (k, (d, w)) in all.into_iter().enumerate() {
        index.insert(w.clone(), k);
        by_degree.entry(d).or_default().push(k);
        words.push(w);
        degrees.push(d);
    }

    let unit = alg.unit();
    let codifferential: Vec<SparseVec> = words
        .par_iter()
        .map(|w| {
            let mut acc = Accumulator::new();
            let mut eps = 0i64;
            for i in 0..w.len() {
                let a = w[i];
                let internal = sign_scalar(eps % 2 == 0);
                for (j, c) in alg.d(a).iter() {
                    let mut v = w.clone();
                    v[i] = j;
                    acc.add(index[&v], &internal * c);
                }
                if i + 1 < w.len() {
                    let merge = sign_scalar((eps + alg.degree(a).h).rem_euclid(2) == 1);
                    let prod = alg
                        .product(a, w[i + 1])
                        .expect("merged letter stays in range");
                    for (j, c) in prod.iter() {
                        assert_ne!(j, unit, "product of ideal elements has a unit component");
                        let mut v = w[..i].to_vec();
                        v.push(j);
                        v.extend_from_slice(&w[i + 2..]);
                        acc.add(index[&v], &merge * c);
                    }
                }
                eps += alg.degree(a).h + 1;
            }
            acc.finish()
        })
        .collect();

    let bar = CoalgebraWindow {
        name: format!("B({})", alg.name),
        letter_labels: letters
            .iter()
            .map(|l| (*l, alg.label(*l).to_string()))
            .collect(),
        letter_degrees: letters.iter().map(|l| (*l, alg.degree(*l))).collect(),
        words,
        degrees,
        index,
        by_degree,
        codifferential,
        adams_range: range,
    };

    let failure = (0..bar.dim())
        .into_par_iter()
        .find_first(|i| !bar.apply_codifferential(&bar.codifferential[*i]).is_zero());
    if let Some(i) = failure {
        return Err(BarError::CodifferentialSquare {
            word: bar.label(i),
            degree: bar.degree(i),
        });
    }
    Ok(bar)
}
