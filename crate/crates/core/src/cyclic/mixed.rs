use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;

use super::CyclicError;
use crate::algebra::{AlgebraMorphism, AlgebraWindow};
use crate::bar::{dual_of_coalgebra, CoalgebraWindow};
use crate::exactlin::{
    homology, Accumulator, ChainComplexWindow, HomologyReport, SparseMatrix, SparseVec,
};
use crate::grading::{sign_scalar, Bidegree, Window};

/// A Hochschild chain `a0[a1|…|an]` as algebra basis indices.
pub type Chain = (usize, Vec<usize>);

/// Spaces with two anticommuting differentials: `b` of bidegree (-1, 0) and
/// `B` of bidegree (+1, 0). Operators are stored as images of basis vectors.
#[derive(Debug)]
pub struct MixedComplexWindow {
    pub name: String,
    labels: Vec<String>,
    degrees: Vec<Bidegree>,
    by_degree: BTreeMap<Bidegree, Vec<usize>>,
    b: Vec<SparseVec>,
    connes: Vec<SparseVec>,
    adams_range: (i64, i64),
    chains: Option<(Vec<Chain>, HashMap<Chain, usize>)>,
    transposes: OnceLock<(Vec<SparseVec>, Vec<SparseVec>)>,
}

fn transpose_columns(cols: &[SparseVec]) -> Vec<SparseVec> {
    let mut acc: Vec<Accumulator> = (0..cols.len()).map(|_| Accumulator::new()).collect();
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col.iter() {
            acc[i].add(j, c.clone());
        }
    }
    acc.into_iter().map(Accumulator::finish).collect()
}

fn apply(cols: &[SparseVec], x: &SparseVec) -> SparseVec {
    let mut acc = Accumulator::new();
    for (i, c) in x.iter() {
        acc.add_vec(c, &cols[i]);
    }
    acc.finish()
}

impl Clone for MixedComplexWindow {
    fn clone(&self) -> Self {
        MixedComplexWindow {
            name: self.name.clone(),
            labels: self.labels.clone(),
            degrees: self.degrees.clone(),
            by_degree: self.by_degree.clone(),
            b: self.b.clone(),
            connes: self.connes.clone(),
            adams_range: self.adams_range,
            chains: self.chains.clone(),
            transposes: OnceLock::new(),
        }
    }
}

impl MixedComplexWindow {
    /// Assembles a mixed complex and verifies `b² = 0`, `B² = 0` and
    /// `bB + Bb = 0` on every basis vector.
    pub fn from_operators(
        name: impl Into<String>,
        labels: Vec<String>,
        degrees: Vec<Bidegree>,
        b: Vec<SparseVec>,
        connes: Vec<SparseVec>,
        adams_range: (i64, i64),
    ) -> Result<Self, CyclicError> {
        let mut by_degree: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
        for (i, d) in degrees.iter().enumerate() {
            by_degree.entry(*d).or_default().push(i);
        }
        let m = MixedComplexWindow {
            name: name.into(),
            labels,
            degrees,
            by_degree,
            b,
            connes,
            adams_range,
            chains: None,
            transposes: OnceLock::new(),
        };
        m.check_identities()?;
        Ok(m)
    }

    pub fn check_identities(&self) -> Result<(), CyclicError> {
        let n = self.dim();
        for i in 0..n {
            for (j, _) in self.b[i].iter() {
                assert_eq!(
                    self.degrees[j],
                    self.degrees[i] + Bidegree::DIFFERENTIAL,
                    "b has bidegree (-1, 0)"
                );
            }
            for (j, _) in self.connes[i].iter() {
                assert_eq!(
                    self.degrees[j],
                    self.degrees[i] + Bidegree::CONNES,
                    "B has bidegree (+1, 0)"
                );
            }
        }
        let failure = (0..n).into_par_iter().find_map_first(|i| {
            let bb = apply(&self.b, &self.b[i]);
            if !bb.is_zero() {
                return Some((i, "b² = 0"));
            }
            let cc = apply(&self.connes, &self.connes[i]);
            if !cc.is_zero() {
                return Some((i, "B² = 0"));
            }
            let anti = apply(&self.b, &self.connes[i])
                .add_scaled(&crate::grading::scalar(1), &apply(&self.connes, &self.b[i]));
            if !anti.is_zero() {
                return Some((i, "bB + Bb = 0"));
            }
            None
        });
        match failure {
            Some((i, identity)) => Err(CyclicError::MixedIdentity {
                identity: identity.to_string(),
                degree: self.degrees[i],
                chain: self.labels[i].clone(),
            }),
            None => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> Bidegree {
        self.degrees[i]
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

    /// Homological span of the chains at Adams degree `a`.
    pub fn span(&self, a: i64) -> Option<(i64, i64)> {
        let hs: Vec<i64> = self
            .by_degree
            .keys()
            .filter(|d| d.a == a)
            .map(|d| d.h)
            .collect();
        Some((*hs.iter().min()?, *hs.iter().max()?))
    }

    pub fn adams_degrees(&self) -> Vec<i64> {
        let mut a: Vec<i64> = self.by_degree.keys().map(|d| d.a).collect();
        a.sort_unstable();
        a.dedup();
        a
    }

    pub fn b_of(&self, i: usize) -> &SparseVec {
        &self.b[i]
    }

    pub fn connes_of(&self, i: usize) -> &SparseVec {
        &self.connes[i]
    }

    pub fn apply_b(&self, x: &SparseVec) -> SparseVec {
        apply(&self.b, x)
    }

    pub fn apply_connes(&self, x: &SparseVec) -> SparseVec {
        apply(&self.connes, x)
    }

    fn transposes(&self) -> &(Vec<SparseVec>, Vec<SparseVec>) {
        self.transposes
            .get_or_init(|| (transpose_columns(&self.b), transpose_columns(&self.connes)))
    }

    /// `b*φ = φ ∘ b` on a cochain given in the dual basis.
    pub fn apply_b_dual(&self, phi: &SparseVec) -> SparseVec {
        apply(&self.transposes().0, phi)
    }

    /// `B*φ = φ ∘ B`.
    pub fn apply_connes_dual(&self, phi: &SparseVec) -> SparseVec {
        apply(&self.transposes().1, phi)
    }

    /// Matrix of an operator from bidegree `from` to `from + shift`.
    pub(crate) fn block(&self, connes: bool, from: Bidegree) -> SparseMatrix {
        let (ops, shift) = if connes {
            (&self.connes, Bidegree::CONNES)
        } else {
            (&self.b, Bidegree::DIFFERENTIAL)
        };
        let tgt = self.indices_at(from + shift);
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let cols = self
            .indices_at(from)
            .iter()
            .map(|i| ops[*i].map_indices(|j| pos[&j]))
            .collect();
        SparseMatrix::from_columns(tgt.len(), cols)
    }

    /// The Hochschild complex `(C, b)`; each Adams slice is complete.
    pub fn hochschild_complex(&self) -> ChainComplexWindow {
        let mut c = ChainComplexWindow {
            closed: true,
            ..Default::default()
        };
        for (d, idx) in &self.by_degree {
            for i in idx {
                c.basis.push(*d, self.labels[*i].clone());
            }
        }
        for a in self.adams_degrees() {
            let (lo, hi) = self.span(a).unwrap();
            c.set_span(a, lo, hi);
        }
        for d in self.by_degree.keys() {
            let m = self.block(false, *d);
            if !m.is_zero() {
                c.differentials.insert(*d, m);
            }
        }
        c
    }

    pub fn hochschild_homology(&self) -> HomologyReport {
        homology(&self.hochschild_complex()).expect("b² = 0 was verified")
    }

    /// Index of a Hochschild chain, for complexes built from an algebra.
    pub fn chain_index(&self, a0: usize, letters: &[usize]) -> Option<usize> {
        let (_, idx) = self.chains.as_ref()?;
        idx.get(&(a0, letters.to_vec())).copied()
    }

    pub fn chain(&self, i: usize) -> Option<&Chain> {
        self.chains.as_ref().map(|(c, _)| &c[i])
    }
}

/// Words over the augmentation ideal grouped by Adams magnitude, up to `max_mag`.
pub(crate) fn ideal_words(alg: &AlgebraWindow, sign: i64, max_mag: i64) -> Vec<Vec<Vec<usize>>> {
    let letters: Vec<usize> = alg.ideal_basis().collect();
    let mut by_mag: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    for m in 1..=max_mag {
        let mut here = Vec::new();
        for l in &letters {
            let lm = alg.degree(*l).a * sign;
            if lm < 1 || lm > m {
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
    by_mag
}

fn adams_sign(alg: &AlgebraWindow) -> Result<i64, CyclicError> {
    let signs: Vec<i64> = alg
        .ideal_basis()
        .map(|l| alg.degree(l).a.signum())
        .collect();
    if signs.contains(&0) || signs.windows(2).any(|p| p[0] != p[1]) {
        return Err(CyclicError::Unbounded {
            algebra: alg.name.clone(),
        });
    }
    Ok(signs.first().copied().unwrap_or(1))
}

fn chain_label(alg: &AlgebraWindow, (a0, w): &Chain) -> String {
    let letters: Vec<&str> = w.iter().map(|l| alg.label(*l)).collect();
    format!("{}[{}]", alg.label(*a0), letters.join("|"))
}

/// The normalized Hochschild mixed complex on the Adams slices reachable in `w`.
pub fn hochschild_mixed(
    alg: &AlgebraWindow,
    w: &Window,
) -> Result<MixedComplexWindow, CyclicError> {
    let sign = adams_sign(alg)?;
    let (lo, hi) = alg.adams_range();
    let reach = w.adams_reach();
    let range = (lo.max(-reach), hi.min(reach));
    let max_mag = range.1.max(-range.0);
    let words = ideal_words(alg, sign, max_mag);

    let deg = |x: usize| alg.degree(x);
    let mut chains: Vec<(Bidegree, Chain)> = Vec::new();
    for a0 in 0..alg.dim() {
        let m0 = deg(a0).a * sign;
        if m0 > max_mag {
            continue;
        }
        for ws in &words[..=(max_mag - m0) as usize] {
            for word in ws {
                let d = word
                    .iter()
                    .fold(deg(a0), |d, l| d + deg(*l) + Bidegree::new(1, 0));
                chains.push((d, (a0, word.clone())));
            }
        }
    }
    chains.sort_by(|(d1, c1), (d2, c2)| (d1, c1.1.len(), c1).cmp(&(d2, c2.1.len(), c2)));
    let degrees: Vec<Bidegree> = chains.iter().map(|(d, _)| *d).collect();
    let chains: Vec<Chain> = chains.into_iter().map(|(_, c)| c).collect();
    let index: HashMap<Chain, usize> = chains
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    let unit = alg.unit();
    let h = |x: usize| deg(x).h;

    let b: Vec<SparseVec> = chains
        .par_iter()
        .map(|(a0, w)| {
            let (a0, n) = (*a0, w.len());
            let mut acc = Accumulator::new();
            let mut add = |c0: usize, letters: Vec<usize>, coeff: crate::grading::Scalar| {
                acc.add(index[&(c0, letters)], coeff);
            };
            // e[i] = |a0| + Σ_{k≤i} (|a_k| + 1)
            let mut e = vec![h(a0)];
            for l in w {
                e.push(e.last().unwrap() + h(*l) + 1);
            }
            for (j, c) in alg.d(a0).iter() {
                add(j, w.clone(), c.clone());
            }
            for i in 1..=n {
                let s = sign_scalar(e[i - 1].rem_euclid(2) == 0);
                for (j, c) in alg.d(w[i - 1]).iter() {
                    let mut v = w.clone();
                    v[i - 1] = j;
                    add(a0, v, &s * c);
                }
            }
            if n >= 1 {
                let s = sign_scalar(h(a0).rem_euclid(2) == 1);
                for (j, c) in alg.product(a0, w[0]).expect("in range").iter() {
                    add(j, w[1..].to_vec(), &s * c);
                }
                for i in 1..n {
                    let s = sign_scalar(e[i].rem_euclid(2) == 1);
                    for (j, c) in alg.product(w[i - 1], w[i]).expect("in range").iter() {
                        debug_assert_ne!(j, unit);
                        let mut v = w[..i - 1].to_vec();
                        v.push(j);
                        v.extend_from_slice(&w[i + 1..]);
                        add(a0, v, &s * c);
                    }
                }
                let last = w[n - 1];
                let s = sign_scalar(((h(last) + 1) * e[n - 1]).rem_euclid(2) == 0);
                for (j, c) in alg.product(last, a0).expect("in range").iter() {
                    add(j, w[..n - 1].to_vec(), &s * c);
                }
            }
            acc.finish()
        })
        .collect();

    let connes: Vec<SparseVec> = chains
        .par_iter()
        .map(|(a0, w)| {
            if *a0 == unit {
                return SparseVec::new();
            }
            let mut letters = vec![*a0];
            letters.extend_from_slice(w);
            let mut cum = Vec::with_capacity(letters.len());
            let mut t = 0i64;
            for l in &letters {
                t += h(*l) + 1;
                cum.push(t);
            }
            let mut acc = Accumulator::new();
            for i in 0..letters.len() {
                let mut rot = letters[i + 1..].to_vec();
                rot.extend_from_slice(&letters[..=i]);
                let s = sign_scalar((cum[i] * (t - cum[i])).rem_euclid(2) == 1);
                acc.add(index[&(unit, rot)], s);
            }
            acc.finish()
        })
        .collect();

    let labels = chains.iter().map(|c| chain_label(alg, c)).collect();
    let mut m = MixedComplexWindow::from_operators(
        format!("C({})", alg.name),
        labels,
        degrees,
        b,
        connes,
        range,
    )?;
    m.chains = Some((chains, index));
    Ok(m)
}

/// The mixed complex attached to a coalgebra: chains `c0 ⊗ c1 ⊗ … ⊗ cn`
/// with `c0 ∈ C` and desuspended letters from the coaugmentation coideal.
/// Its operators are the transposes of the Hochschild operators of the
/// degreewise dual algebra: the letter-merge terms become deconcatenation
/// splits and Connes' rotation becomes a rotation of a letter into slot 0.
pub fn coalgebra_mixed(c: &CoalgebraWindow, w: &Window) -> Result<MixedComplexWindow, CyclicError> {
    let dual = dual_of_coalgebra(c, &format!("{}^∨", c.name));
    let m = hochschild_mixed(&dual, w)?;
    let labels = (0..m.dim())
        .map(|i| {
            let (a0, letters) = m.chain(i).unwrap();
            let mut parts = vec![c.label(*a0)];
            parts.extend(letters.iter().map(|l| c.label(*l)));
            parts.join("⊗")
        })
        .collect();
    let (lo, hi) = m.adams_range();
    MixedComplexWindow::from_operators(
        format!("C^co({})", c.name),
        labels,
        m.degrees.iter().map(|d| -*d).collect(),
        transpose_columns(&m.b),
        transpose_columns(&m.connes),
        (-hi, -lo),
    )
}

/// A chain map between Hochschild mixed complexes.
#[derive(Clone, Debug)]
pub struct MixedMorphism {
    pub images: Vec<SparseVec>,
}

impl MixedMorphism {
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        apply(&self.images, x)
    }

    /// Matrix from the source chains at `d` to the target chains at `d`.
    pub fn matrix_at(
        &self,
        source: &MixedComplexWindow,
        target: &MixedComplexWindow,
        d: Bidegree,
    ) -> SparseMatrix {
        let tgt = target.indices_at(d);
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let cols = source
            .indices_at(d)
            .iter()
            .map(|i| self.images[*i].map_indices(|j| pos[&j]))
            .collect();
        SparseMatrix::from_columns(tgt.len(), cols)
    }
}

/// `a0[a1|…|an] ↦ f(a0)[f(a1)|…|f(an)]`, checked to commute with `b` and `B`.
pub fn induced_on_mixed(
    f: &AlgebraMorphism,
    source: &MixedComplexWindow,
    target: &MixedComplexWindow,
) -> Result<MixedMorphism, CyclicError> {
    let tunit = f.target.unit();
    let images: Vec<SparseVec> = (0..source.dim())
        .map(|i| {
            let (a0, w) = source.chain(i).expect("Hochschild complex of an algebra");
            // Expand the tensor product of images, dropping unit letters.
            let mut terms: Vec<(Vec<usize>, crate::grading::Scalar)> =
                vec![(Vec::new(), crate::grading::scalar(1))];
            for l in w {
                let img = f.images[*l].clone();
                let mut next = Vec::new();
                for (prefix, c) in &terms {
                    for (j, q) in img.iter() {
                        if j == tunit {
                            continue;
                        }
                        let mut p = prefix.clone();
                        p.push(j);
                        next.push((p, c * q));
                    }
                }
                terms = next;
            }
            let mut acc = Accumulator::new();
            for (j0, q0) in f.images[*a0].iter() {
                for (letters, c) in &terms {
                    let k = target
                        .chain_index(j0, letters)
                        .expect("image chain lies in the target window");
                    acc.add(k, q0 * c);
                }
            }
            acc.finish()
        })
        .collect();
    let m = MixedMorphism { images };
    for i in 0..source.dim() {
        let fb = m.apply(source.b_of(i));
        let bf = target.apply_b(&m.images[i]);
        let fc = m.apply(source.connes_of(i));
        let cf = target.apply_connes(&m.images[i]);
        if fb != bf || fc != cf {
            return Err(CyclicError::NotAChainMap {
                chain: source.label(i).to_string(),
                operator: if fb != bf { "b" } else { "B" }.to_string(),
            });
        }
    }
    Ok(m)
}
