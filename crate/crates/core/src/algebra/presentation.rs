use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use super::AlgebraError;
use crate::grading::{format_scalar, Bidegree, Scalar};

/// A word in the generators, as generator indices.
pub type Word = Vec<usize>;

/// Noncommutative polynomial: word -> coefficient, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Word, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Poly::monomial(Scalar::one(), Vec::new())
    }

    pub fn monomial(c: Scalar, w: Word) -> Self {
        let mut p = Poly::zero();
        p.add_term(c, w);
        p
    }

    pub fn generator(i: usize) -> Self {
        Poly::monomial(Scalar::one(), vec![i])
    }

    pub fn add_term(&mut self, c: Scalar, w: Word) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Vec::new())
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        for (w, c) in other.terms() {
            p.add_term(c.clone(), w.clone());
        }
        p
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(w, q)| (w.clone(), q * c)).collect(),
        }
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                let mut w = u.clone();
                w.extend_from_slice(v);
                p.add_term(a * b, w);
            }
        }
        p
    }

    /// Renames generator indices.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Poly {
        let mut p = Poly::zero();
        for (w, c) in self.terms() {
            p.add_term(c.clone(), w.iter().map(|i| f(*i)).collect());
        }
        p
    }

    /// The set of bidegrees of its monomials.
    pub fn degrees(&self, gens: &[Generator]) -> Vec<Bidegree> {
        let mut ds: Vec<Bidegree> = self.terms.keys().map(|w| word_degree(gens, w)).collect();
        ds.sort();
        ds.dedup();
        ds
    }

    /// Renders with generator labels, e.g. `x*y - y*x` or `2*x^2`.
    pub fn render(&self, gens: &[Generator]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &Scalar::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let word = render_word(gens, w);
            let coeff = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format_scalar(&mag)
            };
            match (mag.is_one(), w.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&word),
                (false, true) => out.push_str(&coeff),
                (false, false) => {
                    let _ = write!(out, "{coeff}*{word}");
                }
            }
        }
        out
    }
}

/// Renders a word, compressing runs into powers: `x^2*y`.
pub fn render_word(gens: &[Generator], w: &[usize]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let label = &gens[w[i]].label;
        if j - i == 1 {
            parts.push(label.clone());
        } else {
            parts.push(format!("{label}^{}", j - i));
        }
        i = j;
    }
    parts.join("*")
}

pub fn word_degree(gens: &[Generator], w: &[usize]) -> Bidegree {
    w.iter().fold(Bidegree::ZERO, |d, g| d + gens[*g].degree)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub degree: Bidegree,
}

/// A presentation `T(V)/(R)` with a differential given on generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<Generator>,
    pub relations: Vec<Poly>,
    /// generator index -> d(generator); absent means zero
    pub differential: BTreeMap<usize, Poly>,
}

impl Presentation {
    pub fn new(name: impl Into<String>) -> Self {
        Presentation {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn add_generator(&mut self, label: impl Into<String>, h: i64, a: i64) -> usize {
        self.generators.push(Generator {
            label: label.into(),
            degree: Bidegree::new(h, a),
        });
        self.generators.len() - 1
    }

    pub fn generator_index(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn differential_of(&self, g: usize) -> Poly {
        self.differential.get(&g).cloned().unwrap_or_default()
    }

    pub fn word_degree(&self, w: &[usize]) -> Bidegree {
        word_degree(&self.generators, w)
    }

    pub fn render(&self, p: &Poly) -> String {
        p.render(&self.generators)
    }

    /// Structural checks independent of any window.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        let mut seen = HashSet::new();
        for g in &self.generators {
            if !seen.insert(g.label.as_str()) {
                return Err(AlgebraError::DuplicateGenerator(g.label.clone()));
            }
        }
        for r in &self.relations {
            let text = self.render(r);
            let degs = r.degrees(&self.generators);
            let adams: HashSet<i64> = degs.iter().map(|d| d.a).collect();
            if adams.len() > 1 {
                return Err(AlgebraError::InhomogeneousRelation {
                    relation: text,
                    detail: "Adams degrees differ between terms".into(),
                });
            }
            if degs.len() > 1 {
                return Err(AlgebraError::InhomogeneousRelation {
                    relation: text,
                    detail: "homological degrees differ between terms".into(),
                });
            }
            if !r.constant_term().is_zero() {
                return Err(AlgebraError::InhomogeneousRelation {
                    relation: text,
                    detail: "nonzero constant term is not killed by the augmentation".into(),
                });
            }
        }
        for (g, v) in &self.differential {
            let Some(gen) = self.generators.get(*g) else {
                return Err(AlgebraError::BadDifferential {
                    generator: format!("#{g}"),
                    detail: "unknown generator".into(),
                });
            };
            let want = gen.degree + Bidegree::DIFFERENTIAL;
            for d in v.degrees(&self.generators) {
                if d != want {
                    return Err(AlgebraError::BadDifferential {
                        generator: gen.label.clone(),
                        detail: format!("term of bidegree {d}, expected {want}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Same algebra with generators listed in a different order:
    /// new generator `k` is old generator `perm[k]`.
    pub fn permute_generators(&self, perm: &[usize]) -> Presentation {
        let mut inv = vec![0; perm.len()];
        for (new, old) in perm.iter().enumerate() {
            inv[*old] = new;
        }
        Presentation {
            name: self.name.clone(),
            generators: perm.iter().map(|o| self.generators[*o].clone()).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| r.relabel(|i| inv[i]))
                .collect(),
            differential: self
                .differential
                .iter()
                .map(|(g, v)| (inv[*g], v.relabel(|i| inv[i])))
                .collect(),
        }
    }

    /// Whether every generator sits in homological degree 0 and every
    /// relation is quadratic.
    pub fn is_quadratic(&self) -> bool {
        self.generators.iter().all(|g| g.degree.h == 0)
            && self.differential.values().all(Poly::is_zero)
            && self
                .relations
                .iter()
                .all(|r| r.terms().all(|(w, _)| w.len() == 2))
    }
}
