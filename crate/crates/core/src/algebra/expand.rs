use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use super::presentation::{render_word, Poly, Presentation, Word};
use super::window::{check_axioms, AlgebraWindow, BasisElement};
use super::AlgebraError;
use crate::exactlin::{Accumulator, Rref, SparseVec};
use crate::grading::{sign_scalar, Bidegree, Scalar, Window};

/// Words of one bidegree, listed descending in (length, lex) so that RREF
/// pivots land on the largest words.
struct Slice {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    ideal: Rref,
}

impl Slice {
    fn vector(&self, p: &Poly) -> SparseVec {
        SparseVec::from_pairs(p.terms().map(|(w, c)| (self.index[w], c.clone())))
    }
}

fn canonical_cmp(u: &Word, v: &Word) -> std::cmp::Ordering {
    (u.len(), u).cmp(&(v.len(), v))
}

/// Adams range reachable by words in the generators, clipped to the window.
fn adams_range(p: &Presentation, w: &Window) -> Result<(i64, i64), AlgebraError> {
    let mut pos: Option<&str> = None;
    let mut neg: Option<&str> = None;
    for g in &p.generators {
        match g.degree.a.signum() {
            0 => return Err(AlgebraError::AdamsZeroGenerator(g.label.clone())),
            1 => pos = pos.or(Some(&g.label)),
            _ => neg = neg.or(Some(&g.label)),
        }
    }
    let reach = w.adams_reach();
    match (pos, neg) {
        (Some(p), Some(n)) => Err(AlgebraError::MixedAdamsSigns {
            positive: p.to_string(),
            negative: n.to_string(),
        }),
        (Some(_), None) => Ok((0, reach)),
        (None, Some(_)) => Ok((-reach, 0)),
        (None, None) => Ok((0, 0)),
    }
}

/// All words with Adams degree in range, grouped by bidegree.
fn enumerate_words(p: &Presentation, range: (i64, i64)) -> BTreeMap<Bidegree, Vec<Word>> {
    let mut by_adams: BTreeMap<i64, Vec<Word>> = BTreeMap::new();
    by_adams.insert(0, vec![Vec::new()]);
    let mags: Vec<i64> = (0..=range.1.max(-range.0)).collect();
    let sign = if range.0 < 0 { -1 } else { 1 };
    for &m in &mags[1..] {
        let mut here = Vec::new();
        for (g, gen) in p.generators.iter().enumerate() {
            let prev = m * sign - gen.degree.a;
            if let Some(ws) = by_adams.get(&prev) {
                for w in ws {
                    let mut w = w.clone();
                    w.push(g);
                    here.push(w);
                }
            }
        }
        by_adams.insert(m * sign, here);
    }
    let mut out: BTreeMap<Bidegree, Vec<Word>> = BTreeMap::new();
    for ws in by_adams.into_values() {
        for w in ws {
            out.entry(p.word_degree(&w)).or_default().push(w);
        }
    }
    for ws in out.values_mut() {
        ws.sort_by(|u, v| canonical_cmp(v, u));
    }
    out
}

/// Leibniz extension of the generator differential to a word.
fn d_word(p: &Presentation, w: &[usize]) -> Poly {
    let mut out = Poly::zero();
    let mut h = 0;
    for (i, g) in w.iter().enumerate() {
        let dg = p.differential_of(*g);
        if !dg.is_zero() {
            let left = Poly::monomial(sign_scalar(h % 2 != 0), w[..i].to_vec());
            let right = Poly::monomial(Scalar::one(), w[i + 1..].to_vec());
            out = out.add(&left.mul(&dg).mul(&right));
        }
        h += p.generators[*g].degree.h;
    }
    out
}

fn d_poly(p: &Presentation, x: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (w, c) in x.terms() {
        out = out.add(&d_word(p, w).scale(c));
    }
    out
}

/// Expands `T(V)/(R)` with its differential on every Adams slice of the
/// window's reach and verifies all algebra axioms.
pub fn expand_presentation(p: &Presentation, w: &Window) -> Result<AlgebraWindow, AlgebraError> {
    p.validate()?;
    let range = adams_range(p, w)?;
    let words = enumerate_words(p, range);

    // Ideal slices, built in increasing Adams magnitude:
    // I_D = R_D + Σ_g (g·I_{D-g} + I_{D-g}·g).
    let mut slices: BTreeMap<Bidegree, Slice> = BTreeMap::new();
    let mut order: Vec<Bidegree> = words.keys().copied().collect();
    order.sort_by_key(|d| (d.a.abs(), d.h));
    for d in order {
        let ws = words[&d].clone();
        let index = ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut slice = Slice {
            words: ws,
            index,
            ideal: Rref::new(),
        };
        let mut gens: Vec<Poly> = p
            .relations
            .iter()
            .filter(|r| !r.is_zero() && p.word_degree(r.terms().next().unwrap().0) == d)
            .cloned()
            .collect();
        for (g, gen) in p.generators.iter().enumerate() {
            let Some(prev) = slices.get(&(d - gen.degree)) else {
                continue;
            };
            for piv in prev.ideal.pivots() {
                let row = prev.ideal.row(piv).unwrap();
                let as_poly = |left: bool| {
                    let mut q = Poly::zero();
                    for (i, c) in row.iter() {
                        let mut word = prev.words[i].clone();
                        if left {
                            word.insert(0, g);
                        } else {
                            word.push(g);
                        }
                        q.add_term(c.clone(), word);
                    }
                    q
                };
                gens.push(as_poly(true));
                gens.push(as_poly(false));
            }
        }
        for r in &gens {
            let v = slice.vector(r);
            slice.ideal.insert(&v);
        }
        slices.insert(d, slice);
    }

    // Basis: the unit, then the normal (non-pivot) words of each bidegree.
    let mut elements = Vec::new();
    let mut basis_of_word: HashMap<Word, usize> = HashMap::new();
    for (d, s) in &slices {
        let mut normal: Vec<&Word> = s
            .words
            .iter()
            .enumerate()
            .filter(|(i, _)| !s.ideal.is_pivot(*i))
            .map(|(_, w)| w)
            .collect();
        normal.sort_by(|u, v| canonical_cmp(u, v));
        for w in normal {
            basis_of_word.insert(w.clone(), elements.len());
            elements.push(BasisElement {
                label: render_word(&p.generators, w),
                degree: *d,
            });
        }
    }
    let unit = basis_of_word[&Vec::new()];

    let mut forms: HashMap<Word, SparseVec> = HashMap::new();
    for s in slices.values() {
        for (i, w) in s.words.iter().enumerate() {
            let v = match s.ideal.row(i) {
                None => SparseVec::unit(basis_of_word[w]),
                Some(row) => SparseVec::from_pairs(
                    row.iter()
                        .filter(|(j, _)| *j != i)
                        .map(|(j, c)| (basis_of_word[&s.words[j]], -c.clone())),
                ),
            };
            forms.insert(w.clone(), v);
        }
    }
    let reduce = |x: &Poly| -> SparseVec {
        let mut acc = Accumulator::new();
        for (w, c) in x.terms() {
            acc.add_vec(c, &forms[w]);
        }
        acc.finish()
    };

    let in_range = |a: i64| range.0 <= a && a <= range.1;
    for r in &p.relations {
        let Some((w0, _)) = r.terms().next() else {
            continue;
        };
        let deg = p.word_degree(w0);
        if in_range(deg.a) && !reduce(&d_poly(p, r)).is_zero() {
            return Err(AlgebraError::DifferentialNotIdealPreserving {
                relation: p.render(r),
                degree: deg + Bidegree::DIFFERENTIAL,
            });
        }
    }
    for (g, gen) in p.generators.iter().enumerate() {
        if in_range(gen.degree.a) && !reduce(&d_poly(p, &d_word(p, &[g]))).is_zero() {
            return Err(AlgebraError::SquareNonzero {
                generator: gen.label.clone(),
                degree: gen.degree + Bidegree::DIFFERENTIAL + Bidegree::DIFFERENTIAL,
            });
        }
    }

    let mut normal_word: Vec<Word> = vec![Vec::new(); elements.len()];
    for (w, i) in &basis_of_word {
        normal_word[*i] = w.clone();
    }
    let differential: Vec<SparseVec> = normal_word.iter().map(|w| reduce(&d_word(p, w))).collect();
    let mut products = HashMap::new();
    for (i, u) in normal_word.iter().enumerate() {
        for (j, v) in normal_word.iter().enumerate() {
            if !in_range(elements[i].degree.a + elements[j].degree.a) {
                continue;
            }
            let mut uv = u.clone();
            uv.extend_from_slice(v);
            let prod = forms[&uv].clone();
            if !prod.is_zero() {
                products.insert((i, j), prod);
            }
        }
    }

    let alg = AlgebraWindow::from_tables(
        p.name.clone(),
        elements,
        unit,
        range,
        products,
        differential,
        SparseVec::unit(unit),
    )
    .with_word_forms(forms, normal_word);
    let report = check_axioms(&alg);
    if let Some(first) = report.violations.first() {
        return Err(AlgebraError::AxiomViolation {
            count: report.violations.len(),
            first: format!("{first:?}"),
        });
    }
    Ok(alg)
}

/// Normal form of a polynomial in the generators of an expanded algebra;
/// `None` when a term leaves the window.
pub fn reduce_poly(alg: &AlgebraWindow, x: &Poly) -> Option<SparseVec> {
    let mut acc = Accumulator::new();
    for (w, c) in x.terms() {
        acc.add_vec(c, alg.word_form(w)?);
    }
    Some(acc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::scalar;

    pub(crate) fn exterior() -> Presentation {
        let mut p = Presentation::new("exterior");
        let x = p.add_generator("x", 0, 1);
        p.relations.push(Poly::monomial(scalar(1), vec![x, x]));
        p
    }

    fn polynomial() -> Presentation {
        let mut p = Presentation::new("poly");
        p.add_generator("x", 0, 1);
        p
    }

    fn commutative_ab() -> Presentation {
        let mut p = Presentation::new("comm");
        let a = p.add_generator("a", 0, 1);
        let b = p.add_generator("b", 0, 1);
        p.relations.push(
            Poly::monomial(scalar(1), vec![a, b]).add(&Poly::monomial(scalar(-1), vec![b, a])),
        );
        p
    }

    fn dims_at(alg: &AlgebraWindow, h: i64, a: i64) -> usize {
        alg.indices_at(Bidegree::new(h, a)).len()
    }

    #[test]
    fn exterior_has_two_basis_elements() {
        let alg = expand_presentation(&exterior(), &Window::new(0, 6, -8, 8)).unwrap();
        assert_eq!(alg.dim(), 2);
        assert_eq!(dims_at(&alg, 0, 0), 1);
        assert_eq!(dims_at(&alg, 0, 1), 1);
        assert_eq!(dims_at(&alg, 0, 2), 0);
    }

    #[test]
    fn polynomial_line_has_one_per_adams_degree() {
        let alg = expand_presentation(&polynomial(), &Window::new(0, 7, -8, 8)).unwrap();
        for j in 0..=7 {
            assert_eq!(dims_at(&alg, 0, j), 1);
        }
        assert_eq!(alg.dim(), 8);
    }

    #[test]
    fn commutative_plane_counts_monomials() {
        let alg = expand_presentation(&commutative_ab(), &Window::new(0, 6, -8, 8)).unwrap();
        for j in 0..=6 {
            assert_eq!(dims_at(&alg, 0, j), j as usize + 1);
        }
    }

    #[test]
    fn adams_zero_generator_is_rejected() {
        let mut p = Presentation::new("bad");
        p.add_generator("x", 0, 0);
        assert!(matches!(
            expand_presentation(&p, &Window::new(0, 3, -3, 3)),
            Err(AlgebraError::AdamsZeroGenerator(_))
        ));
    }

    #[test]
    fn square_nonzero_is_reported() {
        // dz = y, dy = x with x, y, z free: d²z = x ≠ 0.
        let mut p = Presentation::new("bad-d");
        let x = p.add_generator("x", 0, 1);
        let y = p.add_generator("y", 1, 1);
        let z = p.add_generator("z", 2, 1);
        p.differential.insert(y, Poly::generator(x));
        p.differential.insert(z, Poly::generator(y));
        match expand_presentation(&p, &Window::new(0, 2, -4, 4)) {
            Err(AlgebraError::SquareNonzero { generator, degree }) => {
                assert_eq!(generator, "z");
                assert_eq!(degree, Bidegree::new(0, 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dg_example_satisfies_axioms() {
        let mut p = Presentation::new("dg");
        let x = p.add_generator("x", 0, 1);
        let y = p.add_generator("y", 1, 2);
        p.differential
            .insert(y, Poly::monomial(scalar(1), vec![x, x]));
        let alg = expand_presentation(&p, &Window::new(0, 6, -8, 8)).unwrap();
        // x·y and y·x are independent words, d(xy) = x³ = d(yx).
        let xy = alg.word_form(&[x, y]).unwrap().clone();
        assert_eq!(alg.apply_d(&xy), alg.word_form(&[x, x, x]).unwrap().clone());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn three_generator(rel_coeffs: [i64; 4]) -> Presentation {
            // generators a, b at (0,1), c at (0,2); relations mix quadratic
            // words with c so that the ideal is nontrivial.
            let mut p = Presentation::new("mix");
            let a = p.add_generator("a", 0, 1);
            let b = p.add_generator("b", 0, 1);
            let c = p.add_generator("c", 0, 2);
            let mut r1 = Poly::monomial(scalar(rel_coeffs[0]), vec![a, b]);
            r1.add_term(scalar(rel_coeffs[1]), vec![b, a]);
            r1.add_term(scalar(1), vec![c]);
            let mut r2 = Poly::monomial(scalar(rel_coeffs[2]), vec![a, a]);
            r2.add_term(scalar(rel_coeffs[3]), vec![b, b]);
            p.relations.push(r1);
            p.relations.push(r2);
            p
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn dims_ignore_relation_and_generator_order(
                coeffs in proptest::array::uniform4(-2i64..3),
                perm_idx in 0usize..6,
            ) {
                let p = three_generator(coeffs);
                let w = Window::new(0, 5, -4, 4);
                let base = expand_presentation(&p, &w).unwrap().dims();

                let mut rev = p.clone();
                rev.relations.reverse();
                prop_assert_eq!(&expand_presentation(&rev, &w).unwrap().dims(), &base);

                let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
                let q = p.permute_generators(&perms[perm_idx]);
                prop_assert_eq!(&expand_presentation(&q, &w).unwrap().dims(), &base);
            }
        }
    }
}
