use std::collections::{BTreeMap, HashMap};

use super::expand::{expand_presentation, reduce_poly};
use super::presentation::{Poly, Presentation};
use super::window::{render_element, AlgebraWindow};
use super::AlgebraError;
use crate::exactlin::{SparseMatrix, SparseVec};
use crate::grading::{Bidegree, Window};

/// A map of presentations given on generators: generator `i` of the source
/// goes to `images[i]`, a polynomial in the target's generators.
#[derive(Clone, Debug)]
pub struct PresentationMorphism {
    pub source: Presentation,
    pub target: Presentation,
    pub images: Vec<Poly>,
}

impl PresentationMorphism {
    pub fn identity(p: &Presentation) -> Self {
        PresentationMorphism {
            source: p.clone(),
            target: p.clone(),
            images: (0..p.generators.len()).map(Poly::generator).collect(),
        }
    }

    /// The augmentation onto the trivial algebra.
    pub fn augmentation(p: &Presentation) -> Self {
        PresentationMorphism {
            source: p.clone(),
            target: Presentation::new("k"),
            images: vec![Poly::zero(); p.generators.len()],
        }
    }

    fn image_of_word(&self, w: &[usize]) -> Poly {
        w.iter()
            .fold(Poly::one(), |acc, g| acc.mul(&self.images[*g]))
    }

    fn image_of(&self, x: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in x.terms() {
            out = out.add(&self.image_of_word(w).scale(c));
        }
        out
    }
}

/// The induced linear map between expanded algebras, as the image of every
/// source basis element.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub source: AlgebraWindow,
    pub target: AlgebraWindow,
    pub images: Vec<SparseVec>,
}

impl AlgebraMorphism {
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut acc = crate::exactlin::Accumulator::new();
        for (i, c) in x.iter() {
            acc.add_vec(c, &self.images[i]);
        }
        acc.finish()
    }

    /// Matrix from the source basis at `d` to the target basis at `d`.
    pub fn matrix_at(&self, d: Bidegree) -> SparseMatrix {
        let tgt = self.target.indices_at(d);
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let cols = self
            .source
            .indices_at(d)
            .iter()
            .map(|i| self.images[*i].map_indices(|j| pos[&j]))
            .collect();
        SparseMatrix::from_columns(tgt.len(), cols)
    }

    pub fn matrices(&self) -> BTreeMap<Bidegree, SparseMatrix> {
        self.source
            .degrees()
            .map(|d| (d, self.matrix_at(d)))
            .collect()
    }
}

/// Expands both sides and evaluates the morphism on normal words, checking
/// that it is a map of augmented dg algebras inside the window.
pub fn induced_on_algebra(
    f: &PresentationMorphism,
    w: &Window,
) -> Result<AlgebraMorphism, AlgebraError> {
    let src = &f.source;
    let tgt = &f.target;
    if f.images.len() != src.generators.len() {
        return Err(AlgebraError::NotAHomomorphism {
            witness: format!(
                "{} images for {} generators",
                f.images.len(),
                src.generators.len()
            ),
        });
    }
    for (g, img) in f.images.iter().enumerate() {
        let gen = &src.generators[g];
        if !num_traits::Zero::is_zero(&img.constant_term()) {
            return Err(AlgebraError::NotAHomomorphism {
                witness: format!(
                    "`{}` ↦ {}: image has a constant term",
                    gen.label,
                    tgt.render(img)
                ),
            });
        }
        if let Some(d) = img
            .degrees(&tgt.generators)
            .into_iter()
            .find(|d| *d != gen.degree)
        {
            return Err(AlgebraError::NotAHomomorphism {
                witness: format!("`{}` at {} ↦ term at {d}", gen.label, gen.degree),
            });
        }
    }
    let a = expand_presentation(src, w)?;
    let b = expand_presentation(tgt, w)?;
    let lift = |x: &Poly| -> Result<SparseVec, AlgebraError> {
        if x.is_zero() {
            return Ok(SparseVec::new());
        }
        reduce_poly(&b, x).ok_or_else(|| AlgebraError::NotAHomomorphism {
            witness: format!("image {} leaves the target window", tgt.render(x)),
        })
    };

    for r in &src.relations {
        let Some((w0, _)) = r.terms().next() else {
            continue;
        };
        if !a.in_range(src.word_degree(w0).a) {
            continue;
        }
        let img = lift(&f.image_of(r))?;
        if !img.is_zero() {
            return Err(AlgebraError::NotAHomomorphism {
                witness: format!(
                    "relation {} ↦ {} ≠ 0",
                    src.render(r),
                    render_element(&b, &img)
                ),
            });
        }
    }
    for (g, gen) in src.generators.iter().enumerate() {
        if !a.in_range(gen.degree.a) {
            continue;
        }
        let fd = lift(&f.image_of(&src.differential_of(g)))?;
        let df = b.apply_d(&lift(&f.images[g])?);
        if fd != df {
            return Err(AlgebraError::NotAHomomorphism {
                witness: format!(
                    "`{}`: f(d{}) = {} but d(f{}) = {}",
                    gen.label,
                    gen.label,
                    render_element(&b, &fd),
                    gen.label,
                    render_element(&b, &df)
                ),
            });
        }
    }

    let images = (0..a.dim())
        .map(|i| lift(&f.image_of_word(a.normal_word(i).expect("expanded algebra"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AlgebraMorphism {
        source: a,
        target: b,
        images,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::scalar;

    fn window() -> Window {
        Window::new(0, 5, -6, 6)
    }

    fn polynomial() -> Presentation {
        let mut p = Presentation::new("k[x]");
        p.add_generator("x", 0, 1);
        p
    }

    #[test]
    fn identity_gives_identity_matrices() {
        let mut p = Presentation::new("comm");
        let a = p.add_generator("a", 0, 1);
        let b = p.add_generator("b", 0, 1);
        p.relations.push(
            Poly::monomial(scalar(1), vec![a, b]).add(&Poly::monomial(scalar(-1), vec![b, a])),
        );
        let m = induced_on_algebra(&PresentationMorphism::identity(&p), &window()).unwrap();
        for (d, mat) in m.matrices() {
            assert_eq!(
                mat,
                SparseMatrix::identity(m.source.indices_at(d).len()),
                "at {d}"
            );
        }
    }

    #[test]
    fn augmentation_of_exterior_is_rank_one() {
        let mut p = Presentation::new("Λ");
        let x = p.add_generator("x", 0, 1);
        p.relations.push(Poly::monomial(scalar(1), vec![x, x]));
        let m = induced_on_algebra(&PresentationMorphism::augmentation(&p), &window()).unwrap();
        assert_eq!(m.matrix_at(Bidegree::ZERO), SparseMatrix::identity(1));
        assert!(m.matrix_at(Bidegree::new(0, 1)).is_zero());
    }

    #[test]
    fn doubling_acts_by_powers_of_two() {
        let p = polynomial();
        let f = PresentationMorphism {
            source: p.clone(),
            target: p.clone(),
            images: vec![Poly::monomial(scalar(2), vec![0])],
        };
        let m = induced_on_algebra(&f, &window()).unwrap();
        for j in 0..=5 {
            let mat = m.matrix_at(Bidegree::new(0, j));
            assert_eq!(mat, SparseMatrix::identity(1).scale(&scalar(1 << j)));
        }
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        // k[x] → Λ(y) with x ↦ y is fine; Λ(x) → k[y] with x ↦ y is not.
        let mut ext = Presentation::new("Λ");
        let x = ext.add_generator("x", 0, 1);
        ext.relations.push(Poly::monomial(scalar(1), vec![x, x]));
        let f = PresentationMorphism {
            source: ext,
            target: polynomial(),
            images: vec![Poly::generator(0)],
        };
        match induced_on_algebra(&f, &window()) {
            Err(AlgebraError::NotAHomomorphism { witness }) => assert!(witness.contains("x^2")),
            other => panic!("{other:?}"),
        }
    }
}
