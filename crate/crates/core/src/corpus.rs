//! The shipped example presentations, built in code. The files under
//! `corpus/` parse to exactly these.

use crate::algebra::{Poly, Presentation};
use crate::grading::scalar;

fn word(p: &Presentation, labels: &[&str]) -> Vec<usize> {
    labels
        .iter()
        .map(|l| p.generator_index(l).unwrap())
        .collect()
}

fn commutator(p: &Presentation, a: &str, b: &str, sign: i64) -> Poly {
    Poly::monomial(scalar(1), word(p, &[a, b])).add(&Poly::monomial(scalar(sign), word(p, &[b, a])))
}

/// The ground field.
pub fn trivial() -> Presentation {
    Presentation::new("k")
}

/// Exterior algebra on one generator at (0, 1).
pub fn exterior() -> Presentation {
    let mut p = Presentation::new("exterior1");
    p.add_generator("x", 0, 1);
    p.relations.push(Poly::monomial(scalar(1), vec![0, 0]));
    p
}

/// Polynomial algebra on one generator at (0, 1).
pub fn polynomial() -> Presentation {
    let mut p = Presentation::new("poly1");
    p.add_generator("x", 0, 1);
    p
}

/// Commutative polynomials in two generators at (0, 1).
pub fn polynomial2() -> Presentation {
    let mut p = Presentation::new("poly2");
    p.add_generator("x", 0, 1);
    p.add_generator("y", 0, 1);
    let r = commutator(&p, "x", "y", -1);
    p.relations.push(r);
    p
}

/// Exterior algebra on two generators at (0, 1).
pub fn exterior2() -> Presentation {
    let mut p = Presentation::new("exterior2");
    p.add_generator("a", 0, 1);
    p.add_generator("b", 0, 1);
    let aa = Poly::monomial(scalar(1), word(&p, &["a", "a"]));
    let bb = Poly::monomial(scalar(1), word(&p, &["b", "b"]));
    let ab = commutator(&p, "a", "b", 1);
    p.relations.extend([aa, bb, ab]);
    p
}

/// `k⟨a, b⟩/(ab - ba)`, presented on letters other than [`polynomial2`].
pub fn commuting_ab() -> Presentation {
    let mut p = Presentation::new("comm_ab");
    p.add_generator("a", 0, 1);
    p.add_generator("b", 0, 1);
    let r = commutator(&p, "a", "b", -1);
    p.relations.push(r);
    p
}

/// Free algebra on two generators at (0, 1).
pub fn free2() -> Presentation {
    let mut p = Presentation::new("free2");
    p.add_generator("a", 0, 1);
    p.add_generator("b", 0, 1);
    p
}

/// Free on x at (0, 1) and y at (1, 2) with d(y) = x².
pub fn dg_example() -> Presentation {
    let mut p = Presentation::new("dg_xy");
    let x = p.add_generator("x", 0, 1);
    let y = p.add_generator("y", 1, 2);
    p.differential
        .insert(y, Poly::monomial(scalar(1), vec![x, x]));
    p
}

/// Polynomial algebra with its generator in Adams degree 0; not Adams connected.
pub fn polynomial_adams0() -> Presentation {
    let mut p = Presentation::new("poly1_adams0");
    p.add_generator("x", 0, 0);
    p
}

/// Every corpus presentation that expands to a finite window.
pub fn expandable() -> Vec<Presentation> {
    vec![
        trivial(),
        exterior(),
        polynomial(),
        polynomial2(),
        exterior2(),
        commuting_ab(),
        free2(),
        dg_example(),
    ]
}

/// Every corpus presentation, including the non-expandable one.
pub fn all() -> Vec<Presentation> {
    let mut v = expandable();
    v.push(polynomial_adams0());
    v
}
