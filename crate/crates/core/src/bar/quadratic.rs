use super::dual::koszul_dual;
use super::BarError;
use crate::algebra::{algebra_homology, expand_presentation, Poly, Presentation};
use crate::exactlin::{kernel_basis, ComparisonTable, SparseMatrix, SparseVec};
use crate::grading::{Bidegree, Window};

fn check_quadratic(p: &Presentation) -> Result<(), BarError> {
    if let Some(g) = p
        .generators
        .iter()
        .find(|g| g.degree != Bidegree::new(0, 1))
    {
        return Err(BarError::NotQuadratic(format!(
            "generator `{}` sits at {}, expected (0, 1)",
            g.label, g.degree
        )));
    }
    if p.differential.values().any(|d| !d.is_zero()) {
        return Err(BarError::NotQuadratic("nonzero differential".into()));
    }
    if let Some(r) = p
        .relations
        .iter()
        .find(|r| r.terms().any(|(w, _)| w.len() != 2))
    {
        return Err(BarError::NotQuadratic(format!(
            "relation `{}` is not quadratic",
            p.render(r)
        )));
    }
    Ok(())
}

/// `T(V*)/(R^⊥)` for a quadratic presentation, where `R^⊥ ⊂ V*⊗V*` is the
/// annihilator of `R` under `⟨α_i ⊗ α_j, x_k ⊗ x_l⟩ = δ_ik δ_jl`.
pub fn quadratic_dual(p: &Presentation) -> Result<Presentation, BarError> {
    check_quadratic(p)?;
    let n = p.generators.len();
    let pair_index = |w: &[usize]| w[0] * n + w[1];
    let rows: Vec<SparseVec> = p
        .relations
        .iter()
        .map(|r| SparseVec::from_pairs(r.terms().map(|(w, c)| (pair_index(w), c.clone()))))
        .collect();
    // Relations as rows: the annihilator is the kernel of that matrix.
    let m = SparseMatrix::from_columns(n * n, rows).transpose();
    let mut q = Presentation::new(format!("{}^!q", p.name));
    for g in &p.generators {
        q.add_generator(format!("{}'", g.label), 0, 1);
    }
    for v in kernel_basis(&m) {
        let mut r = Poly::zero();
        for (k, c) in v.iter() {
            r.add_term(c.clone(), vec![k / n, k % n]);
        }
        q.relations.push(r);
    }
    Ok(q)
}

/// Per Adams degree `j`: total dimension of `H(A^!)` at Adams `-j` (which
/// sits on the diagonal `(-j, -j)` for Koszul algebras) against the expanded
/// quadratic dual at `(0, j)`.
pub fn compare_quadratic_vs_bar(p: &Presentation, w: &Window) -> Result<ComparisonTable, BarError> {
    let q = quadratic_dual(p)?;
    let a = expand_presentation(p, w)?;
    let dual = koszul_dual(&a, w)?;
    let h = algebra_homology(&dual.algebra);
    let qa = expand_presentation(&q, w)?;
    let mut table = ComparisonTable::new("H(A^!) vs quadratic dual");
    for j in 0..=w.adams_reach() {
        let right = qa.indices_at(Bidegree::new(0, j)).len();
        table.push(
            Bidegree::new(-j, -j),
            Bidegree::new(0, j),
            h.adams_total(-j),
            right,
            false,
        );
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Rref;
    use crate::grading::scalar;

    fn poly2() -> Presentation {
        let mut p = Presentation::new("k[x,y]");
        let x = p.add_generator("x", 0, 1);
        let y = p.add_generator("y", 0, 1);
        p.relations.push(
            Poly::monomial(scalar(1), vec![x, y]).add(&Poly::monomial(scalar(-1), vec![y, x])),
        );
        p
    }

    fn as_vectors(p: &Presentation) -> Vec<SparseVec> {
        let n = p.generators.len();
        p.relations
            .iter()
            .map(|r| SparseVec::from_pairs(r.terms().map(|(w, c)| (w[0] * n + w[1], c.clone()))))
            .collect()
    }

    #[test]
    fn commutative_plane_dualizes_to_exterior_relations() {
        let q = quadratic_dual(&poly2()).unwrap();
        assert_eq!(q.relations.len(), 3);
        // span{α², β², αβ + βα} over pair indices αα=0, αβ=1, βα=2, ββ=3
        let expected = [
            SparseVec::unit(0),
            SparseVec::unit(3),
            SparseVec::from_pairs([(1, scalar(1)), (2, scalar(1))]),
        ];
        let got = Rref::from_rows(&as_vectors(&q));
        assert_eq!(got.rank(), 3);
        assert!(expected.iter().all(|v| got.contains(v)));
    }

    #[test]
    fn free_algebra_dual_kills_all_quadratics() {
        let mut p = Presentation::new("free2");
        p.add_generator("a", 0, 1);
        p.add_generator("b", 0, 1);
        let q = quadratic_dual(&p).unwrap();
        assert_eq!(q.relations.len(), 4);
        let alg = expand_presentation(&q, &Window::new(0, 4, -4, 4)).unwrap();
        let dims: Vec<usize> = (0..=4)
            .map(|j| alg.indices_at(Bidegree::new(0, j)).len())
            .collect();
        assert_eq!(dims, vec![1, 2, 0, 0, 0]);
    }

    #[test]
    fn exterior_dualizes_to_polynomial() {
        let mut p = Presentation::new("Λ");
        let x = p.add_generator("x", 0, 1);
        p.relations.push(Poly::monomial(scalar(1), vec![x, x]));
        let q = quadratic_dual(&p).unwrap();
        assert!(q.relations.is_empty());
        assert_eq!(q.generators[0].label, "x'");
    }

    #[test]
    fn non_quadratic_is_rejected() {
        let mut p = Presentation::new("cubic");
        let x = p.add_generator("x", 0, 1);
        p.relations.push(Poly::monomial(scalar(1), vec![x, x, x]));
        assert!(matches!(quadratic_dual(&p), Err(BarError::NotQuadratic(_))));
    }

    #[test]
    fn bar_side_matches_quadratic_side() {
        let w = Window::new(-4, 4, -8, 8);
        let t = compare_quadratic_vs_bar(&poly2(), &w).unwrap();
        assert!(t.passes(), "{:?}", t.failures().collect::<Vec<_>>());
        let right: Vec<usize> = t.rows.iter().map(|r| r.right).collect();
        assert_eq!(right, vec![1, 2, 1, 0, 0]);
    }
}
