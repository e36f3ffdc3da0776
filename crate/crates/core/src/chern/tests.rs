use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::{expand_presentation, AlgebraWindow, Presentation, Verdict};
use crate::bar::koszul_dual;
use crate::corpus;
use crate::cyclic::{
    cyclic_complex, hochschild_mixed, total_differential, CyclicClass, CyclicVariant,
};
use crate::exactlin::SparseVec;
use crate::grading::{scalar, Bidegree, Window};

fn win(a: i64) -> Window {
    Window::new(-a, a, -8, 8)
}

fn expand(p: &Presentation, a: i64) -> AlgebraWindow {
    expand_presentation(p, &win(a)).unwrap()
}

fn holds() -> Verdict {
    Verdict::Holds {
        reason: "test".into(),
    }
}

fn gen_of(alg: &AlgebraWindow, d: Bidegree) -> usize {
    alg.indices_at(d)[0]
}

#[test]
fn euler_class_examples() {
    let a = PerfObject::free(Bidegree::ZERO);
    assert_eq!(euler_class(&a), K0Class::perf(1));
    assert_eq!(euler_class(&a.direct_sum(&a.shift(1))), K0Class::perf(0));
    let alg = expand(&corpus::exterior(), 4);
    let cone = a.cone_of_scalar(&alg, &scalar(1));
    cone.validate(&alg).unwrap();
    assert_eq!(euler_class(&cone), K0Class::perf(0));
}

#[test]
fn koszul_resolution_of_the_ground_field() {
    // e0 at (0,0), e1 at (1,1) with d(e1) = e0·x resolves k over k[x].
    let alg = expand(&corpus::polynomial(), 4);
    let x = gen_of(&alg, Bidegree::new(0, 1));
    let mut p = PerfObject::free(Bidegree::ZERO).direct_sum(&PerfObject::free(Bidegree::new(1, 1)));
    p.entries.insert((0, 1), SparseVec::unit(x));
    p.validate(&alg).unwrap();
    assert_eq!(euler_class(&p), K0Class::perf(0));

    // Extending by d(e2) = e1·x squares to e0·x² ≠ 0 over k[x] but to zero over Λ(x).
    p.generators.push(Bidegree::new(2, 2));
    p.entries.insert((1, 2), SparseVec::unit(x));
    assert!(matches!(
        p.validate(&alg),
        Err(ChernError::InvalidPerfObject { .. })
    ));
    let ext = expand(&corpus::exterior(), 4);
    let y = gen_of(&ext, Bidegree::new(0, 1));
    let mut q = p.clone();
    q.entries.insert((0, 1), SparseVec::unit(y));
    q.entries.insert((1, 2), SparseVec::unit(y));
    q.validate(&ext).unwrap();
    assert_eq!(euler_class(&q), K0Class::perf(1));
}

#[test]
fn entry_of_wrong_degree_is_rejected() {
    let alg = expand(&corpus::polynomial(), 3);
    let x = gen_of(&alg, Bidegree::new(0, 1));
    let mut p = PerfObject::free(Bidegree::ZERO).direct_sum(&PerfObject::free(Bidegree::new(1, 2)));
    p.entries.insert((0, 1), SparseVec::unit(x));
    assert!(matches!(
        p.validate(&alg),
        Err(ChernError::InvalidPerfObject { .. })
    ));
}

#[test]
fn transport_examples() {
    for m in [1, 0, -3] {
        assert_eq!(
            k0_transport(&K0Class::ground(m), &holds()).unwrap(),
            K0Class::perf(m)
        );
    }
    let unknown = Verdict::Unknown { reason: "r".into() };
    assert!(k0_transport(&K0Class::ground(1), &unknown).is_ok());
    let fails = Verdict::Fails {
        witness: Bidegree::ZERO,
        reason: "r".into(),
    };
    assert_eq!(
        k0_transport(&K0Class::ground(1), &fails),
        Err(ChernError::NotWeaklyAdamsConnected)
    );
    assert!(matches!(
        k0_transport(&K0Class::perf(1), &holds()),
        Err(ChernError::WrongSide { .. })
    ));
}

#[test]
fn transform_examples() {
    use GeneratorExpr::*;
    assert_eq!(koszul_transform_generator(&Ground).unwrap().image, Free);
    assert_eq!(koszul_transform_generator(&Free).unwrap().image, Ground);
    let t = koszul_transform_generator(&Ground.shift(1)).unwrap();
    assert_eq!(t.image, Free.shift(-1));
    assert_eq!(t.class, K0Class::perf(-1));
    let cone = GeneratorExpr::cone(Ground, Ground.shift(2), ConeMap::Zero);
    let t = koszul_transform_generator(&cone).unwrap();
    assert_eq!(
        t.image,
        GeneratorExpr::cone(Free.shift(-2), Free, ConeMap::Zero).shift(-1)
    );
    assert_eq!(
        t.class,
        k0_transport(&cone.class().unwrap(), &holds()).unwrap()
    );
    let bad = GeneratorExpr::cone(Ground, Ground.shift(1), ConeMap::Scalar(scalar(1)));
    assert!(matches!(
        koszul_transform_generator(&bad),
        Err(ChernError::Grammar(_))
    ));
    let mixed = GeneratorExpr::cone(Ground, Free, ConeMap::Zero);
    assert!(matches!(mixed.class(), Err(ChernError::Grammar(_))));
}

fn ground_expr() -> impl Strategy<Value = GeneratorExpr> {
    let leaf = Just(GeneratorExpr::Ground);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), -3i64..=3).prop_map(|(x, n)| x.shift(n)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| GeneratorExpr::cone(
                x,
                y,
                ConeMap::Zero
            )),
            (inner, -2i64..=2).prop_map(|(x, c)| GeneratorExpr::cone(
                x.clone(),
                x,
                ConeMap::Scalar(scalar(c))
            )),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn transport_square_commutes(x in ground_expr()) {
        let dual = koszul_dual(&expand(&corpus::exterior(), 3), &win(3)).unwrap();
        let sq = transport_square(&x, &dual.algebra, &holds()).unwrap();
        prop_assert!(sq.commutes(), "{}: {} vs {}", sq.object, sq.transported, sq.transformed);
    }

    #[test]
    fn euler_class_is_additive_and_alternating(
        gens in proptest::collection::vec((-4i64..=4, 0i64..=3), 0..6),
        more in proptest::collection::vec((-4i64..=4, 0i64..=3), 0..6),
        n in -3i64..=3,
    ) {
        let build = |g: &[(i64, i64)]| g.iter().fold(PerfObject::zero(), |p, (h, a)| p.direct_sum(&PerfObject::free(Bidegree::new(*h, *a))));
        let (p, q) = (build(&gens), build(&more));
        let sum = euler_class(&p).add(euler_class(&q)).unwrap();
        prop_assert_eq!(euler_class(&p.direct_sum(&q)), sum);
        prop_assert_eq!(euler_class(&p.shift(n)), euler_class(&p).shift(n));
    }
}

#[test]
fn chern_character_of_generators() {
    let w = win(4);
    for p in corpus::expandable() {
        let alg = expand(&p, 4);
        let m = hochschild_mixed(&alg, &w).unwrap();
        let one = chern0(&alg, &m, &K0Class::perf(1), None).unwrap();
        let unit = m.chain_index(alg.unit(), &[]).unwrap();
        assert_eq!(one.components, vec![(0, SparseVec::unit(unit))]);
        assert!(chern0(&alg, &m, &K0Class::perf(0), None).unwrap().is_zero());
        let eps = unit_cocycle(&alg, &m).unwrap();
        assert_eq!(pairing(&m, &eps, &one).unwrap(), scalar(1), "{}", p.name);
    }
}

#[test]
fn chern_character_of_diagonal_idempotents() {
    let w = win(3);
    let alg = expand(&corpus::exterior(), 3);
    let m = hochschild_mixed(&alg, &w).unwrap();
    let eps = unit_cocycle(&alg, &m).unwrap();
    for (size, rank) in [(1, 1), (2, 1), (3, 2), (3, 3), (2, 0)] {
        let e = Idempotent::diagonal(&alg, size, rank);
        let ch = chern0(&alg, &m, &K0Class::perf(1), Some(&e)).unwrap();
        assert_eq!(pairing(&m, &eps, &ch).unwrap(), scalar(rank as i64));
    }
    // a non-diagonal rank-one idempotent [[1, 1], [0, 0]]
    let one = SparseVec::unit(alg.unit());
    let e = Idempotent {
        entries: vec![
            vec![one.clone(), one.clone()],
            vec![SparseVec::new(), SparseVec::new()],
        ],
    };
    let ch = chern0(&alg, &m, &K0Class::perf(2), Some(&e)).unwrap();
    assert_eq!(pairing(&m, &eps, &ch).unwrap(), scalar(2));
}

#[test]
fn chern_character_rejects_bad_matrices() {
    let w = win(3);
    let alg = expand(&corpus::exterior(), 3);
    let m = hochschild_mixed(&alg, &w).unwrap();
    let twice = Idempotent {
        entries: vec![vec![SparseVec::unit(alg.unit()).scale(&scalar(2))]],
    };
    assert!(matches!(
        chern0(&alg, &m, &K0Class::perf(1), Some(&twice)),
        Err(ChernError::NotIdempotent(_))
    ));
    let x = gen_of(&alg, Bidegree::new(0, 1));
    let off = Idempotent {
        entries: vec![vec![SparseVec::unit(x)]],
    };
    assert!(matches!(
        chern0(&alg, &m, &K0Class::perf(1), Some(&off)),
        Err(ChernError::EntryNotCycle { .. })
    ));
}

#[test]
fn pairing_examples() {
    let w = win(3);
    let alg = expand(&corpus::polynomial(), 3);
    let m = hochschild_mixed(&alg, &w).unwrap();
    let eps = unit_cocycle(&alg, &m).unwrap();
    let one = chern0(&alg, &m, &K0Class::perf(1), None).unwrap();
    let unit = m.chain_index(alg.unit(), &[]).unwrap();
    let v1 = CyclicClass::from_components(
        CyclicVariant::CochainCyclic,
        Bidegree::new(2, 0),
        vec![(1, SparseVec::unit(unit))],
    );
    assert_eq!(pairing(&m, &v1, &one).unwrap(), scalar(0));
    assert!(matches!(
        pairing(&m, &one, &eps),
        Err(ChernError::VariantMismatch { .. })
    ));
    let far = CyclicClass::from_components(
        CyclicVariant::Negative,
        Bidegree::ZERO,
        vec![(0, SparseVec::unit(m.dim()))],
    );
    assert_eq!(pairing(&m, &eps, &far), Err(ChernError::AlgebraMismatch));
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> SparseVec {
    SparseVec::from_pairs((0..n).map(|i| (i, scalar(rng.gen_range(-3..=3)))))
}

#[test]
fn pairing_is_compatible_with_the_differentials() {
    let w = win(3);
    let alg = expand(&corpus::exterior(), 3);
    let m = hochschild_mixed(&alg, &w).unwrap();
    let chains = cyclic_complex(&m, CyclicVariant::Negative, &w);
    let cochains = cyclic_complex(&m, CyclicVariant::CochainCyclic, &w);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut nontrivial = 0;
    for _ in 0..100 {
        let n = rng.gen_range(-3..=3);
        let a = rng.gen_range(0..=3);
        let d = Bidegree::new(n, a);
        let below = Bidegree::new(n - 1, a);
        let x = chains.from_vector(d, &random_vector(&mut rng, chains.dim(d)));
        let phi = cochains.from_vector(below, &random_vector(&mut rng, cochains.dim(below)));
        let left = pairing(&m, &total_differential(&m, &phi), &x).unwrap();
        let right = pairing(&m, &phi, &total_differential(&m, &x)).unwrap();
        assert_eq!(left, right, "at {d}");
        if left != scalar(0) {
            nontrivial += 1;
        }
    }
    assert!(nontrivial > 0);
}

#[test]
fn pairing_kills_boundaries() {
    let w = win(3);
    let alg = expand(&corpus::polynomial(), 3);
    let m = hochschild_mixed(&alg, &w).unwrap();
    let chains = cyclic_complex(&m, CyclicVariant::Negative, &w);
    let cochains = cyclic_complex(&m, CyclicVariant::CochainCyclic, &w);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let d = Bidegree::new(rng.gen_range(-2..=2), rng.gen_range(0..=3));
        let cycles = chains.cycles(d);
        let cocycles = cochains.cycles(d);
        let pick = |rng: &mut ChaCha8Rng, basis: &[CyclicClass], variant, degree| {
            basis
                .iter()
                .fold(CyclicClass::zero(variant, degree), |acc, c| {
                    acc.add_scaled(&scalar(rng.gen_range(-2..=2)), c)
                })
        };
        let x = pick(&mut rng, &cycles, CyclicVariant::Negative, d);
        let phi = pick(&mut rng, &cocycles, CyclicVariant::CochainCyclic, d);
        let up = Bidegree::new(d.h + 1, d.a);
        let down = Bidegree::new(d.h - 1, d.a);
        let y = chains.from_vector(up, &random_vector(&mut rng, chains.dim(up)));
        let psi = cochains.from_vector(down, &random_vector(&mut rng, cochains.dim(down)));
        let base = pairing(&m, &phi, &x).unwrap();
        let bx = x.add_scaled(&scalar(1), &total_differential(&m, &y));
        let bphi = phi.add_scaled(&scalar(1), &total_differential(&m, &psi));
        assert_eq!(pairing(&m, &phi, &bx).unwrap(), base);
        assert_eq!(pairing(&m, &bphi, &x).unwrap(), base);
        assert_eq!(pairing(&m, &bphi, &bx).unwrap(), base);
    }
}

#[test]
fn contravariant_character_examples() {
    let w = win(3);
    for p in [corpus::trivial(), corpus::exterior(), corpus::polynomial()] {
        let r = contravariant_chern0(&expand(&p, 3), &holds(), &w).unwrap();
        assert!(r.dims_agree(), "{}", p.name);
        assert_eq!(r.negative_dual_dim, 1);
        assert_eq!(r.pairing, Some(scalar(1)), "{}", p.name);
        assert_eq!(r.class.len(), 1);
    }
    let fails = Verdict::Fails {
        witness: Bidegree::ZERO,
        reason: "r".into(),
    };
    assert_eq!(
        contravariant_chern0(&expand(&corpus::trivial(), 2), &fails, &w).unwrap_err(),
        ChernError::NotWeaklyAdamsConnected
    );
}

#[test]
fn triangle_is_bilinear_with_frozen_generator_value() {
    let w = win(3);
    let alg = expand(&corpus::exterior(), 3);
    let g = loday_triangle_check(
        &alg,
        &holds(),
        &w,
        &K0Class::ground(1),
        &K0Class::perf(1),
        None,
    )
    .unwrap();
    assert_eq!(g.generator_value, scalar(1));
    assert!(g.commutes());
    for (x, y) in [(0, 5), (4, 0), (2, 3), (-1, 7)] {
        let r = loday_triangle_check(
            &alg,
            &holds(),
            &w,
            &K0Class::ground(x),
            &K0Class::perf(y),
            None,
        )
        .unwrap();
        assert!(r.commutes());
        assert_eq!(r.via_pairing, scalar(x * y) * &g.generator_value);
    }
    let e = Idempotent::diagonal(&alg, 3, 2);
    let r = loday_triangle_check(
        &alg,
        &holds(),
        &w,
        &K0Class::ground(2),
        &K0Class::perf(3),
        Some(&e),
    )
    .unwrap();
    assert!(r.commutes());
    assert_eq!(r.via_pairing, scalar(12));
    assert!(matches!(
        loday_triangle_check(
            &alg,
            &holds(),
            &w,
            &K0Class::perf(1),
            &K0Class::perf(1),
            None
        ),
        Err(ChernError::WrongSide { .. })
    ));

    let dd = koszul_dual(&koszul_dual(&alg, &w).unwrap().algebra, &w).unwrap();
    let r = loday_triangle_check(
        &dd.algebra,
        &holds(),
        &w,
        &K0Class::ground(1),
        &K0Class::perf(1),
        None,
    )
    .unwrap();
    assert_eq!(r.generator_value, g.generator_value);
}
