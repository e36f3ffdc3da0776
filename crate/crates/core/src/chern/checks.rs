use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::character::pairing;
use crate::cyclic::{
    cyclic_complex, total_differential, CyclicClass, CyclicComplex, CyclicVariant,
    MixedComplexWindow,
};
use crate::exactlin::SparseVec;
use crate::grading::{scalar, Bidegree, Window};

/// Outcome of randomized pairing checks; failures carry the bidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairingChecks {
    pub boundary_samples: usize,
    pub compatibility_samples: usize,
    pub bilinearity_samples: usize,
    /// samples where the compared values were nonzero
    pub nontrivial: usize,
    pub failures: Vec<String>,
}

impl PairingChecks {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> SparseVec {
    SparseVec::from_pairs((0..n).map(|i| (i, scalar(rng.gen_range(-3..=3)))))
}

fn random_class(rng: &mut ChaCha8Rng, c: &CyclicComplex, d: Bidegree) -> CyclicClass {
    c.from_vector(d, &random_vector(rng, c.dim(d)))
}

fn random_cycle(rng: &mut ChaCha8Rng, c: &CyclicComplex, d: Bidegree) -> CyclicClass {
    c.cycles(d)
        .iter()
        .fold(CyclicClass::zero(c.variant, d), |acc, z| {
            acc.add_scaled(&scalar(rng.gen_range(-2..=2)), z)
        })
}

/// Samples `samples` bidegrees of the window and checks, at each:
/// boundary annihilation on (cocycle, cycle) pairs, the identity
/// `⟨(b* + vB*)φ, x⟩ = ⟨φ, (b + uB)x⟩`, and bilinearity.
pub fn pairing_checks(
    m: &MixedComplexWindow,
    w: &Window,
    samples: usize,
    seed: u64,
) -> PairingChecks {
    let chains = cyclic_complex(m, CyclicVariant::Negative, w);
    let cochains = cyclic_complex(m, CyclicVariant::CochainCyclic, w);
    let adams: Vec<i64> = m
        .adams_degrees()
        .into_iter()
        .filter(|a| w.contains_adams(*a))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = PairingChecks::default();
    let pair = |phi: &CyclicClass, x: &CyclicClass| {
        pairing(m, phi, x).expect("classes come from this complex")
    };
    for _ in 0..samples {
        let a = adams[rng.gen_range(0..adams.len())];
        let d = Bidegree::new(rng.gen_range(w.h_min..=w.h_max), a);
        let up = d + Bidegree::CONNES;
        let down = d + Bidegree::DIFFERENTIAL;

        let x = random_cycle(&mut rng, &chains, d);
        let phi = random_cycle(&mut rng, &cochains, d);
        let y = random_class(&mut rng, &chains, up);
        let psi = random_class(&mut rng, &cochains, down);
        let base = pair(&phi, &x);
        let bx = x.add_scaled(&scalar(1), &total_differential(m, &y));
        let bphi = phi.add_scaled(&scalar(1), &total_differential(m, &psi));
        out.boundary_samples += 1;
        if pair(&phi, &bx) != base || pair(&bphi, &x) != base || pair(&bphi, &bx) != base {
            out.failures
                .push(format!("boundary perturbation changes the pairing at {d}"));
        }

        let x = random_class(&mut rng, &chains, d);
        let phi = random_class(&mut rng, &cochains, down);
        let left = pair(&total_differential(m, &phi), &x);
        let right = pair(&phi, &total_differential(m, &x));
        out.compatibility_samples += 1;
        if left != right {
            out.failures
                .push(format!("⟨δφ, x⟩ = {left} but ⟨φ, ∂x⟩ = {right} at {d}"));
        }
        if left != scalar(0) || base != scalar(0) {
            out.nontrivial += 1;
        }

        let x2 = random_class(&mut rng, &chains, d);
        let phi = random_class(&mut rng, &cochains, d);
        let phi2 = random_class(&mut rng, &cochains, d);
        let c = scalar(rng.gen_range(-4..=4));
        out.bilinearity_samples += 1;
        let lin_x = pair(&phi, &x.add_scaled(&c, &x2)) == pair(&phi, &x) + &c * pair(&phi, &x2);
        let lin_phi = pair(&phi.add_scaled(&c, &phi2), &x) == pair(&phi, &x) + &c * pair(&phi2, &x);
        if !(lin_x && lin_phi) {
            out.failures.push(format!("pairing is not bilinear at {d}"));
        }
    }
    out
}
