use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::k0::{k0_transport, K0Class, K0Side};
use super::ChernError;
use crate::algebra::{AlgebraWindow, Verdict};
use crate::bar::koszul_dual;
use crate::cyclic::{
    cyclic_homology, hochschild_mixed, is_cycle, mirrored, CyclicClass, CyclicVariant,
    MixedComplexWindow,
};
use crate::exactlin::{Accumulator, SparseVec};
use crate::grading::{ratio, scalar, serialize_scalar, Bidegree, Scalar, Window};

/// A square matrix over the algebra, entries as basis expansions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Idempotent {
    pub entries: Vec<Vec<SparseVec>>,
}

impl Idempotent {
    /// `diag(1, …, 1, 0, …, 0)` with `rank` ones.
    pub fn diagonal(alg: &AlgebraWindow, size: usize, rank: usize) -> Self {
        let entries = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        if i == j && i < rank {
                            SparseVec::unit(alg.unit())
                        } else {
                            SparseVec::new()
                        }
                    })
                    .collect()
            })
            .collect();
        Idempotent { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entries are `d`-cycles of bidegree (0, 0) and `e² = e`.
    pub fn validate(&self, alg: &AlgebraWindow) -> Result<(), ChernError> {
        let n = self.size();
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != n {
                return Err(ChernError::NotIdempotent(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, x) in row.iter().enumerate() {
                if x.iter().any(|(b, _)| alg.degree(b) != Bidegree::ZERO) {
                    return Err(ChernError::EntryNotCycle { row: i, col: j });
                }
                if !alg.apply_d(x).is_zero() {
                    return Err(ChernError::EntryNotCycle { row: i, col: j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let mut acc = Accumulator::new();
                for k in 0..n {
                    let p = alg
                        .multiply(&self.entries[i][k], &self.entries[k][j])
                        .ok_or_else(|| ChernError::OutOfWindow {
                            detail: "idempotent product".into(),
                        })?;
                    acc.add_vec(&scalar(1), &p);
                }
                if acc.finish() != self.entries[i][j] {
                    return Err(ChernError::NotIdempotent(format!("(e²)_{i}{j} ≠ e_{i}{j}")));
                }
            }
        }
        Ok(())
    }
}

fn factorial_ratio(k: usize) -> Scalar {
    // (2k)! / k!
    let mut p = BigInt::one();
    for i in (k + 1)..=(2 * k) {
        p *= BigInt::from(i);
    }
    BigRational::from_integer(p)
}

/// Chain coordinates of `Σ_{i0..in} x^{(0)}_{i0 i1} ⊗ x^{(1)}_{i1 i2} ⊗ … ⊗ x^{(n)}_{in i0}`
/// in normalized chains; letter factors are projected to the augmentation ideal.
fn trace_tensor(
    alg: &AlgebraWindow,
    m: &MixedComplexWindow,
    factors: &[&Vec<Vec<SparseVec>>],
) -> Result<SparseVec, ChernError> {
    let n = factors[0].len();
    let unit = alg.unit();
    let mut partial: HashMap<(usize, usize, Vec<usize>), Scalar> = HashMap::new();
    // state: (first row index, current column index, word so far including a0 at front)
    for i0 in 0..n {
        for i1 in 0..n {
            for (b, c) in factors[0][i0][i1].iter() {
                *partial
                    .entry((i0, i1, vec![b]))
                    .or_insert_with(Scalar::zero) += c;
            }
        }
    }
    for f in &factors[1..] {
        let mut next: HashMap<(usize, usize, Vec<usize>), Scalar> = HashMap::new();
        for ((i0, cur, word), c) in &partial {
            for j in 0..n {
                for (b, cb) in f[*cur][j].iter() {
                    if b == unit {
                        continue;
                    }
                    let mut w = word.clone();
                    w.push(b);
                    *next.entry((*i0, j, w)).or_insert_with(Scalar::zero) += c * cb;
                }
            }
        }
        partial = next;
    }
    let mut acc = Accumulator::new();
    for ((i0, last, word), c) in partial {
        if i0 != last || c.is_zero() {
            continue;
        }
        let idx = m
            .chain_index(word[0], &word[1..])
            .ok_or_else(|| ChernError::OutOfWindow {
                detail: format!(
                    "chain of length {} in the Chern representative",
                    word.len() - 1
                ),
            })?;
        acc.add(idx, c);
    }
    Ok(acc.finish())
}

/// The degree-0 Chern character in `HC⁻₀`. Without an idempotent, `m·[gen]`
/// maps to `m·1`. With `e`, the representative is
/// `tr(e) + Σ_{k≥1} (-1)^k (2k)!/k! tr((e - ½) ⊗ e^{⊗2k}) u^k`, scaled by `m`.
/// The result is verified to be a `(b + uB)`-cycle.
pub fn chern0(
    alg: &AlgebraWindow,
    m: &MixedComplexWindow,
    xi: &K0Class,
    e: Option<&Idempotent>,
) -> Result<CyclicClass, ChernError> {
    let unit_chain = m
        .chain_index(alg.unit(), &[])
        .ok_or(ChernError::AlgebraMismatch)?;
    let mut comps = Vec::new();
    match e {
        None => comps.push((0, SparseVec::unit(unit_chain))),
        Some(e) => {
            e.validate(alg)?;
            let trace: Vec<Vec<SparseVec>> = vec![vec![{
                let mut acc = Accumulator::new();
                for i in 0..e.size() {
                    acc.add_vec(&scalar(1), &e.entries[i][i]);
                }
                acc.finish()
            }]];
            comps.push((0, trace_tensor(alg, m, &[&trace])?));
            let half = SparseVec::unit(alg.unit()).scale(&ratio(1, 2));
            let shifted: Vec<Vec<SparseVec>> = e
                .entries
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, x)| {
                            if i == j {
                                x.add_scaled(&-scalar(1), &half)
                            } else {
                                x.clone()
                            }
                        })
                        .collect()
                })
                .collect();
            let mut k = 1;
            while !m.indices_at(Bidegree::new(2 * k as i64, 0)).is_empty() {
                let mut factors = vec![&shifted];
                factors.extend(std::iter::repeat_n(&e.entries, 2 * k));
                let sign = if k % 2 == 1 { -scalar(1) } else { scalar(1) };
                let v = trace_tensor(alg, m, &factors)?.scale(&(sign * factorial_ratio(k)));
                comps.push((k as i64, v));
                k += 1;
            }
        }
    }
    let mult = scalar(xi.m);
    let class = CyclicClass::from_components(
        CyclicVariant::Negative,
        Bidegree::ZERO,
        comps
            .into_iter()
            .map(|(i, v)| (i, v.scale(&mult)))
            .collect(),
    );
    if !is_cycle(m, &class) {
        return Err(ChernError::NotACycle);
    }
    Ok(class)
}

/// `⟨Σ φ_j v^j, Σ x_i u^i⟩ = Σ_i φ_i(x_i)` by dual-basis contraction. With
/// `v` of degree +2 and `u` of degree -2 only the `i = 0` term can be nonzero.
pub fn pairing(
    m: &MixedComplexWindow,
    phi: &CyclicClass,
    x: &CyclicClass,
) -> Result<Scalar, ChernError> {
    if phi.variant != CyclicVariant::CochainCyclic || x.variant != CyclicVariant::Negative {
        return Err(ChernError::VariantMismatch {
            left: phi.variant.name().into(),
            right: x.variant.name().into(),
        });
    }
    let dim = m.dim();
    let within = |c: &CyclicClass| {
        c.components
            .iter()
            .all(|(_, v)| v.max_index().is_none_or(|i| i < dim))
    };
    if !within(phi) || !within(x) {
        return Err(ChernError::AlgebraMismatch);
    }
    if phi.degree != x.degree {
        return Ok(Scalar::zero());
    }
    let mut total = Scalar::zero();
    for (i, v) in &phi.components {
        total += v.dot(&x.component(*i));
    }
    Ok(total)
}

/// The functional dual to the unit chain `1[]`, placed at `v⁰`.
pub fn unit_cocycle(
    alg: &AlgebraWindow,
    m: &MixedComplexWindow,
) -> Result<CyclicClass, ChernError> {
    let idx = m
        .chain_index(alg.unit(), &[])
        .ok_or(ChernError::AlgebraMismatch)?;
    let class = CyclicClass::from_components(
        CyclicVariant::CochainCyclic,
        Bidegree::ZERO,
        vec![(0, SparseVec::unit(idx))],
    );
    if !is_cycle(m, &class) {
        return Err(ChernError::NotACycle);
    }
    Ok(class)
}

#[derive(Clone, Debug, Serialize)]
pub struct ContravariantReport {
    pub algebra: String,
    pub transported: K0Class,
    /// `ch⁰(1·[k])` in `HC⁻₀(A^!)`, as (power, chain label, coefficient)
    pub class: Vec<(i64, String, String)>,
    pub negative_dual_dim: usize,
    pub cochain_dim: usize,
    #[serde(serialize_with = "serialize_opt")]
    pub pairing: Option<Scalar>,
}

fn serialize_opt<S: serde::Serializer>(q: &Option<Scalar>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => serialize_scalar(q, s),
        None => s.serialize_none(),
    }
}

impl ContravariantReport {
    pub fn dims_agree(&self) -> bool {
        self.negative_dual_dim == self.cochain_dim
    }
}

pub fn describe_class(m: &MixedComplexWindow, c: &CyclicClass) -> Vec<(i64, String, String)> {
    let mut out = Vec::new();
    for (i, v) in &c.components {
        for (j, q) in v.iter() {
            out.push((*i, m.label(j).to_string(), crate::grading::format_scalar(q)));
        }
    }
    out
}

/// `1·[k] ↦ 1·[A^!] ↦ ch⁰ ∈ HC⁻₀(A^!)`, the degree-0 dimension check
/// against `HC⁰(A)`, and the value of the unit cocycle of `A^!` on the class.
pub fn contravariant_chern0(
    alg: &AlgebraWindow,
    weakly_adams_connected: &Verdict,
    w: &Window,
) -> Result<ContravariantReport, ChernError> {
    let transported = k0_transport(&K0Class::ground(1), weakly_adams_connected)?;
    let dual = koszul_dual(alg, w).map_err(crate::cyclic::CyclicError::from)?;
    let mixed_dual = hochschild_mixed(&dual.algebra, w)?;
    let mixed_a = hochschild_mixed(alg, w)?;
    let class = chern0(&dual.algebra, &mixed_dual, &transported, None)?;
    let zero_window = Window::new(0, 0, -1, 1);
    let negative_dual_dim = cyclic_homology(
        &mixed_dual,
        CyclicVariant::Negative,
        &mirrored(&zero_window),
    )
    .dim(Bidegree::ZERO);
    let cochain_dim =
        cyclic_homology(&mixed_a, CyclicVariant::CochainCyclic, &zero_window).dim(Bidegree::ZERO);
    let pairing_value = if negative_dual_dim == 1 && cochain_dim == 1 {
        Some(pairing(
            &mixed_dual,
            &unit_cocycle(&dual.algebra, &mixed_dual)?,
            &class,
        )?)
    } else {
        None
    };
    Ok(ContravariantReport {
        algebra: alg.name.clone(),
        transported,
        class: describe_class(&mixed_dual, &class),
        negative_dual_dim,
        cochain_dim,
        pairing: pairing_value,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleReport {
    pub xi: K0Class,
    pub eta: K0Class,
    #[serde(serialize_with = "serialize_scalar")]
    pub generator_value: Scalar,
    /// `⟨ch^∨(ξ), ch(η)⟩` on chains
    #[serde(serialize_with = "serialize_scalar")]
    pub via_pairing: Scalar,
    /// `m_ξ · m_η · ⟨ch^∨[k], ch[A]⟩`
    #[serde(serialize_with = "serialize_scalar")]
    pub via_generators: Scalar,
}

impl TriangleReport {
    pub fn commutes(&self) -> bool {
        self.via_pairing == self.via_generators
    }
}

/// Evaluates `⟨ξ, η⟩_K` at `n = 0` along both sides of the triangle. The
/// contravariant character of `m·[k]` is taken to be `m · c · ε_A`, where
/// `c` is the value of the unit cocycle of `A^!` on `ch⁰(1·[A^!])`: in degree
/// (0, 0) both cyclic groups are spanned by the unit classes.
pub fn loday_triangle_check(
    alg: &AlgebraWindow,
    weakly_adams_connected: &Verdict,
    w: &Window,
    xi: &K0Class,
    eta: &K0Class,
    e: Option<&Idempotent>,
) -> Result<TriangleReport, ChernError> {
    if xi.side != K0Side::ThickGround {
        return Err(ChernError::WrongSide {
            expected: K0Side::ThickGround,
            found: xi.side,
        });
    }
    if eta.side != K0Side::Perf {
        return Err(ChernError::WrongSide {
            expected: K0Side::Perf,
            found: eta.side,
        });
    }
    let contra = contravariant_chern0(alg, weakly_adams_connected, w)?;
    let c = contra.pairing.ok_or(ChernError::DegreeZeroMismatch {
        negative_dual: contra.negative_dual_dim,
        cochain: contra.cochain_dim,
    })?;
    let mixed = hochschild_mixed(alg, w)?;
    let eps = unit_cocycle(alg, &mixed)?;
    let ch_gen = chern0(alg, &mixed, &K0Class::perf(1), e)?;
    let generator_value = pairing(&mixed, &eps.scale(&c), &ch_gen)?;
    let ch_eta = chern0(alg, &mixed, eta, e)?;
    let ch_dual_xi = eps.scale(&(c * scalar(xi.m)));
    let via_pairing = pairing(&mixed, &ch_dual_xi, &ch_eta)?;
    let via_generators = &generator_value * scalar(xi.m * eta.m);
    Ok(TriangleReport {
        xi: *xi,
        eta: *eta,
        generator_value,
        via_pairing,
        via_generators,
    })
}
