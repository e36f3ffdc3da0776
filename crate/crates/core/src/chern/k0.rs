use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::ChernError;
use crate::algebra::{AlgebraWindow, Verdict};
use crate::exactlin::{Accumulator, SparseVec};
use crate::grading::{scalar, sign_scalar, Bidegree, Scalar};

/// Which Grothendieck group a class lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum K0Side {
    /// `K₀(Perf(A))`, generated by `[A]`
    Perf,
    /// `K₀(thick_A(k))`, generated by `[k]`
    ThickGround,
}

impl fmt::Display for K0Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            K0Side::Perf => "Perf(A)",
            K0Side::ThickGround => "thick_A(k)",
        })
    }
}

/// `m` times the canonical generator of one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct K0Class {
    pub side: K0Side,
    pub m: i64,
}

impl K0Class {
    pub fn perf(m: i64) -> Self {
        K0Class {
            side: K0Side::Perf,
            m,
        }
    }

    pub fn ground(m: i64) -> Self {
        K0Class {
            side: K0Side::ThickGround,
            m,
        }
    }

    pub fn add(self, other: K0Class) -> Result<K0Class, ChernError> {
        if self.side != other.side {
            return Err(ChernError::WrongSide {
                expected: self.side,
                found: other.side,
            });
        }
        Ok(K0Class {
            side: self.side,
            m: self.m + other.m,
        })
    }

    pub fn shift(self, n: i64) -> K0Class {
        K0Class {
            side: self.side,
            m: if n.rem_euclid(2) == 1 {
                -self.m
            } else {
                self.m
            },
        }
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = match self.side {
            K0Side::Perf => "[A]",
            K0Side::ThickGround => "[k]",
        };
        write!(f, "{}·{}", self.m, g)
    }
}

/// A semifree right module on finitely many generators `e_j`, with
/// `d(e_j) = Σ_{i<j} e_i · a_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfObject {
    pub generators: Vec<Bidegree>,
    pub entries: BTreeMap<(usize, usize), SparseVec>,
}

impl PerfObject {
    pub fn zero() -> Self {
        PerfObject {
            generators: Vec::new(),
            entries: BTreeMap::new(),
        }
    }

    /// The free module of rank one on a generator of the given bidegree.
    pub fn free(degree: Bidegree) -> Self {
        PerfObject {
            generators: vec![degree],
            entries: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn direct_sum(&self, other: &PerfObject) -> PerfObject {
        let n = self.rank();
        let mut out = self.clone();
        out.generators.extend(other.generators.iter().copied());
        for ((i, j), a) in &other.entries {
            out.entries.insert((i + n, j + n), a.clone());
        }
        out
    }

    /// `P[n]`: generators move up by `n`, entries pick up `(-1)^n`.
    pub fn shift(&self, n: i64) -> PerfObject {
        let sign = sign_scalar(n.rem_euclid(2) == 1);
        PerfObject {
            generators: self
                .generators
                .iter()
                .map(|d| *d + Bidegree::new(n, 0))
                .collect(),
            entries: self
                .entries
                .iter()
                .map(|(k, a)| (*k, a.scale(&sign)))
                .collect(),
        }
    }

    /// The cone of `c · id` on `P`, as `P ⊕ P[1]`.
    pub fn cone_of_scalar(&self, alg: &AlgebraWindow, c: &Scalar) -> PerfObject {
        let n = self.rank();
        let mut out = self.direct_sum(&self.shift(1));
        if !c.is_zero() {
            for j in 0..n {
                out.entries
                    .insert((j, n + j), SparseVec::unit(alg.unit()).scale(c));
            }
        }
        out
    }

    /// Cone of the zero map `source → target`.
    pub fn cone_of_zero(source: &PerfObject, target: &PerfObject) -> PerfObject {
        target.direct_sum(&source.shift(1))
    }

    /// Checks triangularity, entry degrees and `d² = 0`. The coefficient of
    /// `e_i` in `d²(e_j)` is `Σ_k a_ik a_kj + (-1)^{|e_i|} d(a_ij)`.
    pub fn validate(&self, alg: &AlgebraWindow) -> Result<(), ChernError> {
        let invalid = |detail: String| ChernError::InvalidPerfObject { detail };
        for ((i, j), a) in &self.entries {
            if i >= j || *j >= self.rank() {
                return Err(invalid(format!(
                    "entry ({i}, {j}) is not strictly upper triangular"
                )));
            }
            let want = self.generators[*j] - self.generators[*i] + Bidegree::DIFFERENTIAL;
            if let Some((x, _)) = a.iter().find(|(x, _)| alg.degree(*x) != want) {
                return Err(invalid(format!(
                    "entry ({i}, {j}) has a term `{}` of bidegree {}, expected {want}",
                    alg.label(x),
                    alg.degree(x)
                )));
            }
        }
        for j in 0..self.rank() {
            for i in 0..j {
                let mut acc = Accumulator::new();
                for k in i + 1..j {
                    if let (Some(x), Some(y)) =
                        (self.entries.get(&(i, k)), self.entries.get(&(k, j)))
                    {
                        let p = alg.multiply(x, y).ok_or_else(|| ChernError::OutOfWindow {
                            detail: format!("product of entries ({i}, {k}) and ({k}, {j})"),
                        })?;
                        acc.add_vec(&scalar(1), &p);
                    }
                }
                if let Some(a) = self.entries.get(&(i, j)) {
                    let sign = sign_scalar(self.generators[i].is_odd());
                    acc.add_vec(&sign, &alg.apply_d(a));
                }
                if !acc.finish().is_zero() {
                    return Err(invalid(format!(
                        "d² ≠ 0 on generator {j} (coefficient of generator {i})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `Σ (-1)^h` over the generators, as a multiple of `[A]`.
pub fn euler_class(p: &PerfObject) -> K0Class {
    K0Class::perf(
        p.generators
            .iter()
            .map(|d| if d.is_odd() { -1 } else { 1 })
            .sum(),
    )
}

/// `m·[k] ↦ m·[A^!]`, refused when weak Adams connectivity fails.
pub fn k0_transport(xi: &K0Class, weakly_adams_connected: &Verdict) -> Result<K0Class, ChernError> {
    if xi.side != K0Side::ThickGround {
        return Err(ChernError::WrongSide {
            expected: K0Side::ThickGround,
            found: xi.side,
        });
    }
    if weakly_adams_connected.fails() {
        return Err(ChernError::NotWeaklyAdamsConnected);
    }
    Ok(K0Class::perf(xi.m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConeMap {
    Zero,
    /// `c · id`; source and target must agree
    Scalar(#[serde(serialize_with = "crate::grading::serialize_scalar")] Scalar),
}

/// Objects built from `k` and `A` by shifts and cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GeneratorExpr {
    Ground,
    Free,
    Shift(Box<GeneratorExpr>, i64),
    Cone {
        source: Box<GeneratorExpr>,
        target: Box<GeneratorExpr>,
        map: ConeMap,
    },
}

impl GeneratorExpr {
    pub fn shift(self, n: i64) -> Self {
        GeneratorExpr::Shift(Box::new(self), n)
    }

    pub fn cone(source: GeneratorExpr, target: GeneratorExpr, map: ConeMap) -> Self {
        GeneratorExpr::Cone {
            source: Box::new(source),
            target: Box::new(target),
            map,
        }
    }

    /// Checks that scalar cone maps join equal objects.
    pub fn validate(&self) -> Result<(), ChernError> {
        match self {
            GeneratorExpr::Ground | GeneratorExpr::Free => Ok(()),
            GeneratorExpr::Shift(x, _) => x.validate(),
            GeneratorExpr::Cone {
                source,
                target,
                map,
            } => {
                source.validate()?;
                target.validate()?;
                if matches!(map, ConeMap::Scalar(_)) && source != target {
                    return Err(ChernError::Grammar(format!(
                        "a scalar cone map needs equal ends, got {source} → {target}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Coefficients of `[k]` and `[A]`.
    fn coefficients(&self) -> (i64, i64) {
        match self {
            GeneratorExpr::Ground => (1, 0),
            GeneratorExpr::Free => (0, 1),
            GeneratorExpr::Shift(x, n) => {
                let (g, f) = x.coefficients();
                if n.rem_euclid(2) == 1 {
                    (-g, -f)
                } else {
                    (g, f)
                }
            }
            GeneratorExpr::Cone { source, target, .. } => {
                let (sg, sf) = source.coefficients();
                let (tg, tf) = target.coefficients();
                (tg - sg, tf - sf)
            }
        }
    }

    fn leaves(&self) -> (bool, bool) {
        match self {
            GeneratorExpr::Ground => (true, false),
            GeneratorExpr::Free => (false, true),
            GeneratorExpr::Shift(x, _) => x.leaves(),
            GeneratorExpr::Cone { source, target, .. } => {
                let (a, b) = source.leaves();
                let (c, d) = target.leaves();
                (a || c, b || d)
            }
        }
    }

    /// The class in `K₀(thick(k))` or `K₀(Perf)`, depending on the leaves.
    pub fn class(&self) -> Result<K0Class, ChernError> {
        self.validate()?;
        let (g, f) = self.coefficients();
        match self.leaves() {
            (true, false) => Ok(K0Class::ground(g)),
            (false, true) => Ok(K0Class::perf(f)),
            _ => Err(ChernError::Grammar(format!("{self} mixes k and A"))),
        }
    }

    /// A semifree model, for expressions built from the free module only.
    pub fn realize(&self, alg: &AlgebraWindow) -> Result<PerfObject, ChernError> {
        self.validate()?;
        match self {
            GeneratorExpr::Free => Ok(PerfObject::free(Bidegree::ZERO)),
            GeneratorExpr::Ground => Err(ChernError::Grammar(
                "k has no finite semifree model here".into(),
            )),
            GeneratorExpr::Shift(x, n) => Ok(x.realize(alg)?.shift(*n)),
            GeneratorExpr::Cone {
                source,
                target,
                map,
            } => {
                let s = source.realize(alg)?;
                match map {
                    ConeMap::Zero => Ok(PerfObject::cone_of_zero(&s, &target.realize(alg)?)),
                    ConeMap::Scalar(c) => Ok(s.cone_of_scalar(alg, c)),
                }
            }
        }
    }
}

impl fmt::Display for GeneratorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorExpr::Ground => f.write_str("k"),
            GeneratorExpr::Free => f.write_str("A"),
            GeneratorExpr::Shift(x, n) => write!(f, "{x}[{n}]"),
            GeneratorExpr::Cone {
                source,
                target,
                map,
            } => match map {
                ConeMap::Zero => write!(f, "Cone({source} -0-> {target})"),
                ConeMap::Scalar(c) => write!(f, "Cone({source} -{c}-> {target})"),
            },
        }
    }
}

/// `RHom_A(X, k)` over `A^!`, in the same grammar: `k ↔ A`, shifts negate,
/// cones reverse direction and shift down by one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformedObject {
    pub source: GeneratorExpr,
    pub image: GeneratorExpr,
    pub class: K0Class,
}

fn transform(x: &GeneratorExpr) -> GeneratorExpr {
    match x {
        GeneratorExpr::Ground => GeneratorExpr::Free,
        GeneratorExpr::Free => GeneratorExpr::Ground,
        GeneratorExpr::Shift(y, n) => transform(y).shift(-n),
        GeneratorExpr::Cone {
            source,
            target,
            map,
        } => GeneratorExpr::cone(transform(target), transform(source), map.clone()).shift(-1),
    }
}

pub fn koszul_transform_generator(x: &GeneratorExpr) -> Result<TransformedObject, ChernError> {
    x.validate()?;
    let image = transform(x);
    let class = image.class()?;
    Ok(TransformedObject {
        source: x.clone(),
        image,
        class,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportSquare {
    pub object: String,
    pub transported: K0Class,
    pub transformed: K0Class,
}

impl TransportSquare {
    pub fn commutes(&self) -> bool {
        self.transported == self.transformed
    }
}

/// Compares `k0_transport(class(X))` with the Euler class of a semifree model
/// of the transform of `X` over the dual algebra.
pub fn transport_square(
    x: &GeneratorExpr,
    dual: &AlgebraWindow,
    weakly_adams_connected: &Verdict,
) -> Result<TransportSquare, ChernError> {
    let transported = k0_transport(&x.class()?, weakly_adams_connected)?;
    let image = koszul_transform_generator(x)?.image;
    let model = image.realize(dual)?;
    model.validate(dual)?;
    Ok(TransportSquare {
        object: x.to_string(),
        transported,
        transformed: euler_class(&model),
    })
}
