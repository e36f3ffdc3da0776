use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::mixed::MixedComplexWindow;
use crate::exactlin::{
    homology, kernel_basis, Accumulator, ChainComplexWindow, HomologyReport, SparseMatrix,
    SparseVec,
};
use crate::grading::{Bidegree, Scalar, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CyclicVariant {
    /// `C[[u]]` with `b + uB`, `u` of degree -2
    Negative,
    /// `C((u))` with `b + uB`
    Periodic,
    /// `C((u))/uC[[u]]` with `b + uB`
    Cyclic,
    /// dual chains `C*[[v]]` with `b* + vB*`, `v` of degree +2
    CochainCyclic,
}

impl CyclicVariant {
    pub fn name(self) -> &'static str {
        match self {
            CyclicVariant::Negative => "HC-",
            CyclicVariant::Periodic => "HCper",
            CyclicVariant::Cyclic => "HC",
            CyclicVariant::CochainCyclic => "HC^",
        }
    }

    fn power_allowed(self, i: i64) -> bool {
        match self {
            CyclicVariant::Negative | CyclicVariant::CochainCyclic => i >= 0,
            CyclicVariant::Periodic => true,
            CyclicVariant::Cyclic => i <= 0,
        }
    }

    pub fn is_cochain(self) -> bool {
        self == CyclicVariant::CochainCyclic
    }
}

/// A homogeneous element `Σ x_i u^i` (or `Σ φ_j v^j`) of a total complex.
/// Chain vectors are over the mixed complex basis; cochain vectors are over
/// its dual basis. `degree` is `(n, a)`, with `n` cohomological for cochains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicClass {
    pub variant: CyclicVariant,
    pub degree: Bidegree,
    pub components: Vec<(i64, SparseVec)>,
}

impl CyclicClass {
    pub fn zero(variant: CyclicVariant, degree: Bidegree) -> Self {
        CyclicClass {
            variant,
            degree,
            components: Vec::new(),
        }
    }

    fn normalize(mut self) -> Self {
        self.components.retain(|(_, v)| !v.is_zero());
        self.components.sort_by_key(|(i, _)| *i);
        self
    }

    pub fn from_components(
        variant: CyclicVariant,
        degree: Bidegree,
        components: Vec<(i64, SparseVec)>,
    ) -> Self {
        let mut merged: BTreeMap<i64, SparseVec> = BTreeMap::new();
        for (i, v) in components {
            let e = merged.entry(i).or_default();
            *e = e.add_scaled(&crate::grading::scalar(1), &v);
        }
        CyclicClass {
            variant,
            degree,
            components: merged.into_iter().collect(),
        }
        .normalize()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|(_, v)| v.is_zero())
    }

    pub fn component(&self, power: i64) -> SparseVec {
        self.components
            .iter()
            .find(|(i, _)| *i == power)
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    }

    pub fn add_scaled(&self, c: &Scalar, other: &CyclicClass) -> CyclicClass {
        assert_eq!(self.variant, other.variant);
        assert_eq!(self.degree, other.degree);
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().map(|(i, v)| (*i, v.scale(c))));
        CyclicClass::from_components(self.variant, self.degree, comps)
    }

    pub fn scale(&self, c: &Scalar) -> CyclicClass {
        CyclicClass::from_components(
            self.variant,
            self.degree,
            self.components
                .iter()
                .map(|(i, v)| (*i, v.scale(c)))
                .collect(),
        )
    }
}

/// Applies `b + uB` (or `b* + vB*`) to a class.
pub fn total_differential(m: &MixedComplexWindow, x: &CyclicClass) -> CyclicClass {
    let v = x.variant;
    let mut comps = Vec::new();
    for (i, vec) in &x.components {
        if v.is_cochain() {
            comps.push((*i, m.apply_b_dual(vec)));
            comps.push((i + 1, m.apply_connes_dual(vec)));
        } else {
            comps.push((*i, m.apply_b(vec)));
            if v.power_allowed(i + 1) {
                comps.push((i + 1, m.apply_connes(vec)));
            }
        }
    }
    let shift = if v.is_cochain() { 1 } else { -1 };
    CyclicClass::from_components(v, x.degree + Bidegree::new(shift, 0), comps)
}

pub fn is_cycle(m: &MixedComplexWindow, x: &CyclicClass) -> bool {
    total_differential(m, x).is_zero()
}

/// A total complex materialized on total degrees `[h_min - 1, h_max + 1]`
/// of a window, so that homology on `[h_min, h_max]` is exact.
#[derive(Clone, Debug)]
pub struct CyclicComplex {
    pub variant: CyclicVariant,
    /// stored with the homological index `n` for chains and `-c` for cochains
    pub complex: ChainComplexWindow,
    /// basis of each stored bidegree as (power, mixed-complex index)
    pub layout: BTreeMap<Bidegree, Vec<(i64, usize)>>,
    pub window: Window,
}

impl CyclicComplex {
    fn stored(&self, degree: Bidegree) -> Bidegree {
        if self.variant.is_cochain() {
            Bidegree::new(-degree.h, degree.a)
        } else {
            degree
        }
    }

    /// Coordinates of a class in the total basis of its degree.
    pub fn to_vector(&self, x: &CyclicClass) -> SparseVec {
        let layout = &self.layout[&self.stored(x.degree)];
        let pos: HashMap<(i64, usize), usize> =
            layout.iter().enumerate().map(|(k, p)| (*p, k)).collect();
        let mut pairs = Vec::new();
        for (i, v) in &x.components {
            for (j, c) in v.iter() {
                pairs.push((pos[&(*i, j)], c.clone()));
            }
        }
        SparseVec::from_pairs(pairs)
    }

    pub fn from_vector(&self, degree: Bidegree, v: &SparseVec) -> CyclicClass {
        let layout = &self.layout[&self.stored(degree)];
        let comps = v
            .iter()
            .map(|(k, c)| {
                (
                    layout[k].0,
                    SparseVec::from_pairs([(layout[k].1, c.clone())]),
                )
            })
            .collect();
        CyclicClass::from_components(self.variant, degree, comps)
    }

    pub fn dim(&self, degree: Bidegree) -> usize {
        self.layout.get(&self.stored(degree)).map_or(0, Vec::len)
    }

    /// A basis of the cycles in one degree.
    pub fn cycles(&self, degree: Bidegree) -> Vec<CyclicClass> {
        let n = self.dim(degree);
        let basis = match self.complex.differentials.get(&self.stored(degree)) {
            Some(m) => kernel_basis(m),
            None => (0..n).map(SparseVec::unit).collect(),
        };
        basis.iter().map(|v| self.from_vector(degree, v)).collect()
    }

    /// Homology keyed by `(n, a)`, or `(c, a)` for cochains, restricted to the window.
    pub fn homology(&self) -> HomologyReport {
        let h = homology(&self.complex).expect("total differential squares to zero");
        let flip = |d: Bidegree| self.stored(d);
        let mut out = HomologyReport::default();
        for (d, n) in h.dims {
            let key = flip(d);
            if self.window.contains(key) {
                out.dims.insert(key, n);
                if h.truncated.contains(&d) {
                    out.truncated.insert(key);
                }
            }
        }
        out
    }
}

/// Assembles the total complex of `variant` on every Adams slice of `m`
/// inside the window.
pub fn cyclic_complex(m: &MixedComplexWindow, variant: CyclicVariant, w: &Window) -> CyclicComplex {
    let cochain = variant.is_cochain();
    let mut layout: BTreeMap<Bidegree, Vec<(i64, usize)>> = BTreeMap::new();
    let mut complex = ChainComplexWindow::default();
    let adams: Vec<i64> = m
        .adams_degrees()
        .into_iter()
        .filter(|a| w.contains_adams(*a))
        .collect();
    for &a in &adams {
        let (lo, hi) = m.span(a).unwrap();
        for n in (w.h_min - 1)..=(w.h_max + 1) {
            let mut basis = Vec::new();
            // chain degree of the power-i component: n + 2i (chains), n - 2i (cochains)
            let (imin, imax) = if cochain {
                ((n - hi).div_euclid(2) - 1, (n - lo).div_euclid(2) + 1)
            } else {
                ((lo - n).div_euclid(2) - 1, (hi - n).div_euclid(2) + 1)
            };
            for i in imin..=imax {
                if !variant.power_allowed(i) {
                    continue;
                }
                let h = if cochain { n - 2 * i } else { n + 2 * i };
                for x in m.indices_at(Bidegree::new(h, a)) {
                    basis.push((i, *x));
                }
            }
            let stored = Bidegree::new(if cochain { -n } else { n }, a);
            for (i, x) in &basis {
                let prefix = if cochain {
                    format!("v^{i}·")
                } else {
                    format!("u^{i}·")
                };
                let star = if cochain { "*" } else { "" };
                complex
                    .basis
                    .push(stored, format!("{prefix}{}{star}", m.label(*x)));
            }
            layout.insert(stored, basis);
        }
        let (slo, shi) = if cochain {
            (-(w.h_max + 1), -(w.h_min - 1))
        } else {
            (w.h_min - 1, w.h_max + 1)
        };
        complex.set_span(a, slo, shi);
    }

    for (&d, basis) in &layout {
        let target = d + Bidegree::DIFFERENTIAL;
        let Some(tgt) = layout.get(&target) else {
            continue;
        };
        let pos: HashMap<(i64, usize), usize> =
            tgt.iter().enumerate().map(|(k, p)| (*p, k)).collect();
        let cols: Vec<SparseVec> = basis
            .iter()
            .map(|(i, x)| {
                let e = SparseVec::unit(*x);
                let mut acc = Accumulator::new();
                let (first, second) = if cochain {
                    (m.apply_b_dual(&e), m.apply_connes_dual(&e))
                } else {
                    (m.apply_b(&e), m.apply_connes(&e))
                };
                for (y, c) in first.iter() {
                    acc.add(pos[&(*i, y)], c.clone());
                }
                if variant.power_allowed(i + 1) {
                    for (y, c) in second.iter() {
                        acc.add(pos[&(i + 1, y)], c.clone());
                    }
                }
                acc.finish()
            })
            .collect();
        let mat = SparseMatrix::from_columns(tgt.len(), cols);
        if !mat.is_zero() {
            complex.differentials.insert(d, mat);
        }
    }
    CyclicComplex {
        variant,
        complex,
        layout,
        window: *w,
    }
}

/// Cyclic cochains `(C*[[v]], b* + vB*)`, keyed by cohomological degree.
pub fn cyclic_cochain(m: &MixedComplexWindow, w: &Window) -> CyclicComplex {
    cyclic_complex(m, CyclicVariant::CochainCyclic, w)
}

/// Homology of one variant on the window.
pub fn cyclic_homology(
    m: &MixedComplexWindow,
    variant: CyclicVariant,
    w: &Window,
) -> HomologyReport {
    cyclic_complex(m, variant, w).homology()
}
