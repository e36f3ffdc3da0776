//! Bidegrees, graded bases and the Koszul sign rule.
//!
//! Every object in the crate is indexed by a [`Bidegree`]: a homological
//! degree `h` and an Adams degree `a`. Differentials have bidegree `(-1, 0)`,
//! the Connes operator `(+1, 0)`. Only the homological degree ever enters a
//! sign.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational scalar. Always normalized (lowest terms, positive denominator).
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `+1` or `-1` as a scalar.
pub fn sign_scalar(negative: bool) -> Scalar {
    if negative {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// Serializes a scalar as `"numerator/denominator"` (denominator always present).
pub fn format_scalar(q: &Scalar) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Serde adapter writing a scalar through [`format_scalar`].
pub fn serialize_scalar<S: serde::Serializer>(q: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(q))
}

/// Parses `"n"`, `"-n"` or `"n/d"`.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// A pair (homological degree, Adams degree).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub h: i64,
    pub a: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { h: 0, a: 0 };
    /// Bidegree of every differential.
    pub const DIFFERENTIAL: Bidegree = Bidegree { h: -1, a: 0 };
    /// Bidegree of the Connes operator.
    pub const CONNES: Bidegree = Bidegree { h: 1, a: 0 };

    pub const fn new(h: i64, a: i64) -> Self {
        Bidegree { h, a }
    }

    /// The degree a linear dual lives in: `(i, j) -> (-i, -j)`.
    pub fn dual(self) -> Self {
        -self
    }

    /// Parity of the homological degree.
    pub fn is_odd(self) -> bool {
        self.h.rem_euclid(2) == 1
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.h + rhs.h, self.a + rhs.a)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.h - rhs.h, self.a - rhs.a)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.h, -self.a)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.h, self.a)
    }
}

/// `(-1)^(h(x) * h(y))`: the sign picked up when `x` and `y` are swapped.
/// Adams degrees never contribute.
pub fn koszul_sign(x: Bidegree, y: Bidegree) -> Scalar {
    sign_scalar(koszul_parity(x.h, y.h))
}

/// True when `(-1)^(p*q)` is negative.
pub fn koszul_parity(p: i64, q: i64) -> bool {
    p.rem_euclid(2) == 1 && q.rem_euclid(2) == 1
}

/// Truncation window: the Adams and homological ranges a computation covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub a_min: i64,
    pub a_max: i64,
    pub h_min: i64,
    pub h_max: i64,
}

impl Window {
    pub fn new(a_min: i64, a_max: i64, h_min: i64, h_max: i64) -> Self {
        assert!(a_min <= a_max, "window Adams range is empty");
        assert!(h_min <= h_max, "window homological range is empty");
        Window {
            a_min,
            a_max,
            h_min,
            h_max,
        }
    }

    /// Window symmetric in Adams degree: `[-a_max, a_max] x [h_min, h_max]`.
    pub fn symmetric(a_max: i64, h_min: i64, h_max: i64) -> Self {
        Window::new(-a_max.abs(), a_max.abs(), h_min, h_max)
    }

    pub fn contains(&self, d: Bidegree) -> bool {
        self.contains_adams(d.a) && self.contains_h(d.h)
    }

    pub fn contains_adams(&self, a: i64) -> bool {
        self.a_min <= a && a <= self.a_max
    }

    pub fn contains_h(&self, h: i64) -> bool {
        self.h_min <= h && h <= self.h_max
    }

    /// Largest absolute Adams degree reachable inside the window.
    pub fn adams_reach(&self) -> i64 {
        self.a_min.abs().max(self.a_max.abs())
    }
}

/// Ordered basis labels per bidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedBasis {
    components: BTreeMap<Bidegree, Vec<String>>,
}

impl GradedBasis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a label to the component at `d`. Labels must be globally unique.
    pub fn push(&mut self, d: Bidegree, label: impl Into<String>) {
        self.components.entry(d).or_default().push(label.into());
    }

    /// Registers `d` with an empty basis if absent.
    pub fn touch(&mut self, d: Bidegree) {
        self.components.entry(d).or_default();
    }

    pub fn labels(&self, d: Bidegree) -> &[String] {
        self.components.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim(&self, d: Bidegree) -> usize {
        self.labels(d).len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.components.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Bidegree, &[String])> + '_ {
        self.components.iter().map(|(d, v)| (*d, v.as_slice()))
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    /// Drops every component outside `w`.
    pub fn restrict(&self, w: &Window) -> GradedBasis {
        GradedBasis {
            components: self
                .components
                .iter()
                .filter(|(d, _)| w.contains(**d))
                .map(|(d, v)| (*d, v.clone()))
                .collect(),
        }
    }

    /// Dimension table (zero components omitted).
    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.components
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(d, v)| (*d, v.len()))
            .collect()
    }
}

/// Moves every element from `b` to `b + d`, decorating labels with the shift.
/// Shifting back by `-d` strips the decoration again.
pub fn shift_basis(basis: &GradedBasis, d: Bidegree) -> GradedBasis {
    if d == Bidegree::ZERO {
        return basis.clone();
    }
    let mut out = GradedBasis::new();
    for (deg, labels) in basis.iter() {
        out.touch(deg + d);
        for l in labels {
            let (inner, shift) = split_shift(l);
            let total = shift + d;
            let label = if total == Bidegree::ZERO {
                inner.to_string()
            } else {
                format!("{inner}[{},{}]", total.h, total.a)
            };
            out.push(deg + d, label);
        }
    }
    out
}

fn split_shift(label: &str) -> (&str, Bidegree) {
    if let Some(stripped) = label.strip_suffix(']') {
        if let Some(open) = stripped.rfind('[') {
            let body = &stripped[open + 1..];
            if let Some((h, a)) = body.split_once(',') {
                if let (Ok(h), Ok(a)) = (h.parse::<i64>(), a.parse::<i64>()) {
                    return (&label[..open], Bidegree::new(h, a));
                }
            }
        }
    }
    (label, Bidegree::ZERO)
}

/// Absolute value helper for scalars used in diagnostics.
pub fn scalar_abs(q: &Scalar) -> Scalar {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sign_examples() {
        assert_eq!(
            koszul_sign(Bidegree::new(1, 3), Bidegree::new(1, 5)),
            scalar(-1)
        );
        assert_eq!(
            koszul_sign(Bidegree::new(0, 7), Bidegree::new(5, 2)),
            scalar(1)
        );
        assert_eq!(
            koszul_sign(Bidegree::new(2, 1), Bidegree::new(3, 4)),
            scalar(1)
        );
        assert_eq!(
            koszul_sign(Bidegree::new(-1, 0), Bidegree::new(-3, 0)),
            scalar(-1)
        );
    }

    #[test]
    fn shift_examples() {
        let mut b = GradedBasis::new();
        b.push(Bidegree::new(0, 1), "x");
        assert_eq!(shift_basis(&b, Bidegree::ZERO), b);
        let s = shift_basis(&b, Bidegree::new(1, 0));
        assert_eq!(s.dim(Bidegree::new(1, 1)), 1);
        assert_eq!(s.dim(Bidegree::new(0, 1)), 0);
        let back = shift_basis(&s, Bidegree::new(-1, 0));
        assert_eq!(back, b);
    }

    #[test]
    fn scalar_format_roundtrip() {
        let q = ratio(-6, 4);
        assert_eq!(format_scalar(&q), "-3/2");
        assert_eq!(parse_scalar("-3/2"), Some(q));
        assert_eq!(format_scalar(&scalar(5)), "5/1");
        assert_eq!(parse_scalar("1/0"), None);
    }

    fn arb_bidegree() -> impl Strategy<Value = Bidegree> {
        (-50i64..50, -50i64..50).prop_map(|(h, a)| Bidegree::new(h, a))
    }

    proptest! {
        #[test]
        fn sign_is_symmetric(x in arb_bidegree(), y in arb_bidegree()) {
            prop_assert_eq!(koszul_sign(x, y) * koszul_sign(y, x), scalar(1));
        }

        #[test]
        fn sign_is_bilinear(x in arb_bidegree(), y in arb_bidegree(), z in arb_bidegree()) {
            prop_assert_eq!(koszul_sign(x + y, z), koszul_sign(x, z) * koszul_sign(y, z));
        }

        #[test]
        fn shift_is_bijective_and_commutes_with_restriction(
            degs in proptest::collection::vec(arb_bidegree(), 0..12),
            d in arb_bidegree(),
        ) {
            let mut b = GradedBasis::new();
            for (i, deg) in degs.iter().enumerate() {
                b.push(*deg, format!("e{i}"));
            }
            let s = shift_basis(&b, d);
            prop_assert_eq!(s.total_dim(), b.total_dim());
            prop_assert_eq!(shift_basis(&s, -d), b.clone());
            let w = Window::new(-10, 10, -10, 10);
            let shifted_w = Window::new(-10 + d.a, 10 + d.a, -10 + d.h, 10 + d.h);
            prop_assert_eq!(shift_basis(&b.restrict(&w), d), s.restrict(&shifted_w));
        }
    }
}
