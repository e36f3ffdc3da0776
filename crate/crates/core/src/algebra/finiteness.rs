use serde::Serialize;

use super::presentation::Presentation;
use super::window::AlgebraWindow;
use crate::grading::Bidegree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Holds { reason: String },
    Fails { witness: Bidegree, reason: String },
    Unknown { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Holds { .. } => "holds",
            Verdict::Fails { .. } => "fails",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

/// The three nested finiteness classes of the augmentation ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitenessReport {
    pub strongly_locally_finite: Verdict,
    pub adams_connected: Verdict,
    pub weakly_adams_connected: Verdict,
    /// total dimension of each expanded Adams slice, when an expansion was given
    pub slice_dims: Vec<(i64, usize)>,
}

impl FinitenessReport {
    /// Adams connected ⇒ strongly locally finite ⇒ weakly Adams connected,
    /// checked wherever both sides are decided.
    pub fn implications_hold(&self) -> bool {
        let ac_slf = !(self.adams_connected.holds() && self.strongly_locally_finite.fails());
        let slf_wac =
            !(self.strongly_locally_finite.holds() && !self.weakly_adams_connected.holds());
        ac_slf && slf_wac
    }
}

fn has_linear_term(p: &Presentation, g: usize) -> bool {
    p.relations
        .iter()
        .any(|r| r.terms().any(|(w, _)| w.as_slice() == [g]))
}

/// Decides the classes from generator bidegrees, using an expansion, when
/// available, as evidence for slice dimensions.
pub fn classify_finiteness(p: &Presentation, alg: Option<&AlgebraWindow>) -> FinitenessReport {
    let slice_dims = alg
        .map(|a| {
            let (lo, hi) = a.adams_range();
            (lo..=hi)
                .map(|j| {
                    (
                        j,
                        a.degrees()
                            .filter(|d| d.a == j)
                            .map(|d| a.indices_at(d).len())
                            .sum(),
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    let unknown_wac = |why: &str| Verdict::Unknown {
        reason: format!("{why}; the simple-module and inverse-limit conditions are not decided"),
    };

    if p.generators.is_empty() {
        let r = || Verdict::Holds {
            reason: "augmentation ideal is zero".into(),
        };
        return FinitenessReport {
            strongly_locally_finite: r(),
            adams_connected: r(),
            weakly_adams_connected: r(),
            slice_dims,
        };
    }

    if let Some((g, gen)) = p
        .generators
        .iter()
        .enumerate()
        .find(|(g, gen)| gen.degree.a == 0 && !has_linear_term(p, *g))
    {
        let witness = Bidegree::new(gen.degree.h, 0);
        return FinitenessReport {
            strongly_locally_finite: Verdict::Fails {
                witness,
                reason: format!(
                    "powers of `{}` give infinitely many independent words at Adams degree 0",
                    gen.label
                ),
            },
            adams_connected: Verdict::Fails {
                witness,
                reason: format!("I_0 ≠ 0 (contains `{}`)", p.generators[g].label),
            },
            weakly_adams_connected: unknown_wac("not implied by a weaker class"),
            slice_dims,
        };
    }

    let pos = p.generators.iter().find(|g| g.degree.a > 0);
    let neg = p.generators.iter().find(|g| g.degree.a < 0);
    let zero = p.generators.iter().find(|g| g.degree.a == 0);
    if let Some(z) = zero {
        let why = format!(
            "generator `{}` at Adams degree 0 is cancelled by a linear relation",
            z.label
        );
        return FinitenessReport {
            strongly_locally_finite: Verdict::Unknown {
                reason: why.clone(),
            },
            adams_connected: Verdict::Unknown {
                reason: why.clone(),
            },
            weakly_adams_connected: unknown_wac(&why),
            slice_dims,
        };
    }
    if let (Some(x), Some(y)) = (pos, neg) {
        let free = p.relations.is_empty();
        let slf = if free {
            Verdict::Fails {
                witness: Bidegree::new(x.degree.h * y.degree.a.abs() + y.degree.h * x.degree.a, 0),
                reason: format!(
                    "words in `{}` and `{}` of Adams degree 0 are free of relations and unbounded in number",
                    x.label, y.label
                ),
            }
        } else {
            Verdict::Unknown {
                reason: "Adams degrees of both signs; slice finiteness depends on the relations"
                    .into(),
            }
        };
        return FinitenessReport {
            strongly_locally_finite: slf,
            adams_connected: Verdict::Fails {
                witness: y.degree,
                reason: format!(
                    "`{}` and `{}` lie in Adams degrees of opposite sign",
                    x.label, y.label
                ),
            },
            weakly_adams_connected: unknown_wac("not implied by a weaker class"),
            slice_dims,
        };
    }

    let side = if pos.is_some() {
        "positive"
    } else {
        "negative"
    };
    FinitenessReport {
        strongly_locally_finite: Verdict::Holds {
            reason: "implied by Adams connectivity".into(),
        },
        adams_connected: Verdict::Holds {
            reason: format!(
                "finitely many generators, all of {side} Adams degree: each Adams slice is spanned by finitely many words"
            ),
        },
        weakly_adams_connected: Verdict::Holds {
            reason: "implied by strong local finiteness".into(),
        },
        slice_dims,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expand_presentation;
    use crate::grading::Window;

    #[test]
    fn polynomial_line_is_adams_connected() {
        let mut p = Presentation::new("k[x]");
        p.add_generator("x", 0, 1);
        let alg = expand_presentation(&p, &Window::new(0, 4, -4, 4)).unwrap();
        let r = classify_finiteness(&p, Some(&alg));
        assert!(r.adams_connected.holds());
        assert!(r.strongly_locally_finite.holds());
        assert!(r.weakly_adams_connected.holds());
        assert_eq!(r.slice_dims, vec![(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]);
    }

    #[test]
    fn polynomial_line_at_adams_zero_fails() {
        let mut p = Presentation::new("k[x]0");
        p.add_generator("x", 0, 0);
        let r = classify_finiteness(&p, None);
        match &r.adams_connected {
            Verdict::Fails { witness, .. } => assert_eq!(*witness, Bidegree::new(0, 0)),
            other => panic!("{other:?}"),
        }
        assert!(r.strongly_locally_finite.fails());
        assert_eq!(r.weakly_adams_connected.name(), "unknown");
        assert!(r.implications_hold());
    }

    #[test]
    fn trivial_algebra_is_in_every_class() {
        let r = classify_finiteness(&Presentation::new("k"), None);
        assert!(r.adams_connected.holds());
        assert!(r.strongly_locally_finite.holds());
        assert!(r.weakly_adams_connected.holds());
    }

    #[test]
    fn mixed_signs_are_not_adams_connected() {
        let mut p = Presentation::new("mixed");
        p.add_generator("x", 0, 1);
        p.add_generator("y", 0, -1);
        let r = classify_finiteness(&p, None);
        assert!(r.adams_connected.fails());
        assert!(r.strongly_locally_finite.fails());
        assert!(r.implications_hold());
    }
}
