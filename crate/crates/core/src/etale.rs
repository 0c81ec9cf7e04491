//! Arithmetic in the quadratic algebras F[X]/(X²−a) and the biquadratic
//! étale algebra 𝓔 = F[X,Y]/(X²−a, Y²−d) over F = ℚ, together with the
//! Chinese-remainder splitting of 𝓔 into fields determined by the square
//! classes of a, d, and ad.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::numtheory::{is_square_rat, sqrt_rat, Rat};

/// Element x + y·X of F[X]/(X²−a).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElem {
    pub a: Rat,
    pub x: Rat,
    pub y: Rat,
}

impl QuadElem {
    pub fn new(a: Rat, x: Rat, y: Rat) -> Self {
        QuadElem { a, x, y }
    }

    pub fn from_rat(a: Rat, x: Rat) -> Self {
        QuadElem {
            a,
            x,
            y: Rat::zero(),
        }
    }

    pub fn conj(&self) -> Self {
        QuadElem {
            a: self.a.clone(),
            x: self.x.clone(),
            y: -self.y.clone(),
        }
    }

    pub fn mul(&self, other: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.a, other.a);
        QuadElem {
            a: self.a.clone(),
            x: &self.x * &other.x + &self.a * &self.y * &other.y,
            y: &self.x * &other.y + &self.y * &other.x,
        }
    }

    pub fn scale(&self, t: &Rat) -> QuadElem {
        QuadElem {
            a: self.a.clone(),
            x: &self.x * t,
            y: &self.y * t,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Evaluates x + y·s for a rational square root s of a.
    pub fn eval_at(&self, s: &Rat) -> Rat {
        &self.x + &self.y * s
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.x, self.y, self.a)
    }
}

/// Norm to F: x² − a·y².
pub fn quad_norm(b: &QuadElem) -> Rat {
    &b.x * &b.x - &b.a * &b.y * &b.y
}

/// Element c0 + cX·X + cY·Y + cXY·XY of 𝓔 = F[X,Y]/(X²−a, Y²−d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleElem {
    pub a: Rat,
    pub d: Rat,
    pub c0: Rat,
    pub cx: Rat,
    pub cy: Rat,
    pub cxy: Rat,
}

impl EtaleElem {
    pub fn new(a: Rat, d: Rat, c0: Rat, cx: Rat, cy: Rat, cxy: Rat) -> Self {
        EtaleElem {
            a,
            d,
            c0,
            cx,
            cy,
            cxy,
        }
    }

    pub fn zero(a: Rat, d: Rat) -> Self {
        EtaleElem::new(a, d, Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn one(a: Rat, d: Rat) -> Self {
        EtaleElem::new(a, d, Rat::one(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn from_rat(a: Rat, d: Rat, t: Rat) -> Self {
        EtaleElem::new(a, d, t, Rat::zero(), Rat::zero(), Rat::zero())
    }

    /// Embeds x + y·X from F[X]/(X²−a).
    pub fn from_quad_a(q: &QuadElem, d: Rat) -> Self {
        EtaleElem::new(
            q.a.clone(),
            d,
            q.x.clone(),
            q.y.clone(),
            Rat::zero(),
            Rat::zero(),
        )
    }

    /// Embeds x + y·Y from F[Y]/(Y²−d).
    pub fn from_quad_d(q: &QuadElem, a: Rat) -> Self {
        EtaleElem::new(
            a,
            q.a.clone(),
            q.x.clone(),
            Rat::zero(),
            q.y.clone(),
            Rat::zero(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.cx.is_zero() && self.cy.is_zero() && self.cxy.is_zero()
    }

    pub fn add(&self, q: &EtaleElem) -> EtaleElem {
        EtaleElem::new(
            self.a.clone(),
            self.d.clone(),
            &self.c0 + &q.c0,
            &self.cx + &q.cx,
            &self.cy + &q.cy,
            &self.cxy + &q.cxy,
        )
    }

    pub fn sub(&self, q: &EtaleElem) -> EtaleElem {
        EtaleElem::new(
            self.a.clone(),
            self.d.clone(),
            &self.c0 - &q.c0,
            &self.cx - &q.cx,
            &self.cy - &q.cy,
            &self.cxy - &q.cxy,
        )
    }

    pub fn scale(&self, t: &Rat) -> EtaleElem {
        EtaleElem::new(
            self.a.clone(),
            self.d.clone(),
            &self.c0 * t,
            &self.cx * t,
            &self.cy * t,
            &self.cxy * t,
        )
    }

    /// Applies the ring automorphism X ↦ ex·X, Y ↦ ey·Y (ex, ey ∈ {±1}).
    pub fn conj(&self, ex: bool, ey: bool) -> EtaleElem {
        let sx = if ex { Rat::one() } else { -Rat::one() };
        let sy = if ey { Rat::one() } else { -Rat::one() };
        EtaleElem::new(
            self.a.clone(),
            self.d.clone(),
            self.c0.clone(),
            &self.cx * &sx,
            &self.cy * &sy,
            &self.cxy * &sx * &sy,
        )
    }

    /// Norm to F: the product of the four conjugates, a rational.
    pub fn norm(&self) -> Rat {
        let p = etale_mul(self, &self.conj(false, true));
        let q = etale_mul(&self.conj(true, false), &self.conj(false, false));
        let n = etale_mul(&p, &q);
        debug_assert!(n.cx.is_zero() && n.cy.is_zero() && n.cxy.is_zero());
        n.c0
    }
}

impl fmt::Display for EtaleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*X + {}*Y + {}*XY  (X^2={}, Y^2={})",
            self.c0, self.cx, self.cy, self.cxy, self.a, self.d
        )
    }
}

pub fn etale_mul(p: &EtaleElem, q: &EtaleElem) -> EtaleElem {
    debug_assert_eq!(p.a, q.a);
    debug_assert_eq!(p.d, q.d);
    let a = &p.a;
    let d = &p.d;
    let ad = a * d;
    EtaleElem::new(
        p.a.clone(),
        p.d.clone(),
        &p.c0 * &q.c0 + a * &p.cx * &q.cx + d * &p.cy * &q.cy + &ad * &p.cxy * &q.cxy,
        &p.c0 * &q.cx + &p.cx * &q.c0 + d * (&p.cy * &q.cxy + &p.cxy * &q.cy),
        &p.c0 * &q.cy + &p.cy * &q.c0 + a * (&p.cx * &q.cxy + &p.cxy * &q.cx),
        &p.c0 * &q.cxy + &p.cxy * &q.c0 + &p.cx * &q.cy + &p.cy * &q.cx,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonUnitError {
    /// Description of a component on which the element vanishes.
    pub component: String,
}

impl fmt::Display for NonUnitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "element is not a unit: vanishes on {}", self.component)
    }
}

/// Multiplicative inverse: product of the three nontrivial conjugates over
/// the norm. Fails exactly on non-units and names a vanishing component.
pub fn etale_inv(p: &EtaleElem) -> Result<EtaleElem, NonUnitError> {
    let n = p.norm();
    if n.is_zero() {
        return Err(NonUnitError {
            component: vanishing_component(p),
        });
    }
    let adj = etale_mul(
        &etale_mul(&p.conj(false, true), &p.conj(true, false)),
        &p.conj(false, false),
    );
    Ok(adj.scale(&n.recip()))
}

fn vanishing_component(p: &EtaleElem) -> String {
    if p.is_zero() {
        return String::from("every component (zero element)");
    }
    let split = split_etale(&p.a, &p.d);
    for (label, value) in split.component_values(p) {
        if value.is_zero() {
            return label;
        }
    }
    String::from("an unidentified component")
}

/// How 𝓔 splits as a product of fields, decided by the square classes of
/// a, d, and ad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EtaleSplit {
    /// a, d, ad all nonsquare: 𝓔 is the biquadratic field ℚ(√a, √d).
    Quartic { a: Rat, d: Rat },
    /// a = s²: 𝓔 ≅ F_d × F_d via X ↦ ±s.
    TwoCopiesFd { a: Rat, d: Rat, sqrt_a: Rat },
    /// d = s²: 𝓔 ≅ F_a × F_a via Y ↦ ±s.
    TwoCopiesFa { a: Rat, d: Rat, sqrt_d: Rat },
    /// ad = s² with a, d nonsquare: 𝓔 ≅ F_a × F_a via XY ↦ ±s,
    /// equivalently F_d × F_d; both decompositions are available.
    TwoCopiesViaAd { a: Rat, d: Rat, sqrt_ad: Rat },
    /// a = s², d = t²: 𝓔 ≅ F⁴ via X ↦ ±s, Y ↦ ±t.
    FourCopies { a: Rat, d: Rat, sqrt_a: Rat, sqrt_d: Rat },
}

/// Decides the splitting of F[X,Y]/(X²−a, Y²−d). Square roots are taken
/// positive so component labels are deterministic.
pub fn split_etale(a: &Rat, d: &Rat) -> EtaleSplit {
    debug_assert!(!a.is_zero() && !d.is_zero());
    let sa = is_square_rat(a);
    let sd = is_square_rat(d);
    match (sa, sd) {
        (true, true) => EtaleSplit::FourCopies {
            a: a.clone(),
            d: d.clone(),
            sqrt_a: sqrt_rat(a).expect("square"),
            sqrt_d: sqrt_rat(d).expect("square"),
        },
        (true, false) => EtaleSplit::TwoCopiesFd {
            a: a.clone(),
            d: d.clone(),
            sqrt_a: sqrt_rat(a).expect("square"),
        },
        (false, true) => EtaleSplit::TwoCopiesFa {
            a: a.clone(),
            d: d.clone(),
            sqrt_d: sqrt_rat(d).expect("square"),
        },
        (false, false) => {
            let ad = a * d;
            if is_square_rat(&ad) {
                EtaleSplit::TwoCopiesViaAd {
                    a: a.clone(),
                    d: d.clone(),
                    sqrt_ad: sqrt_rat(&ad).expect("square"),
                }
            } else {
                EtaleSplit::Quartic {
                    a: a.clone(),
                    d: d.clone(),
                }
            }
        }
    }
}

/// A component of the splitting: either the full quartic field, a quadratic
/// field F[T]/(T²−m), or F itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentValue {
    Quartic(EtaleElem),
    Quad(QuadElem),
    Rational(Rat),
}

impl ComponentValue {
    pub fn is_zero(&self) -> bool {
        match self {
            ComponentValue::Quartic(e) => e.is_zero(),
            ComponentValue::Quad(q) => q.is_zero(),
            ComponentValue::Rational(r) => r.is_zero(),
        }
    }

    /// Norm of the component down to F.
    pub fn norm(&self) -> Rat {
        match self {
            ComponentValue::Quartic(e) => e.norm(),
            ComponentValue::Quad(q) => quad_norm(q),
            ComponentValue::Rational(r) => r.clone(),
        }
    }
}

impl EtaleSplit {
    pub fn case_name(&self) -> &'static str {
        match self {
            EtaleSplit::Quartic { .. } => "Quartic",
            EtaleSplit::TwoCopiesFd { .. } => "TwoCopiesFd",
            EtaleSplit::TwoCopiesFa { .. } => "TwoCopiesFa",
            EtaleSplit::TwoCopiesViaAd { .. } => "TwoCopiesViaAd",
            EtaleSplit::FourCopies { .. } => "FourCopies",
        }
    }

    /// Projections of an element to every component, with stable labels.
    /// In the ad-square case the F_a-decomposition is returned (the
    /// F_d-decomposition is available via `via_ad_components_fd`).
    pub fn component_values(&self, p: &EtaleElem) -> Vec<(String, ComponentValue)> {
        match self {
            EtaleSplit::Quartic { .. } => {
                vec![(
                    String::from("the quartic field"),
                    ComponentValue::Quartic(p.clone()),
                )]
            }
            EtaleSplit::TwoCopiesFd { sqrt_a, .. } => [true, false]
                .iter()
                .map(|&plus| {
                    let s = if plus {
                        sqrt_a.clone()
                    } else {
                        -sqrt_a.clone()
                    };
                    let q = QuadElem::new(p.d.clone(), &p.c0 + &p.cx * &s, &p.cy + &p.cxy * &s);
                    (
                        format!("F_d copy at X={}", s),
                        ComponentValue::Quad(q),
                    )
                })
                .collect(),
            EtaleSplit::TwoCopiesFa { sqrt_d, .. } => [true, false]
                .iter()
                .map(|&plus| {
                    let s = if plus {
                        sqrt_d.clone()
                    } else {
                        -sqrt_d.clone()
                    };
                    let q = QuadElem::new(p.a.clone(), &p.c0 + &p.cy * &s, &p.cx + &p.cxy * &s);
                    (
                        format!("F_a copy at Y={}", s),
                        ComponentValue::Quad(q),
                    )
                })
                .collect(),
            EtaleSplit::TwoCopiesViaAd { a, sqrt_ad, .. } => [true, false]
                .iter()
                .map(|&plus| {
                    let s = if plus {
                        sqrt_ad.clone()
                    } else {
                        -sqrt_ad.clone()
                    };
                    // XY = s forces Y = sX/a
                    let q = QuadElem::new(
                        a.clone(),
                        &p.c0 + &p.cxy * &s,
                        &p.cx + &p.cy * &s / a,
                    );
                    (
                        format!("F_a copy at XY={}", s),
                        ComponentValue::Quad(q),
                    )
                })
                .collect(),
            EtaleSplit::FourCopies { sqrt_a, sqrt_d, .. } => {
                // ordering: p1=(+,+), p2=(−,+), p3=(+,−), p4=(−,−)
                let signs = [(true, true), (false, true), (true, false), (false, false)];
                signs
                    .iter()
                    .enumerate()
                    .map(|(i, &(xp, yp))| {
                        let sx = if xp { sqrt_a.clone() } else { -sqrt_a.clone() };
                        let sy = if yp { sqrt_d.clone() } else { -sqrt_d.clone() };
                        let v = &p.c0 + &p.cx * &sx + &p.cy * &sy + &p.cxy * &sx * &sy;
                        (
                            format!("F copy p{} at X={}, Y={}", i + 1, sx, sy),
                            ComponentValue::Rational(v),
                        )
                    })
                    .collect()
            }
        }
    }

    /// The alternative decomposition in the ad-square case: components in
    /// F_d via X = s·Y/d.
    pub fn via_ad_components_fd(&self, p: &EtaleElem) -> Option<Vec<(String, ComponentValue)>> {
        if let EtaleSplit::TwoCopiesViaAd { d, sqrt_ad, .. } = self {
            Some(
                [true, false]
                    .iter()
                    .map(|&plus| {
                        let s = if plus {
                            sqrt_ad.clone()
                        } else {
                            -sqrt_ad.clone()
                        };
                        let q = QuadElem::new(
                            d.clone(),
                            &p.c0 + &p.cxy * &s,
                            &p.cy + &p.cx * &s / d,
                        );
                        (
                            format!("F_d copy at XY={}", s),
                            ComponentValue::Quad(q),
                        )
                    })
                    .collect(),
            )
        } else {
            None
        }
    }
}

/// The four ring automorphisms of 𝓔 (X ↦ ±X, Y ↦ ±Y) as (ex, ey) pairs;
/// apply with `EtaleElem::conj`.
pub fn conj_maps() -> [(bool, bool); 4] {
    [(true, true), (false, true), (true, false), (false, false)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{rat_frac, rat_int};

    #[test]
    fn norms() {
        let b = QuadElem::new(rat_int(11), rat_int(4), rat_int(1));
        assert_eq!(quad_norm(&b), rat_int(5));
        let c = QuadElem::new(rat_int(34), rat_int(6), rat_int(1));
        assert_eq!(quad_norm(&c), rat_int(2));
    }

    #[test]
    fn mul_and_inv() {
        let a = rat_int(11);
        let d = rat_int(13);
        let x = EtaleElem::new(a.clone(), d.clone(), rat_int(0), rat_int(1), rat_int(0), rat_int(0));
        let xx = etale_mul(&x, &x);
        assert_eq!(xx, EtaleElem::from_rat(a.clone(), d.clone(), rat_int(11)));
        let xy = EtaleElem::new(a.clone(), d.clone(), rat_int(0), rat_int(1), rat_int(1), rat_int(0));
        let sq = etale_mul(&xy, &xy);
        // (X+Y)^2 = (a+d) + 2XY
        assert_eq!(
            sq,
            EtaleElem::new(a.clone(), d.clone(), rat_int(24), rat_int(0), rat_int(0), rat_int(2))
        );
        let one = EtaleElem::one(a.clone(), d.clone());
        assert_eq!(etale_inv(&one).unwrap(), one);
        let p = EtaleElem::new(a.clone(), d.clone(), rat_int(3), rat_frac(1, 2), rat_int(-1), rat_int(0));
        let ip = etale_inv(&p).unwrap();
        assert_eq!(etale_mul(&p, &ip), one);
    }

    #[test]
    fn splits() {
        assert_eq!(
            split_etale(&rat_int(11), &rat_int(13)).case_name(),
            "Quartic"
        );
        assert_eq!(
            split_etale(&rat_int(34), &rat_int(34)).case_name(),
            "TwoCopiesViaAd"
        );
        assert_eq!(
            split_etale(&rat_int(9), &rat_int(25)).case_name(),
            "FourCopies"
        );
    }
}
