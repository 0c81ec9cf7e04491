//! Place models at odd primes for quadratic fields and for the biquadratic
//! field Q(sqrt(a), sqrt(d)).
//!
//! Every completion at an odd prime is tamely ramified, so a quadratic Hilbert
//! symbol there is determined by two invariants of each argument: its
//! valuation and the quadratic-residue character of its reduced unit part.
//! Each place model below computes that pair exactly from rational
//! coordinates, using Hensel-lifted square roots where the prime splits and
//! norm forms where it stays inert.  Characters over the residue field with
//! p^2 elements reduce to Legendre symbols of norms, since the quadratic
//! character of F_{p^2} is the composite of the norm with the character of
//! F_p.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::etale::{EtaleElem, QuadElem};
use crate::numtheory::{
    hensel_sqrt, int, legendre, mod_inverse, mod_n, rat, val_unit, Int, Rat,
};

/// Tame Hilbert symbol from the invariant pairs of the two arguments.
///
/// `chi_m1` is the value of the residue character at -1, which controls the
/// sign contributed by the product of the two valuations.
pub fn tame_symbol(vx: i64, cx: i32, vy: i64, cy: i32, chi_m1: i32) -> i32 {
    let mut s = 1i32;
    if (vx & 1) == 1 && (vy & 1) == 1 && chi_m1 == -1 {
        s = -s;
    }
    if (vy & 1) == 1 && cx == -1 {
        s = -s;
    }
    if (vx & 1) == 1 && cy == -1 {
        s = -s;
    }
    s
}

/// Precision (in powers of p) for Hensel-lifted roots inside place models.
const ROOT_PREC: u32 = 64;

/// Residue character of the unit part of a nonzero rational at p.
fn unit_chi(u: &Rat, p: &Int) -> i32 {
    let num = mod_n(u.numer(), p);
    let den = mod_n(u.denom(), p);
    let r = mod_n(&(num * mod_inverse(&den, p).expect("unit denominator")), p);
    legendre(&r, p)
}

/// Valuation and residue character of a nonzero rational at p.
fn rat_invariants(x: &Rat, p: &Int) -> (i64, i32) {
    let (v, u) = val_unit(x, p);
    (v, unit_chi(&u, p))
}

/// Valuation and residue character at p of a nonzero element of the inert
/// quadratic completion with residue ring F_p[T]/(T^2 - n), presented by its
/// rational coordinates (x0, x1) with value x0 + x1 T.
fn inert_invariants(x0: &Rat, x1: &Rat, n: &Int, p: &Int) -> (i64, i32) {
    let norm = x0 * x0 - rat(n.clone()) * x1 * x1;
    debug_assert!(!norm.is_zero(), "inert place applied to a zero value");
    let (vn, un) = val_unit(&norm, p);
    debug_assert!(vn % 2 == 0, "inert norm valuation must be even");
    (vn / 2, unit_chi(&un, p))
}

/// Valuation and residue character in a ramified quadratic completion with
/// uniformizer pi, pi^2 = p * m0, of the element e0 + e1 pi.  `chi_m0` is the
/// Legendre symbol of m0, which enters the residue once per division by pi^2.
fn ramified_invariants(e0: &Rat, e1: &Rat, m0_chi: i32, p: &Int) -> (i64, i32) {
    let inv0 = if e0.is_zero() {
        None
    } else {
        Some(rat_invariants(e0, p))
    };
    let inv1 = if e1.is_zero() {
        None
    } else {
        Some(rat_invariants(e1, p))
    };
    let (v, chi, k) = match (inv0, inv1) {
        (Some((v0, c0)), Some((v1, c1))) => {
            if 2 * v0 <= 2 * v1 + 1 {
                (2 * v0, c0, v0)
            } else {
                (2 * v1 + 1, c1, v1)
            }
        }
        (Some((v0, c0)), None) => (2 * v0, c0, v0),
        (None, Some((v1, c1))) => (2 * v1 + 1, c1, v1),
        (None, None) => panic!("ramified place applied to a zero value"),
    };
    let chi = if m0_chi == -1 && (k & 1) == 1 { -chi } else { chi };
    (v, chi)
}

/// Like `ramified_invariants` but over the unramified quadratic residue
/// extension: the components e0, e1 live in the inert completion with
/// parameter n, and the residue character factors through norms, so the
/// correction by powers of m0 disappears (it enters the norm as a square).
fn ramified_inert_invariants(
    e0: (&Rat, &Rat),
    e1: (&Rat, &Rat),
    n: &Int,
    p: &Int,
) -> (i64, i32) {
    let zero0 = e0.0.is_zero() && e0.1.is_zero();
    let zero1 = e1.0.is_zero() && e1.1.is_zero();
    let inv0 = if zero0 {
        None
    } else {
        Some(inert_invariants(e0.0, e0.1, n, p))
    };
    let inv1 = if zero1 {
        None
    } else {
        Some(inert_invariants(e1.0, e1.1, n, p))
    };
    match (inv0, inv1) {
        (Some((v0, c0)), Some((v1, c1))) => {
            if 2 * v0 <= 2 * v1 + 1 {
                (2 * v0, c0)
            } else {
                (2 * v1 + 1, c1)
            }
        }
        (Some((v0, c0)), None) => (2 * v0, c0),
        (None, Some((v1, c1))) => (2 * v1 + 1, c1),
        (None, None) => panic!("ramified place applied to a zero value"),
    }
}

/// A place of a quadratic field above an odd prime.
#[derive(Debug, Clone)]
pub struct QuadPlace {
    p: Int,
    /// Character value at -1 for the residue field of this place.
    pub chi_m1: i32,
    model: QuadModel,
}

#[derive(Debug, Clone)]
enum QuadModel {
    /// p splits: sqrt(m) maps to the lifted root times the recorded sign.
    Split { root: Int, sign: i8 },
    /// p is inert: residue field F_{p^2}, invariants through the norm form.
    Inert { n: Int },
    /// p ramifies in Q(sqrt(p * m0)).
    Ramified { m0_chi: i32 },
}

impl QuadPlace {
    /// Valuation and residue character of a nonzero field element.
    pub fn eval(&self, z: &QuadElem) -> (i64, i32) {
        match &self.model {
            QuadModel::Split { root, sign } => {
                let r = if *sign >= 0 { root.clone() } else { -root.clone() };
                let value = &z.x + &z.y * rat(r);
                assert!(!value.is_zero(), "insufficient root precision");
                let (v, chi) = rat_invariants(&value, &self.p);
                assert!(
                    v < (ROOT_PREC as i64) - 4,
                    "valuation too close to root precision"
                );
                (v, chi)
            }
            QuadModel::Inert { n } => inert_invariants(&z.x, &z.y, n, &self.p),
            QuadModel::Ramified { m0_chi } => {
                ramified_invariants(&z.x, &z.y, *m0_chi, &self.p)
            }
        }
    }

    /// Hilbert symbol of two nonzero field elements at this place.
    pub fn symbol(&self, x: &QuadElem, y: &QuadElem) -> i32 {
        let (vx, cx) = self.eval(x);
        let (vy, cy) = self.eval(y);
        tame_symbol(vx, cx, vy, cy, self.chi_m1)
    }
}

/// Places of Q(sqrt(m)) above the odd prime p.  m must be a nonsquare integer
/// with v_p(m) at most 1.
pub fn quad_odd_places(m: &Int, p: &Int) -> Vec<QuadPlace> {
    assert!(p.is_odd() && p > &int(2), "odd prime required");
    let chi_m1 = legendre(&(p - 1), p);
    let (vm, m0) = val_unit(&rat(m.clone()), p);
    let m0 = m0.to_integer();
    assert!(vm == 0 || vm == 1, "parameter must be p-squarefree");
    if vm == 1 {
        return vec![QuadPlace {
            p: p.clone(),
            chi_m1,
            model: QuadModel::Ramified {
                m0_chi: legendre(&m0, p),
            },
        }];
    }
    match legendre(&m0, p) {
        1 => {
            let root = hensel_sqrt(&m0, p, ROOT_PREC).expect("residue is a square");
            [1i8, -1]
                .iter()
                .map(|s| QuadPlace {
                    p: p.clone(),
                    chi_m1,
                    model: QuadModel::Split {
                        root: root.clone(),
                        sign: *s,
                    },
                })
                .collect()
        }
        -1 => vec![QuadPlace {
            p: p.clone(),
            // -1 is always a square in F_{p^2} since (p^2 - 1)/2 is even.
            chi_m1: 1,
            model: QuadModel::Inert { n: m.clone() },
        }],
        _ => panic!("parameter shares a factor with p twice"),
    }
}

/// A place of the biquadratic field Q(sqrt(a), sqrt(d)) above an odd prime.
#[derive(Debug, Clone)]
pub struct EPlace {
    p: Int,
    a: Int,
    d: Int,
    /// Character value at -1 for the residue field of this place.
    pub chi_m1: i32,
    model: EModel,
}

#[derive(Debug, Clone)]
enum EModel {
    /// Both radicands are squares at p: evaluation lands in Q_p.
    Rational { ra: Int, rd: Int, sa: i8, sd: i8 },
    /// a is a square at p, d is not: residue extension with T^2 = d.
    InertD { ra: Int, sa: i8 },
    /// d is a square at p, a is not: residue extension with T^2 = a.
    InertA { rd: Int, sd: i8 },
    /// Neither is a square but their ratio is: sqrt(d) = s * sqrt(a) with the
    /// lifted root s, and the completion is the inert one with T^2 = a.
    InertRatio { s: Int, sign: i8 },
    /// v_p(a) = 1, d a square at p: ramified quadratic completion, pi^2 = a.
    RamA { rd: Int, sd: i8, m0_chi: i32 },
    /// v_p(d) = 1, a a square at p: ramified quadratic completion, pi^2 = d.
    RamD { ra: Int, sa: i8, m0_chi: i32 },
    /// v_p(a) = 1, d a nonsquare unit: quartic completion, unramified residue
    /// extension T^2 = d below the ramified step pi^2 = a.
    RamAInert,
    /// v_p(d) = 1, a a nonsquare unit: mirror image of RamAInert.
    RamDInert,
    /// v_p(a) = v_p(d) = 1 and a0 d0 is a residue: sqrt(d) = s pi / a0 over
    /// Q_p with pi^2 = a; two such places from the sign of s.
    RamBoth { s: Int, sign: i8, a0: Int, m0_chi: i32 },
    /// v_p(a) = v_p(d) = 1 and a0 d0 is a nonresidue: quartic completion with
    /// residue extension T^2 = a0 d0.
    RamBothInert { t: Int, a0: Int },
}

impl EPlace {
    /// Valuation and residue character of a nonzero element of the field.
    pub fn eval(&self, z: &EtaleElem) -> (i64, i32) {
        let p = &self.p;
        match &self.model {
            EModel::Rational { ra, rd, sa, sd } => {
                let ra = if *sa >= 0 { ra.clone() } else { -ra.clone() };
                let rd = if *sd >= 0 { rd.clone() } else { -rd.clone() };
                let value = &z.c0
                    + &z.cx * rat(ra.clone())
                    + &z.cy * rat(rd.clone())
                    + &z.cxy * rat(&ra * &rd);
                assert!(!value.is_zero(), "insufficient root precision");
                let (v, chi) = rat_invariants(&value, p);
                assert!(v < (ROOT_PREC as i64) - 4, "valuation near precision");
                (v, chi)
            }
            EModel::InertD { ra, sa } => {
                let r = if *sa >= 0 { ra.clone() } else { -ra.clone() };
                let e0 = &z.c0 + &z.cx * rat(r.clone());
                let e1 = &z.cy + &z.cxy * rat(r);
                inert_invariants(&e0, &e1, &self.d, p)
            }
            EModel::InertA { rd, sd } => {
                let r = if *sd >= 0 { rd.clone() } else { -rd.clone() };
                let e0 = &z.c0 + &z.cy * rat(r.clone());
                let e1 = &z.cx + &z.cxy * rat(r);
                inert_invariants(&e0, &e1, &self.a, p)
            }
            EModel::InertRatio { s, sign } => {
                let s = if *sign >= 0 { s.clone() } else { -s.clone() };
                let y0 = &z.c0 + &z.cxy * rat(&s * &self.a);
                let y1 = &z.cx + &z.cy * rat(s);
                inert_invariants(&y0, &y1, &self.a, p)
            }
            EModel::RamA { rd, sd, m0_chi } => {
                let r = if *sd >= 0 { rd.clone() } else { -rd.clone() };
                let e0 = &z.c0 + &z.cy * rat(r.clone());
                let e1 = &z.cx + &z.cxy * rat(r);
                ramified_invariants(&e0, &e1, *m0_chi, p)
            }
            EModel::RamD { ra, sa, m0_chi } => {
                let r = if *sa >= 0 { ra.clone() } else { -ra.clone() };
                let e0 = &z.c0 + &z.cx * rat(r.clone());
                let e1 = &z.cy + &z.cxy * rat(r);
                ramified_invariants(&e0, &e1, *m0_chi, p)
            }
            EModel::RamAInert => {
                ramified_inert_invariants((&z.c0, &z.cy), (&z.cx, &z.cxy), &self.d, p)
            }
            EModel::RamDInert => {
                ramified_inert_invariants((&z.c0, &z.cx), (&z.cy, &z.cxy), &self.a, p)
            }
            EModel::RamBoth { s, sign, a0, m0_chi } => {
                let s = if *sign >= 0 { s.clone() } else { -s.clone() };
                let e0 = &z.c0 + &z.cxy * rat(&s * p);
                let e1 = &z.cx + &z.cy * rat(s) / rat(a0.clone());
                ramified_invariants(&e0, &e1, *m0_chi, p)
            }
            EModel::RamBothInert { t, a0 } => {
                let e0b = &z.cxy * rat(p.clone());
                let e1b = &z.cy / rat(a0.clone());
                ramified_inert_invariants((&z.c0, &e0b), (&z.cx, &e1b), t, p)
            }
        }
    }

    /// Hilbert symbol of two nonzero field elements at this place.
    pub fn symbol(&self, x: &EtaleElem, y: &EtaleElem) -> i32 {
        let (vx, cx) = self.eval(x);
        let (vy, cy) = self.eval(y);
        tame_symbol(vx, cx, vy, cy, self.chi_m1)
    }
}

/// Places of Q(sqrt(a), sqrt(d)) above the odd prime p.  Requires a, d, and
/// a*d to be nonsquares (the quartic field case) with v_p at most 1 in each
/// radicand.
pub fn etale_odd_places(a: &Int, d: &Int, p: &Int) -> Vec<EPlace> {
    assert!(p.is_odd() && p > &int(2), "odd prime required");
    let leg_m1 = legendre(&(p - 1), p);
    let (va, a0) = val_unit(&rat(a.clone()), p);
    let (vd, d0) = val_unit(&rat(d.clone()), p);
    let a0 = a0.to_integer();
    let d0 = d0.to_integer();
    assert!((0..=1).contains(&va) && (0..=1).contains(&vd), "radicands must be p-squarefree");
    let la = if va == 0 { legendre(&a0, p) } else { 0 };
    let ld = if vd == 0 { legendre(&d0, p) } else { 0 };

    let place = |chi_m1: i32, model: EModel| EPlace {
        p: p.clone(),
        a: a.clone(),
        d: d.clone(),
        chi_m1,
        model,
    };

    match (va, vd) {
        (0, 0) => match (la, ld) {
            (1, 1) => {
                let ra = hensel_sqrt(&a0, p, ROOT_PREC).expect("square residue");
                let rd = hensel_sqrt(&d0, p, ROOT_PREC).expect("square residue");
                let mut out = Vec::new();
                for sa in [1i8, -1] {
                    for sd in [1i8, -1] {
                        out.push(place(
                            leg_m1,
                            EModel::Rational {
                                ra: ra.clone(),
                                rd: rd.clone(),
                                sa,
                                sd,
                            },
                        ));
                    }
                }
                out
            }
            (1, -1) => {
                let ra = hensel_sqrt(&a0, p, ROOT_PREC).expect("square residue");
                [1i8, -1]
                    .iter()
                    .map(|sa| place(1, EModel::InertD { ra: ra.clone(), sa: *sa }))
                    .collect()
            }
            (-1, 1) => {
                let rd = hensel_sqrt(&d0, p, ROOT_PREC).expect("square residue");
                [1i8, -1]
                    .iter()
                    .map(|sd| place(1, EModel::InertA { rd: rd.clone(), sd: *sd }))
                    .collect()
            }
            (-1, -1) => {
                let ratio = mod_n(
                    &(&d0 * mod_inverse(&mod_n(&a0, p), p).expect("unit")),
                    p,
                );
                let s = hensel_sqrt(&ratio, p, ROOT_PREC).expect("ratio is a residue");
                [1i8, -1]
                    .iter()
                    .map(|sign| place(1, EModel::InertRatio { s: s.clone(), sign: *sign }))
                    .collect()
            }
            _ => unreachable!("unit radicands have nonzero Legendre symbols"),
        },
        (1, 0) => {
            if ld == 1 {
                let rd = hensel_sqrt(&d0, p, ROOT_PREC).expect("square residue");
                let m0_chi = legendre(&a0, p);
                [1i8, -1]
                    .iter()
                    .map(|sd| place(leg_m1, EModel::RamA { rd: rd.clone(), sd: *sd, m0_chi }))
                    .collect()
            } else {
                vec![place(1, EModel::RamAInert)]
            }
        }
        (0, 1) => {
            if la == 1 {
                let ra = hensel_sqrt(&a0, p, ROOT_PREC).expect("square residue");
                let m0_chi = legendre(&d0, p);
                [1i8, -1]
                    .iter()
                    .map(|sa| place(leg_m1, EModel::RamD { ra: ra.clone(), sa: *sa, m0_chi }))
                    .collect()
            } else {
                vec![place(1, EModel::RamDInert)]
            }
        }
        (1, 1) => {
            let t = mod_n(&(&a0 * &d0), p);
            if legendre(&t, p) == 1 {
                let s = hensel_sqrt(&t, p, ROOT_PREC).expect("product is a residue");
                let m0_chi = legendre(&a0, p);
                [1i8, -1]
                    .iter()
                    .map(|sign| {
                        place(
                            leg_m1,
                            EModel::RamBoth {
                                s: s.clone(),
                                sign: *sign,
                                a0: a0.clone(),
                                m0_chi,
                            },
                        )
                    })
                    .collect()
            } else {
                vec![place(
                    1,
                    EModel::RamBothInert {
                        t: (&a0 * &d0),
                        a0: a0.clone(),
                    },
                )]
            }
        }
        _ => unreachable!("valuations restricted above"),
    }
}

/// The odd primes at which a pair of field elements can have a nontrivial
/// symbol: primes dividing the radicands or either norm, plus any prime at
/// which some coordinate fails to be integral.
pub fn relevant_odd_primes(a: &Int, d: &Int, items: &[&EtaleElem]) -> Vec<Int> {
    use crate::numtheory::factor;
    let mut acc = Int::one();
    acc *= a;
    acc *= d;
    for z in items {
        let n = z.norm();
        if !n.is_zero() {
            acc *= n.numer() * n.denom();
        }
        for c in [&z.c0, &z.cx, &z.cy, &z.cxy] {
            acc *= c.denom();
        }
    }
    let f = factor(&acc.abs()).expect("norm factoring");
    f.factors
        .iter()
        .map(|(q, _)| q.clone())
        .filter(|q| q.is_odd() && *q > int(1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etale::quad_norm;
    use crate::numtheory::rat_int;
    use crate::rng::Xoshiro256;

    fn random_elem(rng: &mut Xoshiro256) -> EtaleElem {
        loop {
            let c: Vec<Rat> = (0..4).map(|_| rat_int(rng.range_i64(-9, 10))).collect();
            let z = EtaleElem::new(
                rat(11),
                rat(13),
                c[0].clone(),
                c[1].clone(),
                c[2].clone(),
                c[3].clone(),
            );
            if !z.norm().is_zero() {
                return z;
            }
        }
    }

    #[test]
    fn eval_is_multiplicative() {
        let a = int(11);
        let d = int(13);
        let mut rng = Xoshiro256::new(7);
        for p in [3i64, 5, 7, 11, 13, 79] {
            let places = etale_odd_places(&a, &d, &int(p));
            for _ in 0..25 {
                let z1 = random_elem(&mut rng);
                let z2 = random_elem(&mut rng);
                let z12 = crate::etale::etale_mul(&z1, &z2);
                for w in &places {
                    let (v1, c1) = w.eval(&z1);
                    let (v2, c2) = w.eval(&z2);
                    let (v12, c12) = w.eval(&z12);
                    assert_eq!(v12, v1 + v2, "valuation additive at p={p}");
                    assert_eq!(c12, c1 * c2, "character multiplicative at p={p}");
                }
            }
        }
    }

    #[test]
    fn place_counts_match_splitting() {
        // 5 is inert in Q(sqrt(13)) and splits in Q(sqrt(11)): two places.
        assert_eq!(etale_odd_places(&int(11), &int(13), &int(5)).len(), 2);
        // 7 splits in neither but 11*13 = 143 = 3 mod 7 is a nonresidue;
        // the ratio 13/11 is a residue mod 7 exactly when both are or are not.
        let n7 = etale_odd_places(&int(11), &int(13), &int(7)).len();
        assert!(n7 == 1 || n7 == 2);
        // 11 ramifies in Q(sqrt(11)) and 13 is a nonresidue mod 11, so the
        // completion is a single quartic field; same shape at 13.
        assert_eq!(etale_odd_places(&int(11), &int(13), &int(11)).len(), 1);
        assert_eq!(etale_odd_places(&int(11), &int(13), &int(13)).len(), 1);
    }

    #[test]
    fn quad_norm_and_place_agree() {
        // Product of valuations over all places above p equals v_p of the norm.
        let m = int(11);
        let mut rng = Xoshiro256::new(5);
        for p in [3i64, 5, 7, 11, 23] {
            let places = quad_odd_places(&m, &int(p));
            for _ in 0..20 {
                let z = QuadElem::new(
                    rat(m.clone()),
                    rat_int(rng.range_i64(-9, 10)),
                    rat_int(rng.range_i64(-9, 10)),
                );
                let n = quad_norm(&z);
                if n.is_zero() {
                    continue;
                }
                let (vn, _) = val_unit(&n, &int(p));
                let total: i64 = places
                    .iter()
                    .map(|w| {
                        let (v, _) = w.eval(&z);
                        match w.model {
                            QuadModel::Inert { .. } => 2 * v,
                            _ => v,
                        }
                    })
                    .sum();
                assert_eq!(total, vn, "residue degrees weight valuations at p={p}");
            }
        }
    }
}
