//! Archimedean symbols.  The biquadratic field has four real embeddings when
//! both radicands are positive and none otherwise; a quadratic field has two
//! when its radicand is positive.  At a real place the Hilbert symbol is -1
//! exactly when both arguments are negative, and complex places are always
//! trivial.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::etale::{EtaleElem, QuadElem};
use crate::numtheory::{rat, Rat};

/// Sign of x + y sqrt(m) for positive m, decided exactly: compare x^2 and
/// m y^2 to see which term dominates.
fn quad_sign(x: &Rat, y: &Rat, m: &Rat) -> i32 {
    if y.is_zero() {
        return if x.is_positive() { 1 } else { -1 };
    }
    if x.is_zero() {
        return if y.is_positive() { 1 } else { -1 };
    }
    let lead = x * x - m * y * y;
    // x + y sqrt(m) and x - y sqrt(m) multiply to lead; the larger magnitude
    // term decides the sign of each factor.
    if x.is_positive() && y.is_positive() {
        1
    } else if x.is_negative() && y.is_negative() {
        -1
    } else if lead.is_positive() {
        // Same sign as x, which dominates.
        if x.is_positive() {
            1
        } else {
            -1
        }
    } else {
        // sqrt(m) term dominates.
        if y.is_positive() {
            1
        } else {
            -1
        }
    }
}

/// Signs of a nonzero element of Q(sqrt(a), sqrt(d)) under the real
/// embeddings, ordered by the sign choices (+,+), (+,-), (-,+), (-,-) for
/// (sqrt(a), sqrt(d)).  Empty when the field has no real embedding.
pub fn etale_embedding_signs(z: &EtaleElem) -> Vec<i32> {
    if !z.a.is_positive() || !z.d.is_positive() {
        return vec![];
    }
    let mut out = Vec::with_capacity(4);
    for sa in [1i64, -1] {
        for sd in [1i64, -1] {
            // z = (c0 + cy sd sqrt(d)) + (cx + cxy sd sqrt(d)) * sa sqrt(a),
            // an element x + y sqrt(a) of Q(sqrt(a), sqrt(d)) with x, y in
            // Q(sqrt(d)).  Determine its sign through nested comparisons by
            // squaring out one radical at a time: compute the sign of
            // x^2 - a y^2 and of x, y in Q(sqrt(d)) exactly.
            let x0 = &z.c0;
            let x1 = &(&z.cy * rat(sd));
            let y0 = &z.cx;
            let y1 = &(&z.cxy * rat(sd));
            let sign_x = if x0.is_zero() && x1.is_zero() {
                0
            } else {
                quad_sign(x0, x1, &z.d)
            };
            let sign_y = if y0.is_zero() && y1.is_zero() {
                0
            } else {
                quad_sign(y0, y1, &z.d) * (sa as i32)
            };
            let s = match (sign_x, sign_y) {
                (0, sy) => sy,
                (sx, 0) => sx,
                (1, 1) => 1,
                (-1, -1) => -1,
                _ => {
                    // Mixed signs: compare |x| and |y sqrt(a)| via the sign
                    // of x^2 - a y^2, itself an element of Q(sqrt(d)).
                    let t0 = x0 * x0 + x1 * x1 * &z.d
                        - &z.a * (y0 * y0 + y1 * y1 * &z.d);
                    let t1 = rat(2) * x0 * x1 - rat(2) * &z.a * y0 * y1;
                    let dom = if t0.is_zero() && t1.is_zero() {
                        0
                    } else {
                        quad_sign(&t0, &t1, &z.d)
                    };
                    if dom == 0 {
                        // x^2 = a y^2 with x, y of opposite sign means
                        // x + y sqrt(a) = 0, excluded for nonzero z.
                        0
                    } else if dom > 0 {
                        sign_x
                    } else {
                        sign_y
                    }
                }
            };
            assert!(s != 0, "sign of a nonzero element");
            out.push(s);
        }
    }
    out
}

/// Real symbols (x, y)_w over the real places of the biquadratic field, in
/// embedding order.  Empty when the field is totally complex.
pub fn etale_real_symbols(x: &EtaleElem, y: &EtaleElem) -> Vec<i32> {
    let sx = etale_embedding_signs(x);
    let sy = etale_embedding_signs(y);
    sx.iter()
        .zip(sy.iter())
        .map(|(a, b)| if *a < 0 && *b < 0 { -1 } else { 1 })
        .collect()
}

/// Real symbols over the real places of a quadratic field, ordered by the
/// sign of sqrt(m).  Empty when m is negative.
pub fn quad_real_symbols(x: &QuadElem, y: &QuadElem) -> Vec<i32> {
    if !x.a.is_positive() {
        return vec![];
    }
    let mut out = Vec::with_capacity(2);
    for s in [1i64, -1] {
        let sx = quad_sign(&x.x, &(&x.y * rat(s)), &x.a);
        let sy = quad_sign(&y.x, &(&y.y * rat(s)), &y.a);
        out.push(if sx < 0 && sy < 0 { -1 } else { 1 });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::rat_int;

    #[test]
    fn signs_follow_dominant_term() {
        // 4 + sqrt(11) is positive under both embeddings; 1 - sqrt(11) flips.
        let b = QuadElem::new(rat(11), rat_int(4), rat_int(1));
        let c = QuadElem::new(rat(11), rat_int(1), rat_int(-1));
        assert_eq!(quad_real_symbols(&b, &b), vec![1, 1]);
        let s = quad_real_symbols(&c, &c);
        // 1 - sqrt(11) < 0 under the + embedding, > 0 under the - embedding.
        assert_eq!(s, vec![-1, 1]);
    }

    #[test]
    fn quartic_embedding_signs() {
        let z = EtaleElem::new(
            rat(11),
            rat(13),
            rat_int(1),
            rat_int(1),
            rat_int(0),
            rat_int(0),
        );
        // 1 + sqrt(11): positive when sqrt(11) has + sign.
        assert_eq!(etale_embedding_signs(&z), vec![1, 1, -1, -1]);
        let w = EtaleElem::new(
            rat(11),
            rat(13),
            rat_int(0),
            rat_int(1),
            rat_int(1),
            rat_int(0),
        );
        // sqrt(11) + sqrt(13): sign is the sign of whichever radical wins.
        assert_eq!(etale_embedding_signs(&w), vec![1, -1, 1, -1]);
    }

    #[test]
    fn complex_fields_have_no_real_places() {
        let z = EtaleElem::new(
            rat(-7),
            rat(13),
            rat_int(1),
            rat_int(2),
            rat_int(3),
            rat_int(4),
        );
        assert!(etale_embedding_signs(&z).is_empty());
    }
}
