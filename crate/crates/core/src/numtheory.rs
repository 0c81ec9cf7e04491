//! Exact integer and rational arithmetic: factorization, square classes,
//! Legendre symbols, Hilbert symbols over every completion of ℚ, and
//! quaternion ramification sets.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat<T: Into<Int>>(n: T) -> Rat {
    Rat::from_integer(n.into())
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Signed prime factorization with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(Int, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back together.
    pub fn reassemble(&self) -> Int {
        let mut out = Int::from(self.sign as i64);
        for (p, e) in &self.factors {
            out *= p.pow(*e);
        }
        out
    }

    pub fn exponent_of(&self, p: &Int) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// The primes with odd exponent, i.e. the support of the square class.
    pub fn odd_support(&self) -> Vec<Int> {
        self.factors
            .iter()
            .filter(|(_, e)| e % 2 == 1)
            .map(|(p, _)| p.clone())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorError {
    Zero,
    TooLarge,
}

impl fmt::Display for FactorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorError::Zero => write!(f, "cannot factor zero"),
            FactorError::TooLarge => write!(f, "input exceeds the factorization size limit"),
        }
    }
}

const TRIAL_BOUND: u64 = 20_000;
/// Default size limit: 96 bits of magnitude.
const FACTOR_BIT_LIMIT: u64 = 96;

/// Factors a nonzero integer of at most 96 bits.
pub fn factor(n: &Int) -> Result<Factorization, FactorError> {
    factor_with_bit_limit(n, FACTOR_BIT_LIMIT)
}

pub fn factor_with_bit_limit(n: &Int, bit_limit: u64) -> Result<Factorization, FactorError> {
    if n.is_zero() {
        return Err(FactorError::Zero);
    }
    if n.magnitude().bits() > bit_limit {
        return Err(FactorError::TooLarge);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut out: Vec<(Int, u32)> = Vec::new();
    let push = |p: BigUint, e: u32, out: &mut Vec<(Int, u32)>| {
        out.push((Int::from(p), e));
    };

    // trial division
    let mut d: u64 = 2;
    while d <= TRIAL_BOUND {
        let db = BigUint::from(d);
        if &db * &db > m {
            break;
        }
        let mut e = 0u32;
        while (&m % &db).is_zero() {
            m /= &db;
            e += 1;
        }
        if e > 0 {
            push(db, e, &mut out);
        }
        d += if d == 2 { 1 } else { 2 };
    }

    // remaining cofactor: split recursively with Pollard rho
    let mut stack: Vec<BigUint> = Vec::new();
    if !m.is_one() {
        stack.push(m);
    }
    let mut found: Vec<BigUint> = Vec::new();
    while let Some(c) = stack.pop() {
        if is_prime_uint(&c) {
            found.push(c);
            continue;
        }
        let f = pollard_rho(&c);
        let g = &c / &f;
        stack.push(f);
        stack.push(g);
    }
    found.sort();
    let mut i = 0;
    while i < found.len() {
        let mut j = i;
        while j < found.len() && found[j] == found[i] {
            j += 1;
        }
        push(found[i].clone(), (j - i) as u32, &mut out);
        i = j;
    }

    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { sign, factors: out })
}

/// Deterministic primality for u64-sized inputs, Baillie–PSW above that.
pub fn is_prime(n: &Int) -> bool {
    if n.is_negative() || n.is_zero() {
        return false;
    }
    is_prime_uint(n.magnitude())
}

fn is_prime_uint(n: &BigUint) -> bool {
    let two = BigUint::from(2u8);
    if n < &two {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let s = BigUint::from(small);
        if n == &s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    // Miller–Rabin with a base set deterministic below 2^64.
    let nm1 = n - 1u8;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let witnesses: &[u64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in witnesses {
        let a = BigUint::from(w) % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        let mut composite = true;
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                composite = false;
                break;
            }
        }
        if composite {
            return false;
        }
    }
    if n.bits() <= 64 {
        return true;
    }
    strong_lucas_prp(n)
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
fn strong_lucas_prp(n: &BigUint) -> bool {
    let ni = Int::from(n.clone());
    // find D = 5, -7, 9, -11, ... with jacobi(D, n) = -1
    let mut d = Int::from(5);
    loop {
        let j = jacobi(&d, &ni);
        if j == 0 {
            // A shared factor with a small D means n is composite (n is far
            // larger than any D reached by the search).
            return false;
        }
        if j == -1 {
            break;
        }
        d = if d.is_positive() {
            -(d + Int::from(2))
        } else {
            -(d - Int::from(2))
        };
        if d.magnitude().to_u64() == Some(33) {
            // A long D search suggests n is a perfect square, which has no
            // D with Jacobi symbol -1; settle it exactly.
            let r = n.sqrt();
            if &(&r * &r) == n {
                return false;
            }
        }
    }
    let p = Int::one();
    let q = (Int::one() - &d) / Int::from(4);
    // strong test on n+1 = 2^s * t
    let np1 = n + 1u8;
    let s = np1.trailing_zeros().unwrap_or(0);
    let t = &np1 >> s;
    let (u, mut v, mut qk) = lucas_uv(&t, &p, &q, &ni);
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        // V_{2k} = V_k^2 - 2 Q^k, Q^{2k} = (Q^k)^2
        v = mod_n(&(&v * &v - Int::from(2) * &qk), &ni);
        qk = mod_n(&(&qk * &qk), &ni);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Lucas sequences U_k, V_k mod n by binary ladder; returns (U_k, V_k, Q^k mod n).
fn lucas_uv(k: &BigUint, p: &Int, q: &Int, n: &Int) -> (Int, Int, Int) {
    let mut u = Int::one();
    let mut v = p.clone();
    let mut qk = q.clone();
    let d = p * p - Int::from(4) * q;
    let bits = k.bits();
    let inv2 = mod_inverse(&Int::from(2), n).expect("n odd");
    for i in (0..bits - 1).rev() {
        // double
        let u2 = mod_n(&(&u * &v), n);
        let v2 = mod_n(&(&v * &v - Int::from(2) * &qk), n);
        let q2 = mod_n(&(&qk * &qk), n);
        u = u2;
        v = v2;
        qk = q2;
        if k.bit(i) {
            // add one: U_{k+1} = (P U + V)/2, V_{k+1} = (D U + P V)/2
            let un = mod_n(&((p * &u + &v) * &inv2), n);
            let vn = mod_n(&((&d * &u + p * &v) * &inv2), n);
            u = un;
            v = vn;
            qk = mod_n(&(&qk * q), n);
        }
    }
    (u, v, qk)
}

pub fn mod_n(x: &Int, n: &Int) -> Int {
    let r = x % n;
    if r.is_negative() {
        r + n
    } else {
        r
    }
}

fn pollard_rho(n: &BigUint) -> BigUint {
    // Brent's cycle-finding variant; n must be composite and odd here.
    let ni = Int::from(n.clone());
    let mut c = Int::one();
    loop {
        let mut x = Int::from(2);
        let mut y = Int::from(2);
        let mut d = Int::one();
        let f = |v: &Int| mod_n(&(v * v + &c), &ni);
        let mut count = 0u64;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(&ni);
            count += 1;
            if count > 1_000_000 {
                break;
            }
        }
        if !d.is_one() && d != ni {
            return d.magnitude().clone();
        }
        c += 1;
    }
}

/// Canonical representative of a nonzero rational modulo squares:
/// a squarefree signed integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClass {
    pub rep: Int,
}

impl SquareClass {
    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }
}

/// Squarefree kernel of a nonzero rational: the unique squarefree integer r
/// with q = r·(rational square).
pub fn square_class(q: &Rat) -> Result<SquareClass, FactorError> {
    if q.is_zero() {
        return Err(FactorError::Zero);
    }
    // numer * denom differs from q by denom^2
    let m = q.numer() * q.denom();
    let f = factor(&m)?;
    let mut rep = Int::from(f.sign as i64);
    for p in f.odd_support() {
        rep *= p;
    }
    Ok(SquareClass { rep })
}

pub fn square_class_int(n: &Int) -> Result<SquareClass, FactorError> {
    square_class(&Rat::from_integer(n.clone()))
}

/// True iff q is a square of a rational.
pub fn is_square_rat(q: &Rat) -> bool {
    if q.is_negative() {
        return false;
    }
    if q.is_zero() {
        return true;
    }
    is_square_int(q.numer()) && is_square_int(q.denom())
}

pub fn is_square_int(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Exact square root of a rational square.
pub fn sqrt_rat(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let rn = q.numer().sqrt();
    let rd = q.denom().sqrt();
    if &(&rn * &rn) == q.numer() && &(&rd * &rd) == q.denom() {
        Some(Rat::new(rn, rd))
    } else {
        None
    }
}

/// Legendre symbol (a|p) for an odd prime p.
pub fn legendre(a: &Int, p: &Int) -> i32 {
    let r = mod_n(a, p);
    if r.is_zero() {
        return 0;
    }
    let e = (p - 1) / 2;
    let v = Int::from(r).modpow(&e, p);
    if v.is_one() {
        1
    } else {
        -1
    }
}

/// Jacobi symbol (a|n) for odd positive n.
pub fn jacobi(a: &Int, n: &Int) -> i32 {
    debug_assert!(n.is_positive() && n.is_odd());
    let mut a = mod_n(a, n);
    let mut n = n.clone();
    let mut t = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let r: Int = &n % 8;
            let r = r.to_i64().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if (&a % 4u8) == Int::from(3) && (&n % 4u8) == Int::from(3) {
            t = -t;
        }
        a = mod_n(&a, &n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Square root mod an odd prime (Tonelli–Shanks). Requires (a|p) ≠ −1.
pub fn sqrt_mod_p(a: &Int, p: &Int) -> Option<Int> {
    let a = mod_n(a, p);
    if a.is_zero() {
        return Some(Int::zero());
    }
    if legendre(&a, p) != 1 {
        return None;
    }
    if p.mod_floor(&Int::from(4)) == Int::from(3) {
        let e = (p + Int::one()) / Int::from(4);
        return Some(a.modpow(&e, p));
    }
    // general Tonelli-Shanks
    let mut q: Int = p - Int::one();
    let mut s = 0u64;
    while q.is_even() {
        q /= 2;
        s += 1;
    }
    let mut z = Int::from(2);
    while legendre(&z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1) / 2), p);
    while !t.is_one() {
        let mut i = 0u64;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = mod_n(&(&tt * &tt), p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = mod_n(&(&b * &b), p);
        }
        m = i;
        c = mod_n(&(&b * &b), p);
        t = mod_n(&(&t * &c), p);
        r = mod_n(&(&r * &b), p);
    }
    Some(r)
}

/// Lifts a square root of `a` from mod p to mod p^k (odd p, a a unit mod p).
pub fn hensel_sqrt(a: &Int, p: &Int, k: u32) -> Option<Int> {
    let pk = p.pow(k);
    let a = mod_n(a, &pk);
    if (&a % p).is_zero() {
        return None;
    }
    let mut r = sqrt_mod_p(&a, p)?;
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let modulus = p.pow(prec);
        // Newton step: r <- r - (r^2 - a) / (2r)
        let inv = mod_inverse(&(Int::from(2) * &r), &modulus)?;
        let delta = mod_n(&(&r * &r - &a), &modulus);
        r = mod_n(&(&r - delta * inv), &modulus);
    }
    Some(r)
}

/// Inverse of a mod n, when gcd(a,n)=1.
pub fn mod_inverse(a: &Int, n: &Int) -> Option<Int> {
    let e = a.extended_gcd(n);
    if e.gcd.is_one() {
        Some(mod_n(&e.x, n))
    } else {
        None
    }
}

/// Simultaneous congruences x ≡ r1 mod m1, x ≡ r2 mod m2 with coprime moduli.
pub fn crt_pair(r1: &Int, m1: &Int, r2: &Int, m2: &Int) -> Int {
    let inv = mod_inverse(m1, m2).expect("coprime moduli");
    let k = mod_n(&((r2 - r1) * inv), m2);
    r1 + m1 * k
}

/// A place of ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Infinite,
    Finite(Int),
}

impl Place {
    pub fn finite(p: i64) -> Place {
        Place::Finite(Int::from(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{}", p),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Finite(a), Place::Finite(b)) => a.cmp(b),
            (Place::Finite(_), Place::Infinite) => Ordering::Less,
            (Place::Infinite, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinite, Place::Infinite) => Ordering::Equal,
        }
    }
}

/// Valuation and unit part of a nonzero rational at a finite prime.
pub fn val_unit(q: &Rat, p: &Int) -> (i64, Rat) {
    debug_assert!(!q.is_zero());
    let mut v = 0i64;
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    while (&num % p).is_zero() {
        num /= p;
        v += 1;
    }
    while (&den % p).is_zero() {
        den /= p;
        v -= 1;
    }
    (v, Rat::new(num, den))
}

/// Hilbert symbol (a,b)_v over the completion at `v`: +1 iff z² = ax² + by²
/// has a nonzero solution over ℚ_v.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: &Place) -> i32 {
    debug_assert!(!a.is_zero() && !b.is_zero());
    match v {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) if p.to_u32() == Some(2) => hilbert_symbol_2(a, b),
        Place::Finite(p) => hilbert_symbol_odd(a, b, p),
    }
}

fn hilbert_symbol_odd(a: &Rat, b: &Rat, p: &Int) -> i32 {
    let (alpha, u) = val_unit(a, p);
    let (beta, w) = val_unit(b, p);
    // residues of the unit parts
    let ur = mod_n(&(u.numer() * mod_inverse(u.denom(), p).expect("unit")), p);
    let wr = mod_n(&(w.numer() * mod_inverse(w.denom(), p).expect("unit")), p);
    let mut sign = 1i32;
    if alpha % 2 != 0 && beta % 2 != 0 {
        // (-1|p)
        sign *= legendre(&Int::from(-1), p);
    }
    if beta % 2 != 0 {
        sign *= legendre(&ur, p);
    }
    if alpha % 2 != 0 {
        sign *= legendre(&wr, p);
    }
    sign
}

fn hilbert_symbol_2(a: &Rat, b: &Rat) -> i32 {
    let two = Int::from(2);
    let (alpha, u) = val_unit(a, &two);
    let (beta, w) = val_unit(b, &two);
    let m8 = Int::from(8);
    let ur = mod_n(&(u.numer() * mod_inverse(u.denom(), &m8).expect("odd")), &m8)
        .to_i64()
        .unwrap();
    let wr = mod_n(&(w.numer() * mod_inverse(w.denom(), &m8).expect("odd")), &m8)
        .to_i64()
        .unwrap();
    let eps = |x: i64| ((x - 1) / 2) % 2 != 0; // x ≡ 3 mod 4
    let omega = |x: i64| (x * x - 1) / 8 % 2 != 0; // x ≡ ±3 mod 8
    let mut e = false;
    if eps(ur) && eps(wr) {
        e = !e;
    }
    if alpha % 2 != 0 && omega(wr) {
        e = !e;
    }
    if beta % 2 != 0 && omega(ur) {
        e = !e;
    }
    if e {
        -1
    } else {
        1
    }
}

/// Ramification set of the quaternion algebra (a,b) over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionClass {
    pub ram: Vec<Place>,
}

impl QuaternionClass {
    pub fn is_split(&self) -> bool {
        self.ram.is_empty()
    }
}

/// Candidate places where (a,b) can ramify: ∞, 2, and the primes of the
/// square classes of a and b. Symbols are +1 everywhere else.
pub fn candidate_places(a: &Rat, b: &Rat) -> Result<Vec<Place>, FactorError> {
    let sa = square_class(a)?;
    let sb = square_class(b)?;
    let mut places = vec![Place::Infinite, Place::finite(2)];
    for rep in [&sa.rep, &sb.rep] {
        let f = factor(rep)?;
        for (p, _) in f.factors {
            if p != Int::from(2) {
                let pl = Place::Finite(p);
                if !places.contains(&pl) {
                    places.push(pl);
                }
            }
        }
    }
    places.sort();
    Ok(places)
}

pub fn quaternion_ramification(a: &Rat, b: &Rat) -> Result<QuaternionClass, FactorError> {
    let mut ram = Vec::new();
    for v in candidate_places(a, b)? {
        if hilbert_symbol(a, b, &v) == -1 {
            ram.push(v);
        }
    }
    debug_assert!(ram.len() % 2 == 0, "product formula: even ramification");
    Ok(QuaternionClass { ram })
}

/// True iff ax² + by² = cz² has a nonzero ℚ_v-point.
pub fn conic_solvable_local(a: &Rat, b: &Rat, c: &Rat, v: &Place) -> bool {
    // dividing by c: (a/c)x² + (b/c)y² = z²; symbol criterion
    let ac = a / c;
    let bc = b / c;
    hilbert_symbol(&ac, &bc, v) == 1
}

/// Fundamental solution of x² − m y² = ±1 (m > 1 nonsquare), plus the
/// half-integral solution of x² − m y² = ±4 with x,y odd when one exists.
/// Returned as (x, y, value) triples with value in {1,−1,4,−4}.
pub fn pell_units(m: &Int) -> Vec<(Rat, Rat)> {
    debug_assert!(m > &Int::one() && !is_square_int(m));
    let mut out = Vec::new();
    let a0 = m.sqrt();
    // continued fraction of sqrt(m): P,Q recurrences with convergents h/k
    let mut p = Int::zero();
    let mut q = Int::one();
    let mut a = a0.clone();
    let (mut h0, mut h1) = (Int::one(), a0.clone());
    let (mut k0, mut k1) = (Int::zero(), Int::one());
    for _ in 0..100_000 {
        let val = &h1 * &h1 - m * &k1 * &k1;
        if val == Int::one() || val == Int::from(-1) {
            out.push((
                Rat::from_integer(h1.clone()),
                Rat::from_integer(k1.clone()),
            ));
            break;
        }
        p = &a * &q - &p;
        q = (m - &p * &p) / &q;
        a = (&a0 + &p) / &q;
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    // The odd solution of x² − m y² = ±4 is not always a convergent of the
    // continued fraction (m = 5: x = y = 1), so search for it directly.
    if mod_n(m, &Int::from(4)) == Int::one() {
        let mut l = Int::one();
        while l < Int::from(2000) {
            for s in [Int::from(4), Int::from(-4)] {
                let x2 = m * &l * &l + &s;
                if x2 > Int::zero() {
                    let x = x2.sqrt();
                    if &x * &x == x2 && x.is_odd() {
                        out.push((
                            Rat::new(x, Int::from(2)),
                            Rat::new(l.clone(), Int::from(2)),
                        ));
                        return out;
                    }
                }
            }
            l += 2;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_small() {
        let f = factor(&int(245)).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, vec![(int(5), 1), (int(7), 2)]);
        assert_eq!(f.reassemble(), int(245));
        let f1 = factor(&int(1)).unwrap();
        assert_eq!(f1.sign, 1);
        assert!(f1.factors.is_empty());
        let fm = factor(&int(-153)).unwrap();
        assert_eq!(fm.sign, -1);
        assert_eq!(fm.factors, vec![(int(3), 2), (int(17), 1)]);
    }

    #[test]
    fn square_classes() {
        assert_eq!(square_class(&rat_frac(245, 49)).unwrap().rep, int(5));
        assert_eq!(square_class(&rat_int(1)).unwrap().rep, int(1));
        assert_eq!(square_class(&rat_int(-18)).unwrap().rep, int(-2));
    }

    #[test]
    fn pell_11_13() {
        let u = pell_units(&int(11));
        assert_eq!(u[0], (rat_int(10), rat_int(3)));
        let u13 = pell_units(&int(13));
        // half-integral unit (3 + sqrt 13)/2 of norm -1
        assert!(u13.contains(&(rat_frac(3, 2), rat_frac(1, 2))));
    }

    #[test]
    fn hensel_lift() {
        let r = hensel_sqrt(&int(11), &int(5), 6).unwrap();
        let p6 = int(5).pow(6);
        assert_eq!(mod_n(&(&r * &r), &p6), mod_n(&int(11), &p6));
    }
}
