//! The decision pipeline for the mod-2 fourfold Massey product ⟨a,b,c,d⟩
//! over ℚ.
//!
//! For nonzero rationals a, b, c, d, the product of the corresponding
//! square classes is defined and vanishes exactly when
//!
//! > u²·βB̃ + v²·γC̃ = 1
//!
//! is solvable over 𝓔 = ℚ\[X,Y\]/(X²−a, Y²−d), with B̃ ∈ ℚ\[X\]/(X²−a) of norm
//! b·z₁², C̃ ∈ ℚ\[Y\]/(Y²−d) of norm c·z₂², and nonzero rationals β, γ, z₁, z₂.
//! A [`MasseyCertificate`] records one solution and [`verify_certificate`]
//! replays every identity in exact arithmetic, so a Vanishes verdict never
//! rests on the search code being correct.
//!
//! Definedness forces the three quaternion symbols (a,b), (b,c), (c,d) to
//! split, so a ramified symbol refutes the product outright. In the other
//! direction, over number fields a defined product always vanishes; combined
//! with the splitting-variety description this makes the negative direction
//! decidable too: when the bounded searches miss a witness, the per-place
//! tables of [`local_table`] and the adelic product test of
//! [`brauer_manin_scan`] can certify that no witness exists at all.
//! [`decide_vanishing`] arbitrates the whole pipeline.

mod recipes;
mod scan;

pub use recipes::{recipe_shape, special_recipes, RecipeShape};
pub use scan::{
    background_options, brauer_manin_scan, local_table, BmAnalysis, BmOutcome, LocalRow,
    LocalTable,
};

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::conic::{
    cup_vanishes_over_e, solve_conic, solve_fundamental, verify_fundamental, CupOutcome,
    SolveOutcome,
};
use crate::etale::{quad_norm, EtaleElem, QuadElem};
use crate::numtheory::{
    factor, int, is_square_rat, quaternion_ramification, rat, sqrt_rat, square_class, FactorError,
    Int, Place, QuaternionClass, Rat,
};
use crate::rng::Xoshiro256;

/// One of the three consecutive cup products whose vanishing is necessary
/// for the Massey product to be defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolPair {
    AB,
    BC,
    CD,
}

impl fmt::Display for SymbolPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolPair::AB => write!(f, "(a,b)"),
            SymbolPair::BC => write!(f, "(b,c)"),
            SymbolPair::CD => write!(f, "(c,d)"),
        }
    }
}

/// Ramification of the three symbols plus the square-class flags that steer
/// the pipeline.
#[derive(Clone, Debug)]
pub struct Prerequisites {
    pub sym_ab: QuaternionClass,
    pub sym_bc: QuaternionClass,
    pub sym_cd: QuaternionClass,
    pub sq_a: bool,
    pub sq_b: bool,
    pub sq_c: bool,
    pub sq_d: bool,
    pub sq_ab: bool,
    pub sq_ad: bool,
    pub sq_cd: bool,
}

impl Prerequisites {
    pub fn all_split(&self) -> bool {
        self.sym_ab.is_split() && self.sym_bc.is_split() && self.sym_cd.is_split()
    }

    /// The first ramified symbol in the order (a,b), (b,c), (c,d).
    pub fn first_ramified(&self) -> Option<SymbolPair> {
        if !self.sym_ab.is_split() {
            Some(SymbolPair::AB)
        } else if !self.sym_bc.is_split() {
            Some(SymbolPair::BC)
        } else if !self.sym_cd.is_split() {
            Some(SymbolPair::CD)
        } else {
            None
        }
    }

    pub fn symbol(&self, pair: SymbolPair) -> &QuaternionClass {
        match pair {
            SymbolPair::AB => &self.sym_ab,
            SymbolPair::BC => &self.sym_bc,
            SymbolPair::CD => &self.sym_cd,
        }
    }

    pub fn any_square_entry(&self) -> bool {
        self.sq_a || self.sq_b || self.sq_c || self.sq_d
    }

    /// None of ab, ad, cd is a square: the shape where splitting of the
    /// three symbols already guarantees vanishing.
    pub fn generic(&self) -> bool {
        !(self.sq_ab || self.sq_ad || self.sq_cd)
    }
}

/// Ramification sets of the three consecutive symbols and the square-class
/// flags of a, b, c, d, ab, ad, cd.
pub fn check_prerequisites(
    a: &Rat,
    b: &Rat,
    c: &Rat,
    d: &Rat,
) -> Result<Prerequisites, FactorError> {
    let sym_ab = quaternion_ramification(a, b)?;
    let sym_bc = quaternion_ramification(b, c)?;
    let sym_cd = quaternion_ramification(c, d)?;
    Ok(Prerequisites {
        sym_ab,
        sym_bc,
        sym_cd,
        sq_a: is_square_rat(a),
        sq_b: is_square_rat(b),
        sq_c: is_square_rat(c),
        sq_d: is_square_rat(d),
        sq_ab: is_square_rat(&(a * b)),
        sq_ad: is_square_rat(&(a * d)),
        sq_cd: is_square_rat(&(c * d)),
    })
}

/// An exact witness that ⟨a,b,c,d⟩ is defined and vanishes: a point of the
/// splitting variety. `bt` lies in ℚ\[X\]/(X²−bt.a) with quad_norm(bt) = b·z₁²,
/// `ct` in ℚ\[Y\]/(Y²−ct.a) with quad_norm(ct) = c·z₂², the radicands agree
/// with a and d up to rational squares, and u, v solve
/// u²·β·bt + v²·γ·ct = 1 in the joint algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyCertificate {
    pub bt: QuadElem,
    pub ct: QuadElem,
    pub z1: Rat,
    pub z2: Rat,
    pub beta: Rat,
    pub gamma: Rat,
    pub u: EtaleElem,
    pub v: EtaleElem,
}

/// Closed families where vanishing holds without an explicit witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VanishingTheorem {
    /// One of a, b, c, d is a square; with the three symbols split the
    /// product is defined and vanishes.
    SquareEntry,
    /// None of ab, ad, cd is a square; with the three symbols split the
    /// product is defined and vanishes.
    GenericShape,
}

impl fmt::Display for VanishingTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VanishingTheorem::SquareEntry => write!(f, "square-entry"),
            VanishingTheorem::GenericShape => write!(f, "generic-shape"),
        }
    }
}

/// A certified failure of the adelic product condition, or outright local
/// insolubility, for the splitting variety attached to the instance.
#[derive(Clone, Debug)]
pub struct BmFailure {
    /// A place with no admissible local data at all, when that is the
    /// obstruction; None when every place is fine locally but the product
    /// condition cannot be met.
    pub insoluble_at: Option<Place>,
    pub analysis: BmAnalysis,
}

/// Why the product is certifiably not defined (or not vanishing).
#[derive(Clone, Debug)]
pub enum NotDefinedReason {
    /// A necessary quaternion symbol is ramified.
    RamifiedSymbol {
        pair: SymbolPair,
        class: QuaternionClass,
    },
    /// The splitting variety has no rational point: either some completion
    /// already has none, or the Brauer–Manin product condition fails.
    BrauerManin(Box<BmFailure>),
}

/// What the bounded searches looked at before giving up.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub steps_used: u64,
    pub step_limit: u64,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    /// Defined and vanishing, with an exact verified witness.
    Vanishes(Box<MasseyCertificate>),
    /// Defined and vanishing by a closed-form criterion; no witness found
    /// within budget.
    VanishesByTheorem(VanishingTheorem),
    /// Certifiably not defined (hence not vanishing).
    NotDefined(NotDefinedReason),
    /// Reserved for shapes where definedness cannot be settled; the current
    /// pipeline never emits it, since a ramified symbol refutes definedness
    /// over ℚ in every shape and the adelic scan settles the rest.
    DefinednessUnknown,
    /// The searches were exhausted without a verdict.
    Unknown(Diagnostics),
}

impl Verdict {
    pub fn class_name(&self) -> &'static str {
        match self {
            Verdict::Vanishes(_) => "vanishes",
            Verdict::VanishesByTheorem(_) => "vanishes-by-theorem",
            Verdict::NotDefined(_) => "not-defined",
            Verdict::DefinednessUnknown => "definedness-unknown",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

/// Outcome of [`decide_vanishing`]: the inputs, the symbol and square-class
/// data (when computable), and the verdict.
#[derive(Clone, Debug)]
pub struct MasseyReport {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
    pub prerequisites: Option<Prerequisites>,
    pub verdict: Verdict,
}

/// Squarefree kernel k of a nonzero rational q together with the scale t,
/// q = k·t² with t > 0.
fn kernel_and_scale(q: &Rat) -> Result<(Rat, Rat), FactorError> {
    let k = Rat::from_integer(square_class(q)?.rep);
    let t = sqrt_rat(&(q / &k)).expect("the quotient by the square class is a square");
    Ok((k, t))
}

/// Squarefree kernels of the four entries plus the scales of b and c (the
/// two entries whose scales enter certificates through z₁, z₂).
pub(crate) struct Kernels {
    pub(crate) ka: Rat,
    pub(crate) kb: Rat,
    pub(crate) kc: Rat,
    pub(crate) kd: Rat,
    pub(crate) tb: Rat,
    pub(crate) tc: Rat,
}

impl Kernels {
    pub(crate) fn of(a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> Result<Kernels, FactorError> {
        let (ka, _) = kernel_and_scale(a)?;
        let (kb, tb) = kernel_and_scale(b)?;
        let (kc, tc) = kernel_and_scale(c)?;
        let (kd, _) = kernel_and_scale(d)?;
        Ok(Kernels {
            ka,
            kb,
            kc,
            kd,
            tb,
            tc,
        })
    }
}

/// An element of norm exactly n in ℚ\[X\]/(X²−r), from a conic point with the
/// z-coordinate normalized away. None only if the conic has no rational
/// point or the descent could not finish.
pub(crate) fn norm_element(r: &Rat, n: &Rat, budget: &mut Budget) -> Option<QuadElem> {
    match solve_conic(r, n, budget) {
        SolveOutcome::Solved(s) => {
            debug_assert!(s.verifies(r, n));
            Some(QuadElem::new(r.clone(), &s.x / &s.z, &s.y / &s.z))
        }
        _ => None,
    }
}

/// The basepoints the local analysis is anchored to: B̃₀ of norm kb in
/// ℚ\[X\]/(X²−ka) and C̃₀ of norm kc in ℚ\[Y\]/(Y²−kd), where k• are the
/// squarefree kernels of the entries. Ok(None) when a norm equation has no
/// rational solution (the matching symbol is then ramified) or its descent
/// ran out of budget.
pub fn splitting_basepoints(
    a: &Rat,
    b: &Rat,
    c: &Rat,
    d: &Rat,
    budget: &mut Budget,
) -> Result<Option<(QuadElem, QuadElem)>, FactorError> {
    let kern = Kernels::of(a, b, c, d)?;
    let bt0 = norm_element(&kern.ka, &kern.kb, budget);
    let ct0 = norm_element(&kern.kd, &kern.kc, budget);
    Ok(bt0.zip(ct0))
}

/// Exact replay of a certificate against the inputs: algebra coherence, the
/// radicands matching a and d up to squares, both norm identities, and the
/// fundamental identity.
pub fn verify_certificate(a: &Rat, b: &Rat, c: &Rat, d: &Rat, cert: &MasseyCertificate) -> bool {
    if a.is_zero() || b.is_zero() || c.is_zero() || d.is_zero() {
        return false;
    }
    if cert.z1.is_zero() || cert.z2.is_zero() || cert.beta.is_zero() || cert.gamma.is_zero() {
        return false;
    }
    let ra = &cert.bt.a;
    let rd = &cert.ct.a;
    if ra.is_zero() || rd.is_zero() {
        return false;
    }
    if cert.u.a != *ra || cert.u.d != *rd || cert.v.a != *ra || cert.v.d != *rd {
        return false;
    }
    if !is_square_rat(&(a / ra)) || !is_square_rat(&(d / rd)) {
        return false;
    }
    if quad_norm(&cert.bt) != b * &cert.z1 * &cert.z1 {
        return false;
    }
    if quad_norm(&cert.ct) != c * &cert.z2 * &cert.z2 {
        return false;
    }
    let bte = EtaleElem::from_quad_a(&cert.bt, rd.clone());
    let cte = EtaleElem::from_quad_d(&cert.ct, ra.clone());
    verify_fundamental(&bte, &cte, &cert.beta, &cert.gamma, &cert.u, &cert.v)
}

/// X ↔ Y relabeling of the joint algebra, a ring isomorphism
/// ℚ\[X,Y\]/(X²−a, Y²−d) → ℚ\[X,Y\]/(X²−d, Y²−a).
fn swap_xy(e: &EtaleElem) -> EtaleElem {
    EtaleElem::new(
        e.d.clone(),
        e.a.clone(),
        e.c0.clone(),
        e.cy.clone(),
        e.cx.clone(),
        e.cxy.clone(),
    )
}

/// The fundamental equation is symmetric in its two quadratic slots, so a
/// certificate for ⟨d,c,b,a⟩ becomes one for ⟨a,b,c,d⟩ by exchanging
/// (B̃, β, z₁) with (C̃, γ, z₂), swapping u and v, and relabeling X ↔ Y.
pub fn reverse_certificate(cert: &MasseyCertificate) -> MasseyCertificate {
    MasseyCertificate {
        bt: cert.ct.clone(),
        ct: cert.bt.clone(),
        z1: cert.z2.clone(),
        z2: cert.z1.clone(),
        beta: cert.gamma.clone(),
        gamma: cert.beta.clone(),
        u: swap_xy(&cert.v),
        v: swap_xy(&cert.u),
    }
}

/// Primes worth trying as modifier factors: the primes of the given
/// rationals plus all primes up to 50.
fn scalar_pool(items: &[&Rat]) -> Vec<Int> {
    let mut pool: BTreeSet<Int> = BTreeSet::new();
    for q in items {
        for part in [q.numer().clone(), q.denom().clone()] {
            if let Ok(f) = factor(&part) {
                for (p, _) in f.factors {
                    pool.insert(p);
                }
            }
        }
    }
    for sp in [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        pool.insert(int(sp));
    }
    pool.into_iter().collect()
}

/// Candidate modifiers: 1, −1, ± the pool primes in order, then seeded
/// signed products of two or three pool primes, deduplicated.
fn candidate_scalars(pool: &[Int], count: usize, seed: u64) -> Vec<Rat> {
    let mut out: Vec<Rat> = Vec::new();
    let mut seen: BTreeSet<Int> = BTreeSet::new();
    let push = |out: &mut Vec<Rat>, seen: &mut BTreeSet<Int>, n: Int| {
        if seen.insert(n.clone()) {
            out.push(Rat::from_integer(n));
        }
    };
    push(&mut out, &mut seen, int(1));
    push(&mut out, &mut seen, int(-1));
    for p in pool {
        if out.len() >= count {
            break;
        }
        push(&mut out, &mut seen, p.clone());
        push(&mut out, &mut seen, -p.clone());
    }
    let mut rng = Xoshiro256::new(seed ^ 0x6d6f_6469);
    let mut tries = 0usize;
    while out.len() < count && pool.len() >= 2 && tries < 64 * count {
        tries += 1;
        let i = rng.below(pool.len() as u64) as usize;
        let j = rng.below(pool.len() as u64) as usize;
        if i == j {
            continue;
        }
        let mut n = &pool[i] * &pool[j];
        if rng.below(2) == 1 {
            n = -n;
        }
        if rng.below(4) == 0 {
            let k = rng.below(pool.len() as u64) as usize;
            if k != i && k != j {
                n *= &pool[k];
            }
        }
        push(&mut out, &mut seen, n);
    }
    out.truncate(count);
    out
}

/// Searches nonzero rationals β, γ making (βB̃₀, γC̃₀) vanish over
/// 𝓔 = ℚ\[X,Y\]/(X²−a, Y²−d), so that the fundamental equation with these
/// modifiers is globally solvable. Candidates are signed products of primes
/// dividing the norms and radicands, plus small primes, tried in order of
/// joint complexity with (1,1) first; each pair is screened by the exact
/// local symbol scan, so a returned pair is guaranteed solvable (the witness
/// search may still take its own time).
pub fn modifier_search(
    bt0: &QuadElem,
    ct0: &QuadElem,
    a: &Rat,
    d: &Rat,
    budget: &mut Budget,
    seed: u64,
) -> Option<(Rat, Rat)> {
    assert_eq!(&bt0.a, a, "B-basepoint must lie in F[X]/(X²−a)");
    assert_eq!(&ct0.a, d, "C-basepoint must lie in F[Y]/(Y²−d)");
    let nb = quad_norm(bt0);
    let nc = quad_norm(ct0);
    assert!(!nb.is_zero() && !nc.is_zero(), "basepoints must be units");
    let pool = scalar_pool(&[a, d, &nb, &nc]);
    let cands = candidate_scalars(&pool, 24, seed);
    let n = cands.len();
    for diag in 0..(2 * n) {
        for i in 0..n.min(diag + 1) {
            let j = diag - i;
            if j >= n {
                continue;
            }
            if budget.exhausted() {
                return None;
            }
            let beta = &cands[i];
            let gamma = &cands[j];
            let mut probe = budget.child(64);
            let out = cup_vanishes_over_e(
                &bt0.scale(beta),
                &ct0.scale(gamma),
                a,
                d,
                &mut probe,
                seed,
            );
            budget.absorb(&probe);
            if !budget.charge(1) {
                return None;
            }
            if let CupOutcome::Yes { .. } = out {
                return Some((beta.clone(), gamma.clone()));
            }
        }
    }
    None
}

fn unknown_verdict(budget: &Budget, notes: Vec<String>) -> Verdict {
    Verdict::Unknown(Diagnostics {
        steps_used: budget.used(),
        step_limit: budget.limit(),
        notes,
    })
}

/// Wraps a candidate certificate, enforcing the replay invariant: anything
/// that fails exact verification is discarded rather than reported.
fn accept(
    a: &Rat,
    b: &Rat,
    c: &Rat,
    d: &Rat,
    cert: MasseyCertificate,
    notes: &mut Vec<String>,
) -> Option<Verdict> {
    if verify_certificate(a, b, c, d, &cert) {
        Some(Verdict::Vanishes(Box::new(cert)))
    } else {
        debug_assert!(false, "a constructed certificate failed exact replay");
        notes.push(String::from(
            "a candidate certificate failed exact replay and was discarded",
        ));
        None
    }
}

/// Decides whether ⟨a,b,c,d⟩ is defined and vanishes.
///
/// The pipeline: (1) compute the three symbols; any ramified one is
/// conclusive NotDefined. (2) If b or c is a square, emit the instant
/// certificate (B̃ = 1 or C̃ = 1). (3) Try the closed-form recipes on the
/// kernel shape, in both orientations. (4) Solve the two basepoint conics
/// and run the modifier search plus the witness search. (5) If a witness was
/// missed: a square entry or a generic shape still implies vanishing, which
/// is reported without a witness. (6) Remaining (degenerate) shapes go to
/// the adelic scan: a certified failure is NotDefined; a passing scan means
/// a witness exists but was missed, reported as Unknown with diagnostics.
pub fn decide_vanishing(
    a: &Rat,
    b: &Rat,
    c: &Rat,
    d: &Rat,
    budget: &mut Budget,
    seed: u64,
) -> MasseyReport {
    assert!(
        !a.is_zero() && !b.is_zero() && !c.is_zero() && !d.is_zero(),
        "entries must be nonzero"
    );
    let report = |prereq: Option<Prerequisites>, verdict: Verdict| MasseyReport {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        d: d.clone(),
        prerequisites: prereq,
        verdict,
    };
    let mut notes: Vec<String> = Vec::new();

    let prereq = match check_prerequisites(a, b, c, d) {
        Ok(p) => p,
        Err(e) => {
            return report(
                None,
                unknown_verdict(
                    budget,
                    vec![format!("factoring failed on the symbol prerequisites: {e}")],
                ),
            )
        }
    };
    if let Some(pair) = prereq.first_ramified() {
        let class = prereq.symbol(pair).clone();
        return report(
            Some(prereq),
            Verdict::NotDefined(NotDefinedReason::RamifiedSymbol { pair, class }),
        );
    }

    let kern = match Kernels::of(a, b, c, d) {
        Ok(k) => k,
        Err(e) => {
            notes.push(format!(
                "factoring failed while reducing to squarefree kernels: {e}"
            ));
            return report(Some(prereq), unknown_verdict(budget, notes));
        }
    };

    // b a square: B̃ = 1 and (u,v) = (1,0) solve the equation outright once
    // C̃ exists, which the split (c,d) symbol guarantees.
    if kern.kb.is_one() {
        if let Some(ct) = norm_element(&kern.kd, &kern.kc, budget) {
            let cert = MasseyCertificate {
                bt: QuadElem::from_rat(kern.ka.clone(), rat(1)),
                ct,
                z1: kern.tb.recip(),
                z2: kern.tc.recip(),
                beta: rat(1),
                gamma: rat(1),
                u: EtaleElem::one(kern.ka.clone(), kern.kd.clone()),
                v: EtaleElem::zero(kern.ka.clone(), kern.kd.clone()),
            };
            if let Some(v) = accept(a, b, c, d, cert, &mut notes) {
                return report(Some(prereq), v);
            }
        }
    }
    // c a square: mirror image with C̃ = 1 and (u,v) = (0,1).
    if kern.kc.is_one() {
        if let Some(bt) = norm_element(&kern.ka, &kern.kb, budget) {
            let cert = MasseyCertificate {
                bt,
                ct: QuadElem::from_rat(kern.kd.clone(), rat(1)),
                z1: kern.tb.recip(),
                z2: kern.tc.recip(),
                beta: rat(1),
                gamma: rat(1),
                u: EtaleElem::zero(kern.ka.clone(), kern.kd.clone()),
                v: EtaleElem::one(kern.ka.clone(), kern.kd.clone()),
            };
            if let Some(v) = accept(a, b, c, d, cert, &mut notes) {
                return report(Some(prereq), v);
            }
        }
    }

    // closed-form recipes, in the given orientation and then reversed
    if let Some(shape) = recipe_shape(&kern.ka, &kern.kb, &kern.kc, &kern.kd) {
        if let Some(cert) = special_recipes(shape, a, b, c, d, budget, seed) {
            if let Some(v) = accept(a, b, c, d, cert, &mut notes) {
                return report(Some(prereq), v);
            }
        }
    }
    if let Some(shape) = recipe_shape(&kern.kd, &kern.kc, &kern.kb, &kern.ka) {
        if let Some(rev) = special_recipes(shape, d, c, b, a, budget, seed) {
            let cert = reverse_certificate(&rev);
            if let Some(v) = accept(a, b, c, d, cert, &mut notes) {
                return report(Some(prereq), v);
            }
        }
    }

    // basepoints, modifiers, witness search
    let bt0 = norm_element(&kern.ka, &kern.kb, budget);
    let ct0 = norm_element(&kern.kd, &kern.kc, budget);
    if bt0.is_none() || ct0.is_none() {
        notes.push(String::from(
            "no conic point found for a norm-form basepoint",
        ));
    }
    if let (Some(bt0), Some(ct0)) = (bt0.as_ref(), ct0.as_ref()) {
        let half = budget.remaining() / 2;
        let mut mb = budget.child(half);
        let found = modifier_search(bt0, ct0, &kern.ka, &kern.kd, &mut mb, seed);
        budget.absorb(&mb);
        if let Some((beta, gamma)) = found {
            let bte = EtaleElem::from_quad_a(bt0, kern.kd.clone());
            let cte = EtaleElem::from_quad_d(ct0, kern.ka.clone());
            match solve_fundamental(&bte, &cte, &beta, &gamma, budget, seed) {
                SolveOutcome::Solved(w) => {
                    let cert = MasseyCertificate {
                        bt: bt0.clone(),
                        ct: ct0.clone(),
                        z1: kern.tb.recip(),
                        z2: kern.tc.recip(),
                        beta,
                        gamma,
                        u: w.u,
                        v: w.v,
                    };
                    if let Some(v) = accept(a, b, c, d, cert, &mut notes) {
                        return report(Some(prereq), v);
                    }
                }
                SolveOutcome::LocalObstruction(o) => {
                    notes.push(format!(
                        "witness search reported an obstruction at {} after a clean screen",
                        o.place
                    ));
                }
                SolveOutcome::Unknown(r) => {
                    notes.push(format!("witness search exhausted its budget: {}", r.detail));
                }
            }
        } else {
            notes.push(String::from(
                "no modifier pair passed the local screen within budget",
            ));
        }
    }

    // witness missed, but the shape may still force vanishing
    if prereq.any_square_entry() {
        return report(
            Some(prereq),
            Verdict::VanishesByTheorem(VanishingTheorem::SquareEntry),
        );
    }
    if prereq.generic() {
        return report(
            Some(prereq),
            Verdict::VanishesByTheorem(VanishingTheorem::GenericShape),
        );
    }

    // degenerate shape: the adelic scan is exact and can refute
    if let (Some(bt0), Some(ct0)) = (bt0.as_ref(), ct0.as_ref()) {
        match brauer_manin_scan(a, b, c, d, bt0, ct0) {
            Ok(BmOutcome::Fails(analysis)) => report(
                Some(prereq),
                Verdict::NotDefined(NotDefinedReason::BrauerManin(Box::new(BmFailure {
                    insoluble_at: None,
                    analysis,
                }))),
            ),
            Ok(BmOutcome::LocallyInsoluble { place, analysis }) => report(
                Some(prereq),
                Verdict::NotDefined(NotDefinedReason::BrauerManin(Box::new(BmFailure {
                    insoluble_at: Some(place),
                    analysis,
                }))),
            ),
            Ok(BmOutcome::Passable(_)) => {
                notes.push(String::from(
                    "the adelic product condition is satisfiable, so a witness exists; \
                     the bounded search missed it — rerun with a larger budget",
                ));
                report(Some(prereq), unknown_verdict(budget, notes))
            }
            Err(e) => {
                notes.push(format!("the adelic scan could not complete: {e}"));
                report(Some(prereq), unknown_verdict(budget, notes))
            }
        }
    } else {
        report(Some(prereq), unknown_verdict(budget, notes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        rat(n)
    }

    #[test]
    fn prerequisite_flags() {
        let p = check_prerequisites(&q(34), &q(2), &q(17), &q(34)).unwrap();
        assert!(p.all_split());
        assert!(p.sq_ad);
        assert!(!p.sq_ab && !p.sq_cd);
        assert!(!p.any_square_entry());
        assert!(!p.generic());

        let p = check_prerequisites(&q(2), &q(3), &q(5), &q(7)).unwrap();
        assert_eq!(p.first_ramified(), Some(SymbolPair::AB));
    }

    #[test]
    fn ramified_symbol_is_conclusive() {
        let mut budget = Budget::new(1_000);
        let r = decide_vanishing(&q(2), &q(3), &q(5), &q(7), &mut budget, 1);
        match r.verdict {
            Verdict::NotDefined(NotDefinedReason::RamifiedSymbol { pair, class }) => {
                assert_eq!(pair, SymbolPair::AB);
                assert!(!class.ram.is_empty());
            }
            v => panic!("expected NotDefined, got {}", v.class_name()),
        }
    }

    #[test]
    fn square_b_gives_instant_certificate() {
        let mut budget = Budget::new(10_000);
        let r = decide_vanishing(&q(7), &q(4), &q(5), &q(11), &mut budget, 1);
        match r.verdict {
            Verdict::Vanishes(cert) => {
                assert!(verify_certificate(&q(7), &q(4), &q(5), &q(11), &cert));
                assert_eq!(cert.z1, Rat::new(int(1), int(2)));
            }
            v => panic!("expected Vanishes, got {}", v.class_name()),
        }
    }

    #[test]
    fn square_c_gives_instant_certificate() {
        let mut budget = Budget::new(10_000);
        let r = decide_vanishing(&q(11), &q(5), &q(9), &q(7), &mut budget, 1);
        match r.verdict {
            Verdict::Vanishes(cert) => {
                assert!(verify_certificate(&q(11), &q(5), &q(9), &q(7), &cert));
            }
            v => panic!("expected Vanishes, got {}", v.class_name()),
        }
    }

    #[test]
    fn reversal_maps_certificates() {
        // build a certificate for (7,4,5,11), reverse it, check it against
        // (11,5,4,7)
        let mut budget = Budget::new(10_000);
        let r = decide_vanishing(&q(7), &q(4), &q(5), &q(11), &mut budget, 1);
        let cert = match r.verdict {
            Verdict::Vanishes(c) => *c,
            v => panic!("expected Vanishes, got {}", v.class_name()),
        };
        let rev = reverse_certificate(&cert);
        assert!(verify_certificate(&q(11), &q(5), &q(4), &q(7), &rev));
    }

    #[test]
    fn tampered_certificates_fail() {
        let mut budget = Budget::new(10_000);
        let r = decide_vanishing(&q(7), &q(4), &q(5), &q(11), &mut budget, 1);
        let cert = match r.verdict {
            Verdict::Vanishes(c) => *c,
            v => panic!("expected Vanishes, got {}", v.class_name()),
        };
        let mut zeroed = cert.clone();
        zeroed.z1 = q(0);
        assert!(!verify_certificate(&q(7), &q(4), &q(5), &q(11), &zeroed));
        let mut mangled = cert.clone();
        mangled.u.c0 += q(1);
        assert!(!verify_certificate(&q(7), &q(4), &q(5), &q(11), &mangled));
        let mut wrong_norm = cert;
        wrong_norm.z2 = q(3);
        assert!(!verify_certificate(&q(7), &q(4), &q(5), &q(11), &wrong_norm));
    }

    #[test]
    fn modifier_identity_case() {
        // (1, C₀) vanishes over 𝓔 outright, so the search returns (1,1)
        let bt0 = QuadElem::from_rat(q(11), q(1));
        let ct0 = QuadElem::new(q(13), q(14), q(3));
        let mut budget = Budget::new(5_000);
        let got = modifier_search(&bt0, &ct0, &q(11), &q(13), &mut budget, 1);
        assert_eq!(got, Some((q(1), q(1))));
    }

    #[test]
    fn four_copies_instance_vanishes() {
        // a and d squares: the equation splits into rational conics, which
        // the descent solves outright
        let mut budget = Budget::new(50_000);
        let r = decide_vanishing(&q(1), &q(5), &q(11), &q(1), &mut budget, 1);
        match r.verdict {
            Verdict::Vanishes(cert) => {
                assert!(verify_certificate(&q(1), &q(5), &q(11), &q(1), &cert));
            }
            Verdict::VanishesByTheorem(VanishingTheorem::SquareEntry) => {}
            v => panic!("expected a vanishing verdict, got {}", v.class_name()),
        }
    }

    #[test]
    fn reference_instance_vanishes_within_budget() {
        let mut budget = Budget::new(1_000_000);
        let r = decide_vanishing(&q(11), &q(5), &q(79), &q(13), &mut budget, 1);
        match r.verdict {
            Verdict::Vanishes(cert) => {
                assert!(verify_certificate(&q(11), &q(5), &q(79), &q(13), &cert));
            }
            v => panic!("expected Vanishes, got {}", v.class_name()),
        }
    }

    #[test]
    fn degenerate_instance_is_refuted() {
        let mut budget = Budget::new(1_000_000);
        let r = decide_vanishing(&q(34), &q(2), &q(17), &q(34), &mut budget, 1);
        match r.verdict {
            Verdict::NotDefined(NotDefinedReason::BrauerManin(f)) => {
                assert!(f.insoluble_at.is_none());
                assert!(!f.analysis.achievable.is_empty());
            }
            v => panic!("expected NotDefined via the scan, got {}", v.class_name()),
        }
    }

    #[test]
    fn scaling_of_entries_keeps_the_verdict_class() {
        let mut b1 = Budget::new(50_000);
        let r1 = decide_vanishing(&q(7), &q(4), &q(5), &q(11), &mut b1, 1);
        let mut b2 = Budget::new(50_000);
        let r2 = decide_vanishing(
            &(q(7) * q(9)),
            &q(4),
            &(q(5) * Rat::new(int(1), int(4))),
            &q(11),
            &mut b2,
            1,
        );
        assert_eq!(r1.verdict.class_name(), r2.verdict.class_name());
    }
}
