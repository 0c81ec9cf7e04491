//! Local-global analysis of the splitting variety attached to ⟨a,b,c,d⟩:
//! per-place tables of admissible (β, γ) square classes, the option group
//! contributed by the unramified background places, and the adelic product
//! test that combines them into a certified pass or failure.
//!
//! A local point of the variety at v carries two square classes: the class
//! β of the B-side coordinate and the class γ of the C-side coordinate.
//! The pair is admissible at v exactly when the four quaternion conditions
//! of [`local_table`] hold; the invariants of the two obstruction classes
//! at such a point are the Hilbert symbols (β, c)_v and (γ, b)_v. A global
//! point would make both adelic products trivial, so if no choice of
//! admissible local data does, the variety has no rational point.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::etale::{quad_norm, EtaleElem, QuadElem};
use crate::local::{
    cup_symbols_over_e, etale_odd_places, etale_real_symbols, quad_symbols_above, DyadicContext,
};
use crate::numtheory::{
    factor, hilbert_symbol, int, is_square_int, is_square_rat, legendre, rat, square_class,
    sqrt_rat, FactorError, Int, Place, Rat,
};

/// One (β, γ) class pair at a place: whether a local point with those
/// classes exists, and the two obstruction symbols it would contribute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRow {
    pub beta: Rat,
    pub gamma: Rat,
    pub admissible: bool,
    /// Hilbert symbol (β, c)_v.
    pub sym_beta_c: i32,
    /// Hilbert symbol (γ, b)_v.
    pub sym_gamma_b: i32,
}

/// The full admissibility table at one place: every local square-class
/// pair, with its verdict and symbols.
#[derive(Clone, Debug)]
pub struct LocalTable {
    pub place: Place,
    pub rows: Vec<LocalRow>,
}

impl LocalTable {
    /// Whether the variety has any local point at this place.
    pub fn has_admissible(&self) -> bool {
        self.rows.iter().any(|r| r.admissible)
    }

    /// The symbol pairs contributed by admissible rows.
    pub fn options(&self) -> BTreeSet<(i32, i32)> {
        self.rows
            .iter()
            .filter(|r| r.admissible)
            .map(|r| (r.sym_beta_c, r.sym_gamma_b))
            .collect()
    }
}

impl fmt::Display for LocalTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "place {}", self.place)?;
        for r in &self.rows {
            writeln!(
                f,
                "  beta {:>6}  gamma {:>6}  {}  ({:+}, {:+})",
                r.beta,
                r.gamma,
                if r.admissible { "admissible" } else { "excluded  " },
                r.sym_beta_c,
                r.sym_gamma_b,
            )?;
        }
        Ok(())
    }
}

/// Everything the scan computed: the audited tables, the symbol pairs
/// achievable by combining them, and the background option group.
#[derive(Clone, Debug)]
pub struct BmAnalysis {
    pub tables: Vec<LocalTable>,
    pub achievable: Vec<(i32, i32)>,
    pub background: Vec<(i32, i32)>,
}

#[derive(Clone, Debug)]
pub enum BmOutcome {
    /// Some combination of admissible local data makes both adelic products
    /// trivial: no obstruction, a rational point exists.
    Passable(BmAnalysis),
    /// Every place has local points, but no combination satisfies the
    /// product condition: the variety has no rational point.
    Fails(BmAnalysis),
    /// Some completion has no local point at all.
    LocallyInsoluble { place: Place, analysis: BmAnalysis },
}

/// Rescales a quadratic element onto the squarefree kernel of its radicand:
/// x + y√q = x + (yt)√k when q = k·t².
fn kernel_quad(q: &QuadElem) -> Result<(Int, QuadElem), FactorError> {
    let k = square_class(&q.a)?.rep;
    let rk = rat(k.clone());
    let t = sqrt_rat(&(&q.a / &rk)).expect("quotient by the square class is a square");
    Ok((k, QuadElem::new(rk, q.x.clone(), &q.y * &t)))
}

fn least_nonresidue(p: &Int) -> Int {
    let mut n = int(2);
    while legendre(&n, p) != -1 {
        n += int(1);
    }
    n
}

/// Representatives of ℚ_v*/(ℚ_v*)²: {±1} at the real place, {1, n, p, np}
/// at an odd prime with n the least nonresidue, the eight classes at 2.
fn class_reps(v: &Place) -> Vec<Rat> {
    match v {
        Place::Infinite => vec![rat(1), rat(-1)],
        Place::Finite(p) if p.is_odd() => {
            let n = least_nonresidue(p);
            vec![rat(1), rat(n.clone()), rat(p.clone()), rat(n * p)]
        }
        Place::Finite(_) => [1i64, -1, 5, -5, 2, -2, 10, -10]
            .iter()
            .map(|t| rat(*t))
            .collect(),
    }
}

/// Whether the quaternion symbol (x, y) is trivial at every place of
/// ℚ(√m) ⊗ ℚ_v, where x, y are elements of ℚ(√m); m = 1 means the split
/// algebra ℚ × ℚ with components x ± y.
fn quad_pair_trivial(
    m: &Int,
    v: &Place,
    x: &QuadElem,
    y: &QuadElem,
    ctx: &mut DyadicContext,
) -> bool {
    if m.is_one() {
        let xs = [&x.x + &x.y, &x.x - &x.y];
        let ys = [&y.x + &y.y, &y.x - &y.y];
        xs.iter()
            .zip(ys.iter())
            .all(|(xc, yc)| hilbert_symbol(xc, yc, v) == 1)
    } else {
        quad_symbols_above(m, v, x, y, ctx)
            .iter()
            .all(|s| *s == 1)
    }
}

/// Whether u²·bs + v²·cs = 1 is solvable over 𝓔 ⊗ ℚ_v, where
/// 𝓔 = ℚ[X,Y]/(X²−ka, Y²−kd), bs ∈ ℚ(√ka), cs ∈ ℚ(√kd): equivalently the
/// symbol (bs, cs) is trivial at every place of every component of 𝓔 above
/// v. The component structure follows the square classes of ka, kd and
/// ka·kd.
fn fundamental_locally_solvable(
    ka: &Int,
    kd: &Int,
    bs: &QuadElem,
    cs: &QuadElem,
    v: &Place,
    ctx: &mut DyadicContext,
) -> bool {
    let ra = rat(ka.clone());
    let rd = rat(kd.clone());
    if ka.is_one() && kd.is_one() {
        let bvals = [&bs.x + &bs.y, &bs.x - &bs.y];
        let cvals = [&cs.x + &cs.y, &cs.x - &cs.y];
        bvals
            .iter()
            .all(|x| cvals.iter().all(|y| hilbert_symbol(x, y, v) == 1))
    } else if ka.is_one() {
        [&bs.x + &bs.y, &bs.x - &bs.y].iter().all(|x| {
            quad_pair_trivial(
                kd,
                v,
                &QuadElem::from_rat(rd.clone(), (*x).clone()),
                cs,
                ctx,
            )
        })
    } else if kd.is_one() {
        [&cs.x + &cs.y, &cs.x - &cs.y].iter().all(|y| {
            quad_pair_trivial(
                ka,
                v,
                bs,
                &QuadElem::from_rat(ra.clone(), (*y).clone()),
                ctx,
            )
        })
    } else if ka == kd {
        // 𝓔 ≅ ℚ(√ka) × ℚ(√ka) via Y ↦ ±X
        quad_pair_trivial(ka, v, bs, cs, ctx) && quad_pair_trivial(ka, v, bs, &cs.conj(), ctx)
    } else {
        // distinct squarefree kernels: genuine quartic algebra
        let be = EtaleElem::from_quad_a(bs, rd);
        let ce = EtaleElem::from_quad_d(cs, ra);
        match v {
            Place::Infinite => etale_real_symbols(&be, &ce).iter().all(|s| *s == 1),
            Place::Finite(p) if p.is_odd() => etale_odd_places(ka, kd, p)
                .iter()
                .all(|w| w.symbol(&be, &ce) == 1),
            Place::Finite(_) => cup_symbols_over_e(&be, &ce, ctx)
                .symbols
                .iter()
                .filter(|ps| ps.place.starts_with("2#"))
                .all(|ps| ps.symbol == 1),
        }
    }
}

fn check_basepoints(a: &Rat, b: &Rat, c: &Rat, d: &Rat, bt0: &QuadElem, ct0: &QuadElem) {
    assert!(
        !a.is_zero() && !b.is_zero() && !c.is_zero() && !d.is_zero(),
        "entries must be nonzero"
    );
    assert!(
        is_square_rat(&(a / &bt0.a)) && is_square_rat(&(d / &ct0.a)),
        "basepoint radicands must match a and d up to squares"
    );
    let nb = quad_norm(bt0);
    let nc = quad_norm(ct0);
    assert!(!nb.is_zero() && !nc.is_zero(), "basepoints must be units");
    assert!(
        is_square_rat(&(&nb / b)) && is_square_rat(&(&nc / c)),
        "basepoint norms must match b and c up to squares"
    );
}

/// The admissibility table at one place v. A local point of the splitting
/// variety with coordinate classes (β, γ) exists at v exactly when
///
/// 1. (b, c) splits at v,
/// 2. (β·B̃₀, c) splits at every place of ℚ(√a) ⊗ ℚ_v,
/// 3. (b, γ·C̃₀) splits at every place of ℚ(√d) ⊗ ℚ_v,
/// 4. (β·B̃₀, γ·C̃₀) splits at every place of 𝓔 ⊗ ℚ_v,
///
/// and the row records that verdict together with the obstruction symbols
/// (β, c)_v and (γ, b)_v.
pub fn local_table(
    a: &Rat,
    b: &Rat,
    c: &Rat,
    d: &Rat,
    bt0: &QuadElem,
    ct0: &QuadElem,
    v: &Place,
) -> Result<LocalTable, FactorError> {
    check_basepoints(a, b, c, d, bt0, ct0);
    let (ka, bk) = kernel_quad(bt0)?;
    let (kd, ck) = kernel_quad(ct0)?;
    let kb = rat(square_class(&quad_norm(bt0))?.rep);
    let kc = rat(square_class(&quad_norm(ct0))?.rep);
    let ra = rat(ka.clone());
    let rd = rat(kd.clone());
    let kc_in_a = QuadElem::from_rat(ra, kc.clone());
    let kb_in_d = QuadElem::from_rat(rd, kb.clone());
    let mut ctx = DyadicContext::new();
    let sym_bc = hilbert_symbol(&kb, &kc, v);

    let reps = class_reps(v);
    let mut rows = Vec::with_capacity(reps.len() * reps.len());
    for beta in &reps {
        let bscaled = bk.scale(beta);
        for gamma in &reps {
            let cscaled = ck.scale(gamma);
            let admissible = sym_bc == 1
                && quad_pair_trivial(&ka, v, &bscaled, &kc_in_a, &mut ctx)
                && quad_pair_trivial(&kd, v, &kb_in_d, &cscaled, &mut ctx)
                && fundamental_locally_solvable(&ka, &kd, &bscaled, &cscaled, v, &mut ctx);
            rows.push(LocalRow {
                beta: beta.clone(),
                gamma: gamma.clone(),
                admissible,
                sym_beta_c: hilbert_symbol(beta, &kc, v),
                sym_gamma_b: hilbert_symbol(gamma, &kb, v),
            });
        }
    }
    Ok(LocalTable {
        place: v.clone(),
        rows,
    })
}

/// The symbol pairs achievable at the non-audited places. At a prime not
/// dividing the conductor data, everything is determined by the signs
/// ε = (χ_p(ka), χ_p(kb), χ_p(kc), χ_p(kd)); a sign pattern occurs at
/// infinitely many such primes exactly when it respects every square
/// relation among subset products of the kernels. Per pattern, a local
/// point with a nontrivial symbol pair needs a uniformizer in β (possible
/// only when ε_a = ε_c = −1, giving (−1, +1)), in γ (ε_b = ε_d = −1,
/// giving (+1, −1)), or in both (ε_a = ε_d = −1 with ε_b = ε_c = −1,
/// giving (−1, −1)); the group generated over all consistent patterns is
/// the background contribution.
pub fn background_options(ka: &Int, kb: &Int, kc: &Int, kd: &Int) -> BTreeSet<(i32, i32)> {
    let ks = [ka, kb, kc, kd];
    let mut opts: BTreeSet<(i32, i32)> = BTreeSet::new();
    opts.insert((1, 1));
    for mask in 0u32..16 {
        let eps: [i32; 4] = core::array::from_fn(|i| if mask & (1 << i) != 0 { -1 } else { 1 });
        let consistent = (1u32..16).all(|sub| {
            let mut prod = Int::one();
            let mut sign = 1i32;
            for (i, k) in ks.iter().enumerate() {
                if sub & (1 << i) != 0 {
                    prod *= *k;
                    sign *= eps[i];
                }
            }
            !is_square_int(&prod) || sign == 1
        });
        if !consistent {
            continue;
        }
        let (ea, eb, ec, ed) = (eps[0], eps[1], eps[2], eps[3]);
        match (ea, ed) {
            (1, 1) => {}
            (1, -1) => {
                if eb == -1 {
                    opts.insert((1, -1));
                }
            }
            (-1, 1) => {
                if ec == -1 {
                    opts.insert((-1, 1));
                }
            }
            _ => {
                if eb == -1 && ec == -1 {
                    opts.insert((-1, -1));
                }
            }
        }
    }
    loop {
        let cur: Vec<(i32, i32)> = opts.iter().copied().collect();
        let mut grew = false;
        for x in &cur {
            for y in &cur {
                if opts.insert((x.0 * y.0, x.1 * y.1)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    opts
}

/// The adelic product test. Audits the finitely many places where the
/// tables can be nontrivial (∞, 2, and the odd primes dividing the
/// radicand kernels, the basepoint norms, or the basepoint coordinate
/// denominators), folds the admissible symbol pairs across them, and asks
/// whether the background group can cancel some achievable pair. Fails
/// certifies that the splitting variety has no rational point.
pub fn brauer_manin_scan(
    a: &Rat,
    b: &Rat,
    c: &Rat,
    d: &Rat,
    bt0: &QuadElem,
    ct0: &QuadElem,
) -> Result<BmOutcome, FactorError> {
    check_basepoints(a, b, c, d, bt0, ct0);
    let (ka, bk) = kernel_quad(bt0)?;
    let (kd, ck) = kernel_quad(ct0)?;
    let nb = quad_norm(bt0);
    let nc = quad_norm(ct0);
    let kb = square_class(&nb)?.rep;
    let kc = square_class(&nc)?.rep;

    let mut acc = int(2) * &ka * &kd;
    acc *= nb.numer() * nb.denom();
    acc *= nc.numer() * nc.denom();
    for coord in [&bk.x, &bk.y, &ck.x, &ck.y] {
        acc *= coord.denom();
    }
    let mut audited = vec![Place::Infinite, Place::finite(2)];
    for (p, _) in factor(&acc.abs())?.factors {
        if p.is_odd() && p > int(1) {
            audited.push(Place::Finite(p));
        }
    }

    let background = background_options(&ka, &kb, &kc, &kd);
    let mut tables = Vec::with_capacity(audited.len());
    for v in &audited {
        tables.push(local_table(a, b, c, d, bt0, ct0, v)?);
    }

    let bg: Vec<(i32, i32)> = background.iter().copied().collect();
    if let Some(t) = tables.iter().find(|t| !t.has_admissible()) {
        let place = t.place.clone();
        return Ok(BmOutcome::LocallyInsoluble {
            place,
            analysis: BmAnalysis {
                tables,
                achievable: Vec::new(),
                background: bg,
            },
        });
    }

    let mut achievable: BTreeSet<(i32, i32)> = BTreeSet::new();
    achievable.insert((1, 1));
    for t in &tables {
        let opts = t.options();
        achievable = achievable
            .iter()
            .flat_map(|x| opts.iter().map(move |y| (x.0 * y.0, x.1 * y.1)))
            .collect();
    }

    let pass = achievable.iter().any(|x| background.contains(x));
    let analysis = BmAnalysis {
        tables,
        achievable: achievable.into_iter().collect(),
        background: bg,
    };
    Ok(if pass {
        BmOutcome::Passable(analysis)
    } else {
        BmOutcome::Fails(analysis)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::massey::norm_element;

    fn q(n: i64) -> Rat {
        rat(n)
    }

    fn basepoints_34_2_17_34() -> (QuadElem, QuadElem) {
        let bt0 = QuadElem::new(q(34), q(6), q(1));
        assert_eq!(quad_norm(&bt0), q(2));
        let mut budget = Budget::new(100_000);
        let ct0 = norm_element(&q(34), &q(17), &mut budget).expect("norm 17 exists over sqrt 34");
        (bt0, ct0)
    }

    #[test]
    fn background_group_collapses_for_the_tied_kernels() {
        // ka·kd and ka·kb·kc are squares, so every consistent pattern has
        // ε_a = ε_d and ε_b ≠ ε_c whenever ε_a = −1: no option survives.
        let opts = background_options(&int(34), &int(2), &int(17), &int(34));
        assert_eq!(opts.len(), 1);
        assert!(opts.contains(&(1, 1)));
    }

    #[test]
    fn background_group_is_full_for_independent_kernels() {
        let opts = background_options(&int(5), &int(3), &int(7), &int(13));
        assert_eq!(opts.len(), 4);
    }

    #[test]
    fn table_at_seventeen_forces_the_beta_symbol() {
        let (bt0, ct0) = basepoints_34_2_17_34();
        let t = local_table(
            &q(34),
            &q(2),
            &q(17),
            &q(34),
            &bt0,
            &ct0,
            &Place::finite(17),
        )
        .unwrap();
        assert!(t.has_admissible());
        for r in t.rows.iter().filter(|r| r.admissible) {
            assert_eq!(r.sym_beta_c, -1, "beta {} gamma {}", r.beta, r.gamma);
        }
    }

    #[test]
    fn table_at_two_keeps_the_beta_symbol_trivial() {
        let (bt0, ct0) = basepoints_34_2_17_34();
        let t = local_table(
            &q(34),
            &q(2),
            &q(17),
            &q(34),
            &bt0,
            &ct0,
            &Place::finite(2),
        )
        .unwrap();
        assert!(t.has_admissible());
        for r in t.rows.iter().filter(|r| r.admissible) {
            assert_eq!(r.sym_beta_c, 1, "beta {} gamma {}", r.beta, r.gamma);
        }
    }

    #[test]
    fn table_at_infinity_has_only_the_trivial_option() {
        let (bt0, ct0) = basepoints_34_2_17_34();
        let t = local_table(
            &q(34),
            &q(2),
            &q(17),
            &q(34),
            &bt0,
            &ct0,
            &Place::Infinite,
        )
        .unwrap();
        let opts = t.options();
        assert_eq!(opts.len(), 1);
        assert!(opts.contains(&(1, 1)));
    }

    #[test]
    fn scan_certifies_the_product_failure() {
        let (bt0, ct0) = basepoints_34_2_17_34();
        match brauer_manin_scan(&q(34), &q(2), &q(17), &q(34), &bt0, &ct0).unwrap() {
            BmOutcome::Fails(analysis) => {
                assert!(analysis.achievable.iter().all(|x| x.0 == -1));
                assert_eq!(analysis.background, vec![(1, 1)]);
            }
            BmOutcome::Passable(_) => panic!("expected a certified failure, scan passed"),
            BmOutcome::LocallyInsoluble { place, .. } => {
                panic!("expected a product failure, got insolubility at {place}")
            }
        }
    }

    #[test]
    fn scan_is_invariant_under_basepoint_rescaling() {
        // replacing B̃₀ by 7·B̃₀ changes the audited set and the tables but
        // not the verdict
        let (bt0, ct0) = basepoints_34_2_17_34();
        let scaled = bt0.scale(&q(7));
        match brauer_manin_scan(&q(34), &q(2), &q(17), &q(34), &scaled, &ct0).unwrap() {
            BmOutcome::Fails(_) => {}
            _ => panic!("expected the same certified failure after rescaling"),
        }
    }
}
