//! Closed-form certificates for the kernel shapes ⟨a,b,a,a⟩, ⟨a,a,a,a⟩ and
//! ⟨a,b,a,d⟩: whenever the first and third entries agree modulo squares, the
//! fundamental equation can be solved by linear algebra around an explicit
//! norm-one element instead of by search.

use num_traits::{One, Zero};

use super::{norm_element, Kernels, MasseyCertificate};
use crate::budget::Budget;
use crate::conic::SolveOutcome;
use crate::etale::{etale_mul, quad_norm, EtaleElem, QuadElem};
use crate::local::{quad_relevant_places, quad_symbols_above, DyadicContext};
use crate::numtheory::{rat, Rat};

/// The three shapes with closed-form recipes, named by the square-class
/// pattern of (first, second, third, fourth): the first and third kernels
/// always agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecipeShape {
    /// ⟨a,b,a,a⟩ with \[b\] ≠ \[a\], no square entries.
    Abaa,
    /// ⟨a,a,a,a⟩, a nonsquare.
    Aaaa,
    /// ⟨a,b,a,d⟩ with \[d\] ≠ \[a\], no square entries.
    Abad,
}

impl core::fmt::Display for RecipeShape {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RecipeShape::Abaa => write!(f, "abaa"),
            RecipeShape::Aaaa => write!(f, "aaaa"),
            RecipeShape::Abad => write!(f, "abad"),
        }
    }
}

/// Classifies the squarefree kernels into a recipe shape: the first and
/// third must agree, no kernel may be 1.
pub fn recipe_shape(ka: &Rat, kb: &Rat, kc: &Rat, kd: &Rat) -> Option<RecipeShape> {
    if ka.is_one() || kb.is_one() || kc.is_one() || kd.is_one() {
        return None;
    }
    if kc != ka {
        return None;
    }
    if kd == ka {
        if kb == ka {
            Some(RecipeShape::Aaaa)
        } else {
            Some(RecipeShape::Abaa)
        }
    } else {
        Some(RecipeShape::Abad)
    }
}

/// Runs the closed-form recipe for the given shape. Returns None when the
/// entries do not actually have that shape (hypotheses violated), when a
/// required conic has no rational point, or when factoring fails; every
/// returned certificate satisfies `verify_certificate`.
pub fn special_recipes(
    shape: RecipeShape,
    a: &Rat,
    b: &Rat,
    c: &Rat,
    d: &Rat,
    budget: &mut Budget,
    seed: u64,
) -> Option<MasseyCertificate> {
    if a.is_zero() || b.is_zero() || c.is_zero() || d.is_zero() {
        return None;
    }
    let kern = Kernels::of(a, b, c, d).ok()?;
    if recipe_shape(&kern.ka, &kern.kb, &kern.kc, &kern.kd)? != shape {
        return None;
    }
    match shape {
        RecipeShape::Abaa => recipe_abaa(&kern, budget, seed),
        RecipeShape::Aaaa => recipe_aaaa(&kern, budget, seed),
        RecipeShape::Abad => recipe_abad(&kern, budget),
    }
}

fn package(
    kern: &Kernels,
    bt: &QuadElem,
    ct: &QuadElem,
    beta: Rat,
    gamma: Rat,
    u: EtaleElem,
    v: EtaleElem,
) -> MasseyCertificate {
    MasseyCertificate {
        bt: bt.clone(),
        ct: ct.clone(),
        z1: kern.tb.recip(),
        z2: kern.tc.recip(),
        beta,
        gamma,
        u,
        v,
    }
}

/// The common engine: given B₀ of norm kb over √ka and C₀ of norm exactly
/// ka over √kd, the element x = 1 + (C̄₀/ka)·X satisfies the ring identity
/// C̃₀·x² = 2r + 2X in 𝓔 = ℚ[X,Y]/(X²−ka, Y²−kd), where C₀ = r + s√kd.
/// This moves the C-side into ℚ[X]/(X²−ka), where βB₀ + γ(2r+2X) = 1 is a
/// 2×2 linear system; when B₀ is proportional to 2r+2√ka the system is
/// singular and the identity 1 = B₀(u−w)(u+w) with u−w = 1, u+w = B₀⁻¹
/// supplies the witness instead.
fn hilbert_witness(
    bt0: &QuadElem,
    ct0: &QuadElem,
    ka: &Rat,
    kd: &Rat,
) -> Option<(Rat, Rat, EtaleElem, EtaleElem)> {
    debug_assert_eq!(quad_norm(ct0), *ka, "C-basepoint must have norm exactly a");
    let (p, q) = (&bt0.x, &bt0.y);
    let (r, s) = (&ct0.x, &ct0.y);
    let x = EtaleElem::new(
        ka.clone(),
        kd.clone(),
        rat(1),
        r / ka,
        rat(0),
        -(s / ka),
    );
    debug_assert_eq!(
        etale_mul(
            &etale_mul(&x, &x),
            &EtaleElem::from_quad_d(ct0, ka.clone())
        ),
        EtaleElem::from_quad_a(
            &QuadElem::new(ka.clone(), rat(2) * r, rat(2)),
            kd.clone()
        )
    );
    let det = rat(2) * p - rat(2) * r * q;
    if !det.is_zero() {
        // β·B₀ + γ·(2r + 2X) = 1 by Cramer; γ = −q/det ≠ 0 since kb is not
        // a square, so both modifiers are legitimate
        let beta = rat(2) / &det;
        let gamma = -(q / &det);
        if gamma.is_zero() {
            return None;
        }
        let u = EtaleElem::one(ka.clone(), kd.clone());
        Some((beta, gamma, u, x))
    } else {
        // B₀ = (q/2)·(2r + 2√ka) exactly
        let h = q / rat(2);
        if h.is_zero() {
            return None;
        }
        let nb = quad_norm(bt0);
        let binv = bt0.conj().scale(&nb.recip());
        let uq = QuadElem::new(
            ka.clone(),
            (rat(1) + &binv.x) / rat(2),
            binv.y.clone() / rat(2),
        );
        let wq = QuadElem::new(
            ka.clone(),
            (&binv.x - rat(1)) / rat(2),
            binv.y.clone() / rat(2),
        );
        let u = EtaleElem::from_quad_a(&uq, kd.clone());
        let v = etale_mul(&x, &EtaleElem::from_quad_a(&wq, kd.clone()));
        Some((rat(1), -h, u, v))
    }
}

/// ⟨a,b,a,a⟩: both basepoints live over √a, so βB₀ + γC₀ = 1 is a rational
/// 2×2 system (nonsingular because [b] ≠ [a]); with that relation the
/// diagonal component of the fundamental equation is solved by (1,1) and
/// the other component is searched briefly. If the search misses, the
/// norm-one engine gives an unconditional witness.
fn recipe_abaa(kern: &Kernels, budget: &mut Budget, seed: u64) -> Option<MasseyCertificate> {
    let bt0 = norm_element(&kern.ka, &kern.kb, budget)?;
    let ct0 = norm_element(&kern.ka, &kern.ka, budget)?;
    let det = &bt0.x * &ct0.y - &bt0.y * &ct0.x;
    if !det.is_zero() {
        let beta = &ct0.y / &det;
        let gamma = -(&bt0.y / &det);
        if !beta.is_zero() && !gamma.is_zero() {
            let bte = EtaleElem::from_quad_a(&bt0, kern.ka.clone());
            let cte = EtaleElem::from_quad_d(&ct0, kern.ka.clone());
            let mut probe = budget.child(12_000);
            let got = crate::conic::solve_fundamental(&bte, &cte, &beta, &gamma, &mut probe, seed);
            budget.absorb(&probe);
            if let SolveOutcome::Solved(w) = got {
                return Some(package(kern, &bt0, &ct0, beta, gamma, w.u, w.v));
            }
        }
    }
    let (beta, gamma, u, v) = hilbert_witness(&bt0, &ct0, &kern.ka, &kern.ka)?;
    Some(package(kern, &bt0, &ct0, beta, gamma, u, v))
}

/// ⟨a,a,a,a⟩: with C̃₀ = B̃₀ and γ = β, the two components of the equation
/// are (βB₀, βB₀) and (βB₀, βB̄₀) over ℚ(√a); B₀B̄₀ = a is a square there,
/// so both reduce to (βB₀, −1). The recipe searches a bounded list of β
/// for which that symbol is trivial everywhere and then hunts the witness,
/// giving a certificate with C = B; the norm-one engine is the fallback
/// (its certificate has C ≠ B).
fn recipe_aaaa(kern: &Kernels, budget: &mut Budget, seed: u64) -> Option<MasseyCertificate> {
    let bt0 = norm_element(&kern.ka, &kern.ka, budget)?;
    let ka_int = kern.ka.to_integer();
    let pool = super::scalar_pool(&[&kern.ka]);
    let cands = super::candidate_scalars(&pool, 24, seed ^ 0xaaaa);
    let neg_one = QuadElem::from_rat(kern.ka.clone(), rat(-1));
    let mut ctx = DyadicContext::new();
    for beta in &cands {
        if budget.exhausted() {
            break;
        }
        let _ = budget.charge(1);
        let scaled = bt0.scale(beta);
        let mut trivial = true;
        'places: for v in quad_relevant_places(&ka_int, &[&scaled, &neg_one]) {
            for s in quad_symbols_above(&ka_int, &v, &scaled, &neg_one, &mut ctx) {
                if s == -1 {
                    trivial = false;
                    break 'places;
                }
            }
        }
        if !trivial {
            continue;
        }
        let bte = EtaleElem::from_quad_a(&bt0, kern.ka.clone());
        let cte = EtaleElem::from_quad_d(&bt0, kern.ka.clone());
        let mut probe = budget.child(40_000);
        let got = crate::conic::solve_fundamental(&bte, &cte, beta, beta, &mut probe, seed);
        budget.absorb(&probe);
        if let SolveOutcome::Solved(w) = got {
            return Some(package(kern, &bt0, &bt0, beta.clone(), beta.clone(), w.u, w.v));
        }
    }
    let (beta, gamma, u, v) = hilbert_witness(&bt0, &bt0, &kern.ka, &kern.ka)?;
    Some(package(kern, &bt0, &bt0, beta, gamma, u, v))
}

/// ⟨a,b,a,d⟩ with \[d\] ≠ \[a\]: the norm-one engine applies directly, since
/// the C-basepoint solves x² − d·y² = a, and no search is needed at all.
fn recipe_abad(kern: &Kernels, budget: &mut Budget) -> Option<MasseyCertificate> {
    let bt0 = norm_element(&kern.ka, &kern.kb, budget)?;
    let ct0 = norm_element(&kern.kd, &kern.ka, budget)?;
    let (beta, gamma, u, v) = hilbert_witness(&bt0, &ct0, &kern.ka, &kern.kd)?;
    Some(package(kern, &bt0, &ct0, beta, gamma, u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::massey::verify_certificate;

    fn q(n: i64) -> Rat {
        rat(n)
    }

    #[test]
    fn shape_detection() {
        assert_eq!(recipe_shape(&q(5), &q(11), &q(5), &q(5)), Some(RecipeShape::Abaa));
        assert_eq!(recipe_shape(&q(5), &q(5), &q(5), &q(5)), Some(RecipeShape::Aaaa));
        assert_eq!(recipe_shape(&q(5), &q(11), &q(5), &q(11)), Some(RecipeShape::Abad));
        assert_eq!(recipe_shape(&q(5), &q(5), &q(5), &q(11)), Some(RecipeShape::Abad));
        assert_eq!(recipe_shape(&q(5), &q(11), &q(7), &q(5)), None);
        assert_eq!(recipe_shape(&q(1), &q(11), &q(1), &q(5)), None);
    }

    #[test]
    fn abaa_recipe_certifies() {
        let mut budget = Budget::new(50_000);
        let cert = special_recipes(RecipeShape::Abaa, &q(5), &q(11), &q(5), &q(5), &mut budget, 1)
            .expect("recipe applies");
        assert!(verify_certificate(&q(5), &q(11), &q(5), &q(5), &cert));
    }

    #[test]
    fn aaaa_recipe_certifies() {
        let mut budget = Budget::new(200_000);
        let cert = special_recipes(RecipeShape::Aaaa, &q(5), &q(5), &q(5), &q(5), &mut budget, 1)
            .expect("recipe applies");
        assert!(verify_certificate(&q(5), &q(5), &q(5), &q(5), &cert));
    }

    #[test]
    fn abad_recipe_certifies_singular_case() {
        // here B₀ is proportional to 2r + 2√a, exercising the split
        // 1 = B₀(u−w)(u+w)
        let mut budget = Budget::new(50_000);
        let cert = special_recipes(RecipeShape::Abad, &q(5), &q(11), &q(5), &q(11), &mut budget, 1)
            .expect("recipe applies");
        assert!(verify_certificate(&q(5), &q(11), &q(5), &q(11), &cert));
    }

    #[test]
    fn abad_recipe_certifies_regular_case() {
        let mut budget = Budget::new(50_000);
        let cert = special_recipes(RecipeShape::Abad, &q(5), &q(29), &q(5), &q(11), &mut budget, 1)
            .expect("recipe applies");
        assert!(verify_certificate(&q(5), &q(29), &q(5), &q(11), &cert));
    }

    #[test]
    fn scaled_entries_still_certify() {
        // kernels drive the recipe; scales land in z₁, z₂
        let mut budget = Budget::new(50_000);
        let cert = special_recipes(
            RecipeShape::Abad,
            &q(20),
            &q(44),
            &q(45),
            &q(99),
            &mut budget,
            1,
        )
        .expect("recipe applies");
        assert!(verify_certificate(&q(20), &q(44), &q(45), &q(99), &cert));
    }

    #[test]
    fn hypotheses_violated_gives_none() {
        let mut budget = Budget::new(50_000);
        assert!(special_recipes(RecipeShape::Abaa, &q(5), &q(5), &q(5), &q(5), &mut budget, 1)
            .is_none());
        assert!(special_recipes(RecipeShape::Abad, &q(5), &q(11), &q(5), &q(5), &mut budget, 1)
            .is_none());
        assert!(special_recipes(RecipeShape::Aaaa, &q(5), &q(11), &q(5), &q(5), &mut budget, 1)
            .is_none());
    }
}
