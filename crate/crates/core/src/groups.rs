//! Unitriangular groups over 𝔽₂ and exhaustive 2-cocycle verification.
//!
//! Everything here is finite and checked by enumeration: upper unitriangular
//! n×n matrices for n ≤ 5 (the 3×3 group is dihedral of order 8), explicit
//! group extensions with their 2-cocycles, coboundary testing by 𝔽₂ linear
//! algebra, corestriction of characters along index-2 inclusions, and the
//! structural facts about the order-16 corner subgroup of the 5×5 group that
//! the rest of the library leans on. Group orders stay at or below 1024 and
//! coboundary systems at or below 64 unknowns, so every check is exact and
//! exhaustive.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Bit position of the (i, j) entry, 0-indexed, i < j < 5, rows packed in
/// order (0,1) (0,2) (0,3) (0,4) (1,2) (1,3) (1,4) (2,3) (2,4) (3,4).
fn bit_index(i: usize, j: usize) -> u32 {
    debug_assert!(i < j && j < 5);
    const ROW_OFF: [u32; 4] = [0, 4, 7, 9];
    ROW_OFF[i] + (j - i - 1) as u32
}

fn valid_mask(n: u8) -> u16 {
    let n = n as usize;
    let mut m = 0u16;
    for i in 0..n {
        for j in (i + 1)..n {
            m |= 1 << bit_index(i, j);
        }
    }
    m
}

/// An upper unitriangular matrix over 𝔽₂, n ≤ 5. The implicit diagonal is
/// all ones; the strictly-upper entries are packed into `bits`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct UnitriMat {
    n: u8,
    bits: u16,
}

impl UnitriMat {
    pub fn identity(n: u8) -> Self {
        assert!((2..=5).contains(&n));
        UnitriMat { n, bits: 0 }
    }

    pub fn from_bits(n: u8, bits: u16) -> Self {
        assert!((2..=5).contains(&n));
        assert_eq!(bits & !valid_mask(n), 0, "entry outside the matrix");
        UnitriMat { n, bits }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    /// The (i, j) entry, with the unitriangular convention: 1 on the
    /// diagonal, 0 below it.
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        assert!(i < self.n as usize && j < self.n as usize);
        if i == j {
            1
        } else if i > j {
            0
        } else {
            (self.bits >> bit_index(i, j) & 1) as u8
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        assert!(i < j && j < self.n as usize);
        let b = 1u16 << bit_index(i, j);
        if v & 1 == 1 {
            self.bits |= b;
        } else {
            self.bits &= !b;
        }
    }

    pub fn with(mut self, i: usize, j: usize, v: u8) -> Self {
        self.set(i, j, v);
        self
    }

    /// The generator with a single 1 on the near-diagonal, at row i
    /// (1-indexed, 1 ≤ i < n). An involution; these generate the group.
    pub fn sigma(n: u8, i: usize) -> Self {
        assert!(i >= 1 && i < n as usize);
        Self::identity(n).with(i - 1, i, 1)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n as usize;
        let mut r = Self::identity(self.n);
        for i in 0..n {
            for j in (i + 1)..n {
                let mut acc = 0u8;
                for k in i..=j {
                    acc ^= self.entry(i, k) & o.entry(k, j);
                }
                r.set(i, j, acc);
            }
        }
        r
    }

    pub fn inv(&self) -> Self {
        let id = Self::identity(self.n);
        let mut p = *self;
        let mut prev = id;
        while p != id {
            prev = p;
            p = p.mul(self);
        }
        prev
    }

    /// by · self · by⁻¹
    pub fn conj(&self, by: &Self) -> Self {
        by.mul(self).mul(&by.inv())
    }

    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).mul(&a.inv()).mul(&b.inv())
    }

    /// Reflection across the antidiagonal followed by inversion. An
    /// automorphism that exchanges the near-diagonal generators in reverse
    /// order (row i with row n−i).
    pub fn flip(&self) -> Self {
        let n = self.n as usize;
        let mut r = Self::identity(self.n);
        for i in 0..n {
            for j in (i + 1)..n {
                r.set(n - 1 - j, n - 1 - i, self.entry(i, j));
            }
        }
        r.inv()
    }

    /// Near-diagonal entry at row i (1-indexed); a group homomorphism to 𝔽₂.
    pub fn s(&self, i: usize) -> u8 {
        assert!(i >= 1 && i < self.n as usize);
        self.entry(i - 1, i)
    }

    /// Top-right entry of the 3×3 group (not a homomorphism).
    pub fn t(&self) -> u8 {
        assert_eq!(self.n, 3);
        self.entry(0, 2)
    }

    pub fn t1(&self) -> u8 {
        assert_eq!(self.n, 5);
        self.entry(0, 2)
    }

    pub fn t2(&self) -> u8 {
        assert_eq!(self.n, 5);
        self.entry(2, 4)
    }

    pub fn u1(&self) -> u8 {
        assert_eq!(self.n, 5);
        self.entry(0, 3)
    }

    pub fn u2(&self) -> u8 {
        assert_eq!(self.n, 5);
        self.entry(1, 4)
    }

    pub fn u3(&self) -> u8 {
        assert_eq!(self.n, 5);
        self.entry(1, 3)
    }

    pub fn z(&self) -> u8 {
        assert_eq!(self.n, 5);
        self.entry(0, 4)
    }
}

/// All 2^(n(n−1)/2) unitriangular matrices, sorted by packed bits.
pub fn unitri_group(n: u8) -> Vec<UnitriMat> {
    let mask = valid_mask(n);
    let mut pos = Vec::new();
    for b in 0..16u32 {
        if mask >> b & 1 == 1 {
            pos.push(b);
        }
    }
    let mut out = Vec::with_capacity(1 << pos.len());
    for code in 0u32..(1 << pos.len()) {
        let mut bits = 0u16;
        for (k, &b) in pos.iter().enumerate() {
            if code >> k & 1 == 1 {
                bits |= 1 << b;
            }
        }
        out.push(UnitriMat { n, bits });
    }
    out.sort();
    out
}

/// The subgroup generated by `gens`, sorted by packed bits.
pub fn closure(gens: &[UnitriMat]) -> Vec<UnitriMat> {
    assert!(!gens.is_empty());
    let n = gens[0].n;
    let mut seen = BTreeSet::new();
    seen.insert(UnitriMat::identity(n).bits);
    let mut frontier = vec![UnitriMat::identity(n)];
    while let Some(m) = frontier.pop() {
        for g in gens {
            let p = m.mul(g);
            if seen.insert(p.bits) {
                frontier.push(p);
            }
        }
    }
    seen.into_iter().map(|bits| UnitriMat { n, bits }).collect()
}

/// Row-reduces over 𝔽₂ and returns the rank. Rows are bitsets of `cols` bits.
fn gf2_rank(mut rows: Vec<Vec<u64>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let (w, b) = (c / 64, c % 64);
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] >> b & 1 == 1 {
                for (x, y) in row.iter_mut().zip(pivot.iter()) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Decides solvability of a linear system over 𝔽₂ with at most 64 unknowns;
/// each row is (coefficient bitset, right-hand side).
fn gf2_solvable(mut rows: Vec<(u64, bool)>, cols: usize) -> bool {
    assert!(cols <= 64);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].0 >> c & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let (pc, pr) = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.0 >> c & 1 == 1 {
                row.0 ^= pc;
                row.1 ^= pr;
            }
        }
        rank += 1;
    }
    rows.iter().all(|&(coef, rhs)| coef != 0 || !rhs)
}

/// A finite group given by its full multiplication table. Constructors
/// verify the group axioms: identity, inverses, cancellation, and (for
/// orders up to 64) associativity over all triples.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    id: usize,
    /// Indices of distinguished generators, when the construction has any.
    pub gens: Vec<usize>,
}

impl FiniteGroup {
    fn from_table(order: usize, mul: Vec<u16>) -> Self {
        assert!(order >= 1 && order <= u16::MAX as usize);
        assert_eq!(mul.len(), order * order);
        let mut id = None;
        for e in 0..order {
            if (0..order).all(|g| {
                mul[e * order + g] == g as u16 && mul[g * order + e] == g as u16
            }) {
                id = Some(e);
                break;
            }
        }
        let id = id.expect("no identity element");
        let mut inv = vec![0u16; order];
        for g in 0..order {
            let gi = (0..order)
                .find(|&h| mul[g * order + h] == id as u16)
                .expect("no inverse");
            assert_eq!(mul[gi * order + g], id as u16);
            inv[g] = gi as u16;
        }
        for g in 0..order {
            let mut seen = vec![false; order];
            for h in 0..order {
                let p = mul[g * order + h] as usize;
                assert!(p < order && !seen[p], "multiplication is not cancellative");
                seen[p] = true;
            }
        }
        if order <= 64 {
            for g in 0..order {
                for h in 0..order {
                    let gh = mul[g * order + h] as usize;
                    for k in 0..order {
                        let hk = mul[h * order + k] as usize;
                        assert_eq!(
                            mul[gh * order + k],
                            mul[g * order + hk],
                            "multiplication is not associative"
                        );
                    }
                }
            }
        }
        FiniteGroup {
            order,
            mul,
            inv,
            id,
            gens: Vec::new(),
        }
    }

    /// Tables a closed set of matrices. Also returns the index of each
    /// matrix by its packed bits.
    pub fn from_mats(mats: &[UnitriMat]) -> (Self, BTreeMap<u16, usize>) {
        let index: BTreeMap<u16, usize> =
            mats.iter().enumerate().map(|(i, m)| (m.bits, i)).collect();
        assert_eq!(index.len(), mats.len(), "duplicate elements");
        let order = mats.len();
        let mut mul = vec![0u16; order * order];
        for (i, a) in mats.iter().enumerate() {
            for (j, b) in mats.iter().enumerate() {
                let p = a.mul(b);
                let k = *index.get(&p.bits).expect("set is not closed under products");
                mul[i * order + j] = k as u16;
            }
        }
        (Self::from_table(order, mul), index)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }
}

/// A subgroup presented with its own table plus the inclusion into the
/// parent's element indices.
pub struct Subgroup {
    pub group: FiniteGroup,
    pub incl: Vec<usize>,
    member: BTreeMap<usize, usize>,
}

impl Subgroup {
    pub fn of(parent: &FiniteGroup, elems: &[usize]) -> Self {
        let member: BTreeMap<usize, usize> =
            elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        assert_eq!(member.len(), elems.len());
        let order = elems.len();
        let mut mul = vec![0u16; order * order];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                let p = parent.mul(a, b);
                let k = *member.get(&p).expect("subset is not closed");
                mul[i * order + j] = k as u16;
            }
        }
        Subgroup {
            group: FiniteGroup::from_table(order, mul),
            incl: elems.to_vec(),
            member,
        }
    }

    pub fn contains(&self, parent_idx: usize) -> bool {
        self.member.contains_key(&parent_idx)
    }

    pub fn index_of(&self, parent_idx: usize) -> Option<usize> {
        self.member.get(&parent_idx).copied()
    }
}

/// A quotient H/K of matrix groups, with the coset map and canonical
/// (minimal-bits) representatives.
pub struct Quotient {
    pub group: FiniteGroup,
    /// Index into `group` for each element of the numerator, in input order.
    pub coset_of: Vec<usize>,
    pub reps: Vec<UnitriMat>,
}

/// Forms H/K for matrix groups K ⊴ H. Normality and closure are verified.
pub fn quotient_by(h: &[UnitriMat], k: &[UnitriMat]) -> Quotient {
    let h_index: BTreeMap<u16, usize> =
        h.iter().enumerate().map(|(i, m)| (m.bits, i)).collect();
    let k_set: BTreeSet<u16> = k.iter().map(|m| m.bits).collect();
    for m in k {
        assert!(h_index.contains_key(&m.bits), "denominator not inside numerator");
    }
    for g in h {
        for x in k {
            assert!(
                k_set.contains(&x.conj(g).bits),
                "denominator is not normal"
            );
        }
    }
    let mut label_of = vec![u16::MAX; h.len()];
    for (i, m) in h.iter().enumerate() {
        let label = k.iter().map(|x| m.mul(x).bits).min().unwrap();
        label_of[i] = label;
    }
    let labels: Vec<u16> = {
        let set: BTreeSet<u16> = label_of.iter().copied().collect();
        set.into_iter().collect()
    };
    let pos: BTreeMap<u16, usize> =
        labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    assert_eq!(labels.len() * k.len(), h.len());
    let n = h[0].n;
    let reps: Vec<UnitriMat> = labels.iter().map(|&bits| UnitriMat { n, bits }).collect();
    let order = labels.len();
    let mut mul = vec![0u16; order * order];
    for (i, a) in reps.iter().enumerate() {
        for (j, b) in reps.iter().enumerate() {
            let p = a.mul(b);
            let pi = *h_index.get(&p.bits).expect("numerator not closed");
            mul[i * order + j] = pos[&label_of[pi]] as u16;
        }
    }
    let coset_of = label_of.iter().map(|l| pos[l]).collect();
    Quotient {
        group: FiniteGroup::from_table(order, mul),
        coset_of,
        reps,
    }
}

/// A homomorphism to 𝔽₂, stored as one value per group element and checked
/// for additivity on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterH1 {
    vals: Vec<u8>,
}

impl CharacterH1 {
    pub fn new(q: &FiniteGroup, vals: Vec<u8>) -> Self {
        assert_eq!(vals.len(), q.order());
        assert!(vals.iter().all(|&v| v <= 1));
        for g in 0..q.order() {
            for h in 0..q.order() {
                assert_eq!(
                    vals[q.mul(g, h)],
                    vals[g] ^ vals[h],
                    "values are not additive"
                );
            }
        }
        CharacterH1 { vals }
    }

    pub fn from_fn(q: &FiniteGroup, f: impl Fn(usize) -> u8) -> Self {
        Self::new(q, (0..q.order()).map(f).collect())
    }

    pub fn eval(&self, g: usize) -> u8 {
        self.vals[g]
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &CharacterH1) -> CharacterH1 {
        assert_eq!(self.vals.len(), other.vals.len());
        CharacterH1 {
            vals: self
                .vals
                .iter()
                .zip(&other.vals)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }
}

/// A 2-cocycle with values in 𝔽₂^rank, stored densely over all pairs and
/// checked against the cocycle identity on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle2 {
    q_order: usize,
    rank: usize,
    vals: Vec<u8>,
}

impl Cocycle2 {
    pub fn new(q: &FiniteGroup, rank: usize, vals: Vec<u8>) -> Self {
        assert!(rank >= 1 && rank <= 8);
        let n = q.order();
        assert_eq!(vals.len(), n * n);
        let c = |g: usize, h: usize| vals[g * n + h];
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    assert_eq!(
                        c(g, h) ^ c(q.mul(g, h), k),
                        c(h, k) ^ c(g, q.mul(h, k)),
                        "cocycle identity fails"
                    );
                }
            }
        }
        Cocycle2 {
            q_order: n,
            rank,
            vals,
        }
    }

    pub fn zero(q: &FiniteGroup, rank: usize) -> Self {
        Self::new(q, rank, vec![0; q.order() * q.order()])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn value(&self, g: usize, h: usize) -> u8 {
        self.vals[g * self.q_order + h]
    }

    pub fn add(&self, o: &Cocycle2) -> Cocycle2 {
        assert_eq!(self.q_order, o.q_order);
        assert_eq!(self.rank, o.rank);
        Cocycle2 {
            q_order: self.q_order,
            rank: self.rank,
            vals: self.vals.iter().zip(&o.vals).map(|(a, b)| a ^ b).collect(),
        }
    }
}

/// The rank-1 cocycle (g, h) ↦ χ(g)·ψ(h).
pub fn cup_cocycle(q: &FiniteGroup, chi: &CharacterH1, psi: &CharacterH1) -> Cocycle2 {
    let n = q.order();
    let mut vals = vec![0u8; n * n];
    for g in 0..n {
        for h in 0..n {
            vals[g * n + h] = chi.eval(g) & psi.eval(h);
        }
    }
    Cocycle2::new(q, 1, vals)
}

/// Whether two cocycles differ by a coboundary δf, decided coordinatewise by
/// solving the linear system f(g) + f(h) + f(gh) = (c₁−c₂)(g, h) over 𝔽₂.
/// Group order is capped at 64 unknowns.
pub fn classes_equal(q: &FiniteGroup, c1: &Cocycle2, c2: &Cocycle2) -> bool {
    let n = q.order();
    assert!(n <= 64, "coboundary solving is capped at order 64");
    assert_eq!(c1.q_order, n);
    assert_eq!(c2.q_order, n);
    assert_eq!(c1.rank, c2.rank);
    let d = c1.add(c2);
    for coord in 0..d.rank {
        let mut rows = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let mut coef = 0u64;
                coef ^= 1 << g;
                coef ^= 1 << h;
                coef ^= 1 << q.mul(g, h);
                rows.push((coef, d.value(g, h) >> coord & 1 == 1));
            }
        }
        if !gf2_solvable(rows, n) {
            return false;
        }
    }
    true
}

pub fn class_is_trivial(q: &FiniteGroup, c: &Cocycle2) -> bool {
    classes_equal(q, c, &Cocycle2::zero(q, c.rank))
}

/// An extension 1 → A → Γ → Q → 1 with elementary abelian kernel, presented
/// through the total group's table, the projection, and a kernel basis.
pub struct Extension<'a> {
    pub total: &'a FiniteGroup,
    pub quot: &'a FiniteGroup,
    /// total index → quotient index; must be a surjective homomorphism.
    pub proj: &'a [usize],
    /// Kernel basis, as indices into `total`; the kernel must consist of
    /// exactly the 2^r products of basis elements.
    pub kernel_basis: &'a [usize],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionError {
    /// The proposed section does not split the projection pointwise.
    NotASection,
}

/// Reads off the 2-cocycle c(g, h) = s(g)·s(h)·s(gh)⁻¹ of an extension in
/// the coordinates of the kernel basis.
pub fn cocycle_from_section(
    ext: &Extension<'_>,
    section: &[usize],
) -> Result<Cocycle2, SectionError> {
    let t = ext.total;
    let q = ext.quot;
    assert_eq!(ext.proj.len(), t.order());
    for g in 0..t.order() {
        for h in 0..t.order() {
            assert_eq!(
                ext.proj[t.mul(g, h)],
                q.mul(ext.proj[g], ext.proj[h]),
                "projection is not a homomorphism"
            );
        }
    }
    let r = ext.kernel_basis.len();
    assert!(r >= 1 && r <= 8);
    let mut coords = BTreeMap::new();
    for mask in 0u32..(1 << r) {
        let mut prod = t.id();
        for (i, &b) in ext.kernel_basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                prod = t.mul(prod, b);
            }
        }
        assert_eq!(ext.proj[prod], q.id(), "basis element outside the kernel");
        assert!(
            coords.insert(prod, mask as u8).is_none(),
            "kernel basis is not independent"
        );
    }
    let kernel_size = ext.proj.iter().filter(|&&p| p == q.id()).count();
    assert_eq!(kernel_size, 1 << r, "basis does not span the kernel");

    assert_eq!(section.len(), q.order());
    for (g, &s) in section.iter().enumerate() {
        if ext.proj[s] != g {
            return Err(SectionError::NotASection);
        }
    }
    let n = q.order();
    let mut vals = vec![0u8; n * n];
    for g in 0..n {
        for h in 0..n {
            let gh = q.mul(g, h);
            let c = t.mul(t.mul(section[g], section[h]), t.inv(section[gh]));
            vals[g * n + h] = *coords
                .get(&c)
                .expect("section defect escaped the kernel");
        }
    }
    Ok(Cocycle2::new(q, r, vals))
}

/// Corestriction H¹(N, 𝔽₂) → H¹(Γ, 𝔽₂) along an index-2 inclusion: on N it
/// is n ↦ f(n) + f(τ⁻¹nτ), on the other coset it is extended through
/// τ ↦ f(τ²). The result is independent of the choice of τ.
pub fn corestriction_h1(
    gam: &FiniteGroup,
    sub: &Subgroup,
    f: &CharacterH1,
    tau: usize,
) -> CharacterH1 {
    assert_eq!(gam.order(), 2 * sub.group.order(), "inclusion must have index 2");
    assert!(!sub.contains(tau), "coset representative lies in the subgroup");
    let tau_inv = gam.inv(tau);
    let on_sub = |g: usize| -> u8 {
        let n = sub.index_of(g).expect("expected a subgroup element");
        let cg = gam.mul(gam.mul(tau_inv, g), tau);
        let cn = sub
            .index_of(cg)
            .expect("index-2 subgroups are normal");
        f.eval(n) ^ f.eval(cn)
    };
    let tau_sq = sub
        .index_of(gam.mul(tau, tau))
        .expect("square of the representative must lie in the subgroup");
    let vals = (0..gam.order())
        .map(|g| {
            if sub.contains(g) {
                on_sub(g)
            } else {
                let n = gam.mul(tau_inv, g);
                f.eval(tau_sq) ^ on_sub(n)
            }
        })
        .collect();
    CharacterH1::new(gam, vals)
}

/// dim H²(Q, 𝔽₂) computed from scratch: the space of 2-cocycles modulo the
/// space of coboundaries, both by 𝔽₂ row reduction. Order is capped at 16.
pub fn h2_dimension(q: &FiniteGroup) -> usize {
    let n = q.order();
    assert!(n <= 16, "dense cocycle solving is capped at order 16");
    let cols = n * n;
    let words = (cols + 63) / 64;
    let mut rows = Vec::with_capacity(n * n * n);
    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                let mut row = vec![0u64; words];
                let mut flip = |g: usize, h: usize| {
                    let c = g * n + h;
                    row[c / 64] ^= 1 << (c % 64);
                };
                flip(g, h);
                flip(q.mul(g, h), k);
                flip(h, k);
                flip(g, q.mul(h, k));
                rows.push(row);
            }
        }
    }
    let dim_z2 = cols - gf2_rank(rows, cols);

    let mut drows = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            let mut row = vec![0u64; 1];
            row[0] ^= 1 << g;
            row[0] ^= 1 << h;
            row[0] ^= 1 << q.mul(g, h);
            drows.push(row);
        }
    }
    let dim_b2 = gf2_rank(drows, n);
    dim_z2 - dim_b2
}

/// One named pass/fail line per verified identity.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub lines: Vec<(String, bool)>,
}

impl CheckReport {
    fn push(&mut self, name: &str, ok: bool) {
        self.lines.push((String::from(name), ok));
    }

    pub fn all_ok(&self) -> bool {
        self.lines.iter().all(|(_, ok)| *ok)
    }

    pub fn merged(mut self, other: CheckReport) -> CheckReport {
        self.lines.extend(other.lines);
        self
    }
}

/// The order-16 elementary abelian subgroup of the 5×5 group supported on
/// the top-right 2×2 block (rows 1–2, columns 4–5).
pub fn corner_subgroup() -> Vec<UnitriMat> {
    let mut out = Vec::with_capacity(16);
    for code in 0u8..16 {
        let mut m = UnitriMat::identity(5);
        m.set(0, 3, code & 1);
        m.set(0, 4, code >> 1 & 1);
        m.set(1, 3, code >> 2 & 1);
        m.set(1, 4, code >> 3 & 1);
        out.push(m);
    }
    out.sort();
    out
}

/// The conjugation orbit basis of the corner subgroup: e, σ₁eσ₁⁻¹, σ₄eσ₄⁻¹,
/// (σ₁σ₄)e(σ₁σ₄)⁻¹, where e is the single 1 in row 2, column 4.
pub fn corner_basis() -> [UnitriMat; 4] {
    let e = UnitriMat::identity(5).with(1, 3, 1);
    let s1 = UnitriMat::sigma(5, 1);
    let s4 = UnitriMat::sigma(5, 4);
    let s14 = s1.mul(&s4);
    [e, e.conj(&s1), e.conj(&s4), e.conj(&s14)]
}

/// Elements of the 5×5 group commuting with the whole corner subgroup;
/// equals the joint kernel of the outer near-diagonal maps (rows 1 and 4).
pub fn corner_centralizer() -> Vec<UnitriMat> {
    unitri_group(5)
        .into_iter()
        .filter(|g| g.s(1) == 0 && g.s(4) == 0)
        .collect()
}

fn span(gens: &[UnitriMat]) -> Vec<UnitriMat> {
    closure(gens)
}

/// Exhaustive verification of the corner subgroup's structure inside the
/// 5×5 group: the conjugation basis, the centralizer, normality, and the
/// free rank-1 module structure over the order-4 outer quotient.
pub fn verify_s_structure() -> CheckReport {
    let mut rep = CheckReport::default();
    let u5 = unitri_group(5);
    let s = corner_subgroup();
    let e = corner_basis();
    let s1 = UnitriMat::sigma(5, 1);
    let s4 = UnitriMat::sigma(5, 4);

    let e2 = UnitriMat::identity(5).with(0, 3, 1).with(1, 3, 1);
    let e3 = UnitriMat::identity(5).with(1, 3, 1).with(1, 4, 1);
    let e4 = UnitriMat::identity(5)
        .with(0, 3, 1)
        .with(0, 4, 1)
        .with(1, 3, 1)
        .with(1, 4, 1);
    rep.push(
        "conjugates of the corner generator match the stated matrices",
        e[1] == e2 && e[2] == e3 && e[3] == e4,
    );

    let spanned = span(&e);
    rep.push(
        "corner subgroup is elementary abelian of order 16 with the stated basis",
        spanned == s
            && s.iter().all(|m| m.mul(m) == UnitriMat::identity(5))
            && s.iter()
                .all(|m| s.iter().all(|n| m.mul(n) == n.mul(m))),
    );

    let cent: Vec<UnitriMat> = u5
        .iter()
        .filter(|g| s.iter().all(|x| x.conj(g) == *x))
        .copied()
        .collect();
    rep.push(
        "centralizer of the corner subgroup is the joint outer kernel",
        cent == corner_centralizer(),
    );
    rep.push(
        "centralizer has index 4",
        cent.len() * 4 == u5.len(),
    );

    let normal = u5
        .iter()
        .all(|g| s.iter().all(|x| s.binary_search(&x.conj(g)).is_ok()));
    rep.push("corner subgroup is normal", normal);

    let reps = [
        UnitriMat::identity(5),
        s1,
        s4,
        s1.mul(&s4),
    ];
    let mut products = BTreeSet::new();
    for mask in 0u8..16 {
        let mut prod = UnitriMat::identity(5);
        for (i, r) in reps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                prod = prod.mul(&e[0].conj(r));
            }
        }
        products.insert(prod.bits);
    }
    rep.push(
        "conjugation by the four outer cosets spans the corner subgroup freely",
        products.len() == 16 && products == s.iter().map(|m| m.bits).collect::<BTreeSet<u16>>(),
    );

    let sig2 = UnitriMat::sigma(5, 2);
    let sig3 = UnitriMat::sigma(5, 3);
    let n_basis = [
        sig2.mul(&UnitriMat::commutator(&s1, &sig2)),
        sig2,
        sig3,
        sig3.mul(&UnitriMat::commutator(&s4, &sig3)),
    ];
    let nq = quotient_by(&cent, &s);
    let cent_index: BTreeMap<u16, usize> =
        cent.iter().enumerate().map(|(i, m)| (m.bits, i)).collect();
    let mut images = BTreeSet::new();
    for mask in 0u8..16 {
        let mut prod = UnitriMat::identity(5);
        for (i, b) in n_basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                prod = prod.mul(b);
            }
        }
        images.insert(nq.coset_of[cent_index[&prod.bits]]);
    }
    rep.push(
        "the inner quotient is elementary abelian of order 16 with the stated basis",
        images.len() == 16
            && nq.group.order() == 16
            && (0..16).all(|g| nq.group.mul(g, g) == nq.group.id()),
    );

    let gq = quotient_by(&u5, &cent);
    rep.push(
        "the outer quotient is elementary abelian of order 4",
        gq.group.order() == 4 && (0..4).all(|g| gq.group.mul(g, g) == gq.group.id()),
    );
    rep
}

/// The three central extensions of the inner quotient obtained by killing
/// all but one basis vector of the corner subgroup, each compared against
/// the predicted cup-product class.
pub struct ExtensionClasses {
    pub classes: Vec<Cocycle2>,
    pub matches: [bool; 3],
}

/// Duals of the inner quotient's basis, read off coset representatives:
/// x₁ is the top 3×3 corner entry, x₂ adds the middle near-diagonal entry,
/// x₃ and x₄ mirror them in the bottom 3×3 block.
pub fn inner_quotient_duals(nq: &Quotient) -> [CharacterH1; 4] {
    let x = |f: &dyn Fn(&UnitriMat) -> u8| {
        CharacterH1::new(
            &nq.group,
            nq.reps.iter().map(f).collect(),
        )
    };
    [
        x(&|m| m.t1()),
        x(&|m| m.s(2) ^ m.t1()),
        x(&|m| m.s(3) ^ m.t2()),
        x(&|m| m.t2()),
    ]
}

/// The flat set-theoretic section used throughout: keep the two diagonal
/// 3×3 blocks, zero the top-right 2×2 block.
fn flat_section(m: &UnitriMat) -> UnitriMat {
    UnitriMat::identity(5)
        .with(0, 2, m.t1())
        .with(1, 2, m.s(2))
        .with(2, 3, m.s(3))
        .with(2, 4, m.t2())
}

pub fn extension_classes_of_n() -> ExtensionClasses {
    let cent = corner_centralizer();
    let cent_index: BTreeMap<u16, usize> =
        cent.iter().enumerate().map(|(i, m)| (m.bits, i)).collect();
    let s = corner_subgroup();
    let e = corner_basis();
    let nq = quotient_by(&cent, &s);
    let duals = inner_quotient_duals(&nq);

    let drops: [[usize; 3]; 3] = [[1, 2, 3], [0, 2, 3], [0, 1, 3]];
    let keeps = [0usize, 1, 2];
    let cups = [
        cup_cocycle(&nq.group, &duals[1], &duals[2]),
        cup_cocycle(&nq.group, &duals[0], &duals[2]),
        cup_cocycle(&nq.group, &duals[1], &duals[3]),
    ];

    let mut classes = Vec::new();
    let mut matches = [false; 3];
    for i in 0..3 {
        let si: Vec<UnitriMat> = span(&[e[drops[i][0]], e[drops[i][1]], e[drops[i][2]]]);
        let gam = quotient_by(&cent, &si);
        let proj: Vec<usize> = gam
            .reps
            .iter()
            .map(|r| nq.coset_of[cent_index[&r.bits]])
            .collect();
        let kernel_basis = [gam.coset_of[cent_index[&e[keeps[i]].bits]]];
        let section: Vec<usize> = nq
            .reps
            .iter()
            .map(|r| gam.coset_of[cent_index[&flat_section(r).bits]])
            .collect();
        let ext = Extension {
            total: &gam.group,
            quot: &nq.group,
            proj: &proj,
            kernel_basis: &kernel_basis,
        };
        let c = cocycle_from_section(&ext, &section).expect("flat section splits pointwise");
        matches[i] = classes_equal(&nq.group, &c, &cups[i]);
        classes.push(c);
    }
    ExtensionClasses { classes, matches }
}

/// The top-right entry of a product of two 5×5 matrices differs from the
/// sum of their top-right entries by
/// γ(g, h) = s₁(g)u₂(h) + t₁(g)t₂(h) + u₁(g)s₄(h).
/// Verified over all 1024² pairs, together with its restriction to the
/// joint outer kernel, where it collapses to t₁(g)t₂(h).
pub fn gamma_cocycle_check() -> CheckReport {
    let mut rep = CheckReport::default();
    let u5 = unitri_group(5);
    let gamma = |g: &UnitriMat, h: &UnitriMat| -> u8 {
        (g.s(1) & h.u2()) ^ (g.t1() & h.t2()) ^ (g.u1() & h.s(4))
    };
    let mut product_rule = true;
    let mut restriction = true;
    for g in &u5 {
        for h in &u5 {
            let p = g.mul(h);
            if p.z() != g.z() ^ h.z() ^ gamma(g, h) {
                product_rule = false;
            }
            if g.s(1) == 0 && g.s(4) == 0 && h.s(1) == 0 && h.s(4) == 0 {
                if gamma(g, h) != g.t1() & h.t2() {
                    restriction = false;
                }
            }
        }
    }
    rep.push(
        "top-right entry of every product follows the stated correction term",
        product_rule,
    );
    rep.push(
        "the correction term restricted to the joint outer kernel is the product of corner entries",
        restriction,
    );

    let mut zero_top = true;
    for g in u5.iter().filter(|g| g.z() == 0) {
        for h in u5.iter().filter(|h| h.z() == 0) {
            if g.mul(h).z() != gamma(g, h) {
                zero_top = false;
            }
        }
    }
    rep.push(
        "lifting through the zero-top-corner section reproduces the correction term",
        zero_top,
    );
    rep
}

/// Verifies the combinatorics behind the induced-module identifications of
/// the corner subgroup: the Dirac-function basis of the dual group algebra,
/// the kernel of evaluation-at-identity under both free-module structures,
/// and the matching extension classes.
pub fn shapiro_checks() -> CheckReport {
    let mut rep = CheckReport::default();
    let e = corner_basis();
    let s = corner_subgroup();
    let s_bits: BTreeSet<u16> = s.iter().map(|m| m.bits).collect();

    let u5 = unitri_group(5);
    let cent = corner_centralizer();
    let gq = quotient_by(&u5, &cent);
    let q = &gq.group;
    let n = q.order();
    let mut pairing = Vec::new();
    for g in 0..n {
        let mut row = vec![0u64; 1];
        for h in 0..n {
            if q.mul(g, h) == q.id() {
                row[0] |= 1 << h;
            }
        }
        pairing.push(row);
    }
    rep.push(
        "the dual of the outer group algebra is free on the Dirac function at 1",
        gf2_rank(pairing, n) == n,
    );

    let kernel_span = span(&[e[1], e[2], e[3]]);
    rep.push(
        "evaluation at 1 has kernel spanned by the three displaced basis vectors",
        kernel_span.len() == 8 && !kernel_span.contains(&e[0]),
    );

    let s1 = UnitriMat::sigma(5, 1);
    let s4 = UnitriMat::sigma(5, 4);
    let s14 = s1.mul(&s4);
    let orbit_e1 = e[0].conj(&s14);
    let orbit_e2 = e[1].conj(&s14);
    rep.push(
        "the diagonal coset swaps the two basis pairs",
        orbit_e1 == e[3] && orbit_e2 == e[2],
    );
    let free_pair = span(&[e[0], e[1], orbit_e1, orbit_e2]);
    rep.push(
        "the pair basis is free of rank 2 over the diagonal coset",
        free_pair.iter().map(|m| m.bits).collect::<BTreeSet<_>>() == s_bits,
    );
    let ker_pair = span(&[e[2], e[3]]);
    rep.push(
        "evaluation kernel for the pair basis is spanned by the other two vectors",
        ker_pair.len() == 4 && !ker_pair.contains(&e[0]) && !ker_pair.contains(&e[1]),
    );
    let alt_ker = span(&[e[1], e[3]]);
    rep.push(
        "the alternative pair basis swaps the evaluation kernel accordingly",
        e[2].conj(&s14) == e[1] && alt_ker.len() == 4 && !alt_ker.contains(&e[0]),
    );

    let preimage: Vec<UnitriMat> = u5
        .iter()
        .filter(|g| g.s(1) == 0 && g.s(4) == 0)
        .copied()
        .collect();
    rep.push(
        "the preimage of the inner quotient is the centralizer",
        preimage == cent,
    );

    let ext = extension_classes_of_n();
    rep.push(
        "the three extension classes match their predicted cup products",
        ext.matches.iter().all(|&m| m),
    );
    rep
}

/// Verifies that the squares of the 5×5 group close into the joint kernel
/// of the four near-diagonal maps, that this subgroup is the intersection
/// of all fifteen index-2 subgroups, and that generating sets are detected
/// by their near-diagonal images.
pub fn frattini_report() -> CheckReport {
    let mut rep = CheckReport::default();
    let u5 = unitri_group(5);
    let squares: Vec<UnitriMat> = {
        let set: BTreeSet<u16> = u5.iter().map(|g| g.mul(g).bits).collect();
        set.into_iter().map(|bits| UnitriMat { n: 5, bits }).collect()
    };
    let phi = span(&squares);
    let joint_kernel: Vec<UnitriMat> = u5
        .iter()
        .filter(|g| (1..=4).all(|i| g.s(i) == 0))
        .copied()
        .collect();
    rep.push(
        "the squares generate the joint kernel of the near-diagonal maps",
        phi == joint_kernel,
    );
    rep.push("that subgroup has index 16", phi.len() * 16 == u5.len());

    let quot = quotient_by(&u5, &phi);
    rep.push(
        "the quotient by it is elementary abelian of order 16",
        quot.group.order() == 16
            && (0..16).all(|g| quot.group.mul(g, g) == quot.group.id()),
    );

    let mut intersection: BTreeSet<u16> = u5.iter().map(|g| g.bits).collect();
    let mut all_index_2 = true;
    for v in 1u8..16 {
        let kernel: BTreeSet<u16> = u5
            .iter()
            .filter(|g| {
                (1..=4).fold(0u8, |acc, i| acc ^ (v >> (i - 1) & 1) & g.s(i)) == 0
            })
            .map(|g| g.bits)
            .collect();
        if kernel.len() * 2 != u5.len() {
            all_index_2 = false;
        }
        intersection = intersection.intersection(&kernel).copied().collect();
    }
    rep.push(
        "the fifteen near-diagonal kernels each have index 2",
        all_index_2,
    );
    rep.push(
        "their intersection is exactly the subgroup of squares",
        intersection == phi.iter().map(|g| g.bits).collect::<BTreeSet<_>>(),
    );
    // Every index-2 subgroup contains every square (the quotient has order
    // 2), so the fifteen kernels above exhaust the maximal subgroups and
    // the intersection computed here is the Frattini subgroup.

    let four = closure(&[
        UnitriMat::sigma(5, 1),
        UnitriMat::sigma(5, 2),
        UnitriMat::sigma(5, 3),
        UnitriMat::sigma(5, 4),
    ]);
    rep.push(
        "the four near-diagonal generators generate the whole group",
        four.len() == u5.len(),
    );
    let three = closure(&[
        UnitriMat::sigma(5, 1),
        UnitriMat::sigma(5, 3),
        UnitriMat::sigma(5, 4),
    ]);
    rep.push(
        "dropping one generator leaves a proper subgroup",
        three.len() < u5.len(),
    );

    let (full, _) = FiniteGroup::from_mats(&four);
    let chars: Vec<CharacterH1> = (1..=4)
        .map(|i| CharacterH1::new(&full, four.iter().map(|g| g.s(i)).collect()))
        .collect();
    rep.push(
        "near-diagonal images of the full group pass the generation test",
        frattini_and_lift_check(&full, [&chars[0], &chars[1], &chars[2], &chars[3]]),
    );
    let (sub, _) = FiniteGroup::from_mats(&three);
    let sub_chars: Vec<CharacterH1> = (1..=4)
        .map(|i| CharacterH1::new(&sub, three.iter().map(|g| g.s(i)).collect()))
        .collect();
    rep.push(
        "near-diagonal images of the proper subgroup fail the generation test",
        !frattini_and_lift_check(
            &sub,
            [&sub_chars[0], &sub_chars[1], &sub_chars[2], &sub_chars[3]],
        ),
    );
    rep
}

/// Whether the four characters jointly surject onto 𝔽₂⁴. Because the
/// quotient of the 1024-element group by its subgroup of squares is exactly
/// 𝔽₂⁴ via the near-diagonal maps (see `frattini_report`), a subgroup whose
/// images pass this test generates the whole group.
pub fn frattini_and_lift_check(q: &FiniteGroup, images: [&CharacterH1; 4]) -> bool {
    let rows: Vec<Vec<u64>> = (0..q.order())
        .map(|g| {
            vec![images
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, chi)| acc | (chi.eval(g) as u64) << i)]
        })
        .collect();
    gf2_rank(rows, 4) == 4
}

/// The 3×3 matrices, tabled, with the near-diagonal duals of the order-4
/// quotient by the center.
fn dihedral_scene() -> (Vec<UnitriMat>, Quotient) {
    let d4 = unitri_group(3);
    let center = vec![
        UnitriMat::identity(3),
        UnitriMat::identity(3).with(0, 2, 1),
    ];
    let q = quotient_by(&d4, &center);
    (d4, q)
}

/// Checks that the central extension of the order-4 group by the center of
/// the 3×3 group has the cup product of the two coordinate characters as
/// its class, and that a cyclic order-4 subgroup gives the nonzero class
/// over its order-2 quotient.
pub fn dihedral_class_report() -> CheckReport {
    let mut rep = CheckReport::default();
    let (d4, q) = dihedral_scene();
    let (total, index) = FiniteGroup::from_mats(&d4);
    let d4_index = index;
    let proj: Vec<usize> = d4
        .iter()
        .map(|m| q.coset_of[*d4_index.get(&m.bits).unwrap()])
        .collect();
    let center_elem = d4_index[&UnitriMat::identity(3).with(0, 2, 1).bits];
    let kernel_basis = [center_elem];
    let section: Vec<usize> = q
        .reps
        .iter()
        .map(|r| d4_index[&r.bits.min(r.with(0, 2, 0).bits)])
        .collect();
    let ext = Extension {
        total: &total,
        quot: &q.group,
        proj: &proj,
        kernel_basis: &kernel_basis,
    };
    let class = cocycle_from_section(&ext, &section).expect("zero-corner section");
    let dual1 = CharacterH1::new(&q.group, q.reps.iter().map(|m| m.s(1)).collect());
    let dual2 = CharacterH1::new(&q.group, q.reps.iter().map(|m| m.s(2)).collect());
    let cup = cup_cocycle(&q.group, &dual1, &dual2);
    rep.push(
        "the central extension of the order-4 group has the cup product as its class",
        classes_equal(&q.group, &class, &cup),
    );
    rep.push(
        "that class is not a coboundary",
        !class_is_trivial(&q.group, &class),
    );

    let rot = UnitriMat::sigma(3, 1).mul(&UnitriMat::sigma(3, 2));
    let c4 = closure(&[rot]);
    let (c4g, c4_index) = FiniteGroup::from_mats(&c4);
    let center2 = vec![UnitriMat::identity(3), rot.mul(&rot)];
    let qc = quotient_by(&c4, &center2);
    let proj4: Vec<usize> = c4
        .iter()
        .map(|m| qc.coset_of[c4_index[&m.bits]])
        .collect();
    let kb = [c4_index[&rot.mul(&rot).bits]];
    let section4: Vec<usize> = qc.reps.iter().map(|r| c4_index[&r.bits]).collect();
    let ext4 = Extension {
        total: &c4g,
        quot: &qc.group,
        proj: &proj4,
        kernel_basis: &kb,
    };
    let class4 = cocycle_from_section(&ext4, &section4).expect("representative section");
    let x = CharacterH1::from_fn(&qc.group, |g| (g != qc.group.id()) as u8);
    rep.push(
        "the cyclic order-4 extension of the order-2 group is the square of its dual",
        classes_equal(&qc.group, &class4, &cup_cocycle(&qc.group, &x, &x))
            && !class_is_trivial(&qc.group, &class4),
    );
    rep
}

/// Checks that corestriction along the two elementary abelian index-2
/// subgroups of the 3×3 group carries the top-corner character to the
/// matching near-diagonal character, independently of the chosen coset
/// representative, and that corestriction of a restriction vanishes.
pub fn transfer_report() -> CheckReport {
    let mut rep = CheckReport::default();
    let d4 = unitri_group(3);
    let (gam, _) = FiniteGroup::from_mats(&d4);
    for i in 1..=2usize {
        let other = 3 - i;
        let elems: Vec<usize> = d4
            .iter()
            .enumerate()
            .filter(|(_, m)| m.s(other) == 0)
            .map(|(k, _)| k)
            .collect();
        let sub = Subgroup::of(&gam, &elems);
        let f = CharacterH1::new(
            &sub.group,
            sub.incl.iter().map(|&k| d4[k].t()).collect(),
        );
        let expected =
            CharacterH1::new(&gam, d4.iter().map(|m| m.s(i)).collect());
        let taus: Vec<usize> = (0..gam.order()).filter(|&g| !sub.contains(g)).collect();
        let mut all_match = true;
        for &tau in &taus {
            if corestriction_h1(&gam, &sub, &f, tau) != expected {
                all_match = false;
            }
        }
        rep.push(
            if i == 1 {
                "corestriction carries the corner character to the first near-diagonal map"
            } else {
                "corestriction carries the corner character to the second near-diagonal map"
            },
            all_match,
        );
        rep.push(
            if i == 1 {
                "first corestriction is independent of the representative"
            } else {
                "second corestriction is independent of the representative"
            },
            all_match,
        );

        let chi = CharacterH1::new(&gam, d4.iter().map(|m| m.s(i)).collect());
        let res = CharacterH1::new(
            &sub.group,
            sub.incl.iter().map(|&k| chi.eval(k)).collect(),
        );
        let back = corestriction_h1(&gam, &sub, &res, taus[0]);
        rep.push(
            if i == 1 {
                "corestriction of a restricted character vanishes (first subgroup)"
            } else {
                "corestriction of a restricted character vanishes (second subgroup)"
            },
            back.is_zero(),
        );
    }
    rep
}

/// dim H² of the elementary abelian groups of ranks 2 and 4, computed by
/// the linear-algebra oracle. These are 3 and 10.
pub fn h2_dimension_report() -> CheckReport {
    let mut rep = CheckReport::default();
    let s1 = UnitriMat::sigma(3, 1);
    let center = UnitriMat::identity(3).with(0, 2, 1);
    let c22 = closure(&[s1, center]);
    let (c22g, _) = FiniteGroup::from_mats(&c22);
    rep.push(
        "rank-2 elementary abelian group has 3-dimensional second cohomology",
        h2_dimension(&c22g) == 3,
    );
    let (c24g, _) = FiniteGroup::from_mats(&corner_subgroup());
    rep.push(
        "rank-4 elementary abelian group has 10-dimensional second cohomology",
        h2_dimension(&c24g) == 10,
    );
    rep
}

/// Bonus symmetry: reflection across the antidiagonal composed with
/// inversion is an automorphism reversing the generator order.
pub fn flip_report() -> CheckReport {
    let mut rep = CheckReport::default();
    let u5 = unitri_group(5);
    let mut swaps = true;
    for i in 1..=4usize {
        if UnitriMat::sigma(5, i).flip() != UnitriMat::sigma(5, 5 - i) {
            swaps = false;
        }
    }
    let mut hom = true;
    let flipped: Vec<UnitriMat> = u5.iter().map(|g| g.flip()).collect();
    for (gi, g) in u5.iter().enumerate() {
        for (hi, h) in u5.iter().enumerate() {
            if g.mul(h).flip() != flipped[gi].mul(&flipped[hi]) {
                hom = false;
            }
        }
    }
    rep.push(
        "the antidiagonal flip exchanges the generators in reverse order",
        swaps,
    );
    rep.push("the antidiagonal flip is an automorphism", hom);
    rep
}

/// Every exhaustive group-theoretic check in one report: the dihedral
/// extension class, corestriction identities, the corner subgroup
/// structure, the three extension classes, the top-corner cocycle, the
/// induced-module identifications, the generation test, second-cohomology
/// dimensions, and the antidiagonal symmetry.
pub fn verify_lemma_suite() -> CheckReport {
    dihedral_class_report()
        .merged(transfer_report())
        .merged(verify_s_structure())
        .merged({
            let ext = extension_classes_of_n();
            let mut rep = CheckReport::default();
            rep.push(
                "first extension class is the cup of the second and third duals",
                ext.matches[0],
            );
            rep.push(
                "second extension class is the cup of the first and third duals",
                ext.matches[1],
            );
            rep.push(
                "third extension class is the cup of the second and fourth duals",
                ext.matches[2],
            );
            rep
        })
        .merged(gamma_cocycle_check())
        .merged(shapiro_checks())
        .merged(frattini_report())
        .merged(h2_dimension_report())
        .merged(flip_report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xoshiro256;

    #[test]
    fn near_diagonal_maps_are_homomorphisms_but_the_corner_is_not() {
        let d4 = unitri_group(3);
        for a in &d4 {
            for b in &d4 {
                let p = a.mul(b);
                assert_eq!(p.s(1), a.s(1) ^ b.s(1));
                assert_eq!(p.s(2), a.s(2) ^ b.s(2));
            }
        }
        let s1 = UnitriMat::sigma(3, 1);
        let s2 = UnitriMat::sigma(3, 2);
        assert_ne!(s1.mul(&s2).mul(&s1.mul(&s2)).t(), 0);
    }

    #[test]
    fn inverse_and_flip_are_consistent() {
        for g in unitri_group(4) {
            assert_eq!(g.mul(&g.inv()), UnitriMat::identity(4));
            assert_eq!(g.flip().flip(), g);
        }
    }

    #[test]
    fn split_extension_with_homomorphic_section_gives_zero() {
        let s1 = UnitriMat::sigma(3, 1);
        let center = UnitriMat::identity(3).with(0, 2, 1);
        let c22 = closure(&[s1, center]);
        let (total, index) = FiniteGroup::from_mats(&c22);
        let sub = vec![UnitriMat::identity(3), center];
        let q = quotient_by(&c22, &sub);
        let proj: Vec<usize> = c22
            .iter()
            .map(|m| q.coset_of[index[&m.bits]])
            .collect();
        let kb = [index[&center.bits]];
        let section: Vec<usize> = q.reps.iter().map(|r| index[&r.bits]).collect();
        let ext = Extension {
            total: &total,
            quot: &q.group,
            proj: &proj,
            kernel_basis: &kb,
        };
        let c = cocycle_from_section(&ext, &section).unwrap();
        assert!(class_is_trivial(&q.group, &c));
    }

    #[test]
    fn broken_sections_are_rejected() {
        let s1 = UnitriMat::sigma(3, 1);
        let center = UnitriMat::identity(3).with(0, 2, 1);
        let c22 = closure(&[s1, center]);
        let (total, index) = FiniteGroup::from_mats(&c22);
        let sub = vec![UnitriMat::identity(3), center];
        let q = quotient_by(&c22, &sub);
        let proj: Vec<usize> = c22
            .iter()
            .map(|m| q.coset_of[index[&m.bits]])
            .collect();
        let kb = [index[&center.bits]];
        let bad: Vec<usize> = q.reps.iter().map(|_| 0).collect();
        let ext = Extension {
            total: &total,
            quot: &q.group,
            proj: &proj,
            kernel_basis: &kb,
        };
        assert_eq!(
            cocycle_from_section(&ext, &bad).unwrap_err(),
            SectionError::NotASection
        );
    }

    #[test]
    fn dihedral_and_cyclic_extension_classes() {
        assert!(dihedral_class_report().all_ok());
    }

    #[test]
    fn corestriction_identities() {
        assert!(transfer_report().all_ok());
    }

    #[test]
    fn equality_of_classes_is_coboundary_invariant() {
        let (d4, q) = dihedral_scene();
        let _ = d4;
        let dual1 = CharacterH1::new(&q.group, q.reps.iter().map(|m| m.s(1)).collect());
        let dual2 = CharacterH1::new(&q.group, q.reps.iter().map(|m| m.s(2)).collect());
        let cup = cup_cocycle(&q.group, &dual1, &dual2);
        let mut rng = Xoshiro256::new(11);
        let n = q.group.order();
        for _ in 0..8 {
            let f: Vec<u8> = (0..n).map(|_| (rng.next_u64() & 1) as u8).collect();
            let mut vals = vec![0u8; n * n];
            for g in 0..n {
                for h in 0..n {
                    vals[g * n + h] =
                        cup.value(g, h) ^ f[g] ^ f[h] ^ f[q.group.mul(g, h)];
                }
            }
            let shifted = Cocycle2::new(&q.group, 1, vals);
            assert!(classes_equal(&q.group, &cup, &shifted));
        }
        assert!(!class_is_trivial(&q.group, &cup));
        let zero_chi = CharacterH1::from_fn(&q.group, |_| 0);
        let cup_zero = cup_cocycle(&q.group, &dual1, &zero_chi);
        assert!(class_is_trivial(&q.group, &cup_zero));
    }

    #[test]
    fn corner_subgroup_structure_holds() {
        let rep = verify_s_structure();
        assert!(rep.all_ok(), "{:?}", rep.lines);
    }

    #[test]
    fn extension_classes_match_the_cup_products() {
        let ext = extension_classes_of_n();
        assert_eq!(ext.matches, [true, true, true]);
        let cent = corner_centralizer();
        let s = corner_subgroup();
        let nq = quotient_by(&cent, &s);
        let duals = inner_quotient_duals(&nq);
        let other = cup_cocycle(&nq.group, &duals[0], &duals[1]);
        assert!(!classes_equal(&nq.group, &ext.classes[0], &other));
    }

    #[test]
    fn top_corner_correction_term_is_exhaustively_verified() {
        let rep = gamma_cocycle_check();
        assert!(rep.all_ok(), "{:?}", rep.lines);
    }

    #[test]
    fn induced_module_identifications_hold() {
        let rep = shapiro_checks();
        assert!(rep.all_ok(), "{:?}", rep.lines);
    }

    #[test]
    fn generation_is_detected_through_near_diagonal_images() {
        let rep = frattini_report();
        assert!(rep.all_ok(), "{:?}", rep.lines);
    }

    #[test]
    fn second_cohomology_dimensions() {
        assert!(h2_dimension_report().all_ok());
    }

    #[test]
    fn antidiagonal_flip_is_an_automorphism() {
        assert!(flip_report().all_ok());
    }
}
