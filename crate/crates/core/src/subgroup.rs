//! Subgroups as canonical induced polycyclic sequences.
//!
//! The polycyclic chain is `G_k = N_0 > N_1 > … > N_{1+n+d} = 1` where `N_p`
//! is the set of elements whose first `p` exponents vanish: position 0 is the
//! top exponent (relative order `2^k`), positions `1..=n` the base exponents
//! and the remaining positions the central ones (relative order 2 each).
//! `N_1 = H_k` and `N_{n+1} = Z_k`, so intersections with either are
//! restrictions of the sequence.
//!
//! Every [`Subgroup`] stores the canonical sequence: the top leader has
//! `t = 2^e`, and each member has exponent zero at the leading position of
//! every later member. Two subgroups are equal iff their sequences are.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::ZBits;
use crate::context::GroupContext;
use crate::element::Element;
use crate::error::GroupError;

#[derive(Clone)]
pub struct Subgroup {
    ctx: GroupContext,
    igs: Vec<Element>,
    log_order: u32,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.igs == other.igs
    }
}
impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(k={}, log_order={}, igs=[", self.ctx.k, self.log_order)?;
        for (i, g) in self.igs.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", self.ctx.format_element(g))?;
        }
        write!(f, "])")
    }
}

/// Abelian invariants of a quotient `S/T`, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayerShape(pub Vec<u64>);

impl LayerShape {
    pub fn log_order(&self) -> u32 {
        self.0.iter().map(|c| c.trailing_zeros()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Shape `C_{big} × C_2^{twos}` (or only `C_2^{twos}` when `big` is None).
    pub fn from_parts(big: &[u64], twos: usize) -> Self {
        let mut v: Vec<u64> = big.to_vec();
        v.extend(std::iter::repeat_n(2, twos));
        v.sort_unstable_by(|a, b| b.cmp(a));
        LayerShape(v)
    }
}

impl fmt::Display for LayerShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|c| format!("C{c}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Serialized form: the canonical sequence in element text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupRecord {
    pub k: u32,
    pub log_order: u32,
    pub igs: Vec<String>,
}

/// Incremental closure engine. Slot `p` holds the member leading at `p`.
struct Sifter<'a> {
    ctx: &'a GroupContext,
    slots: Vec<Option<Element>>,
    inv: Vec<Option<Element>>,
    /// When non-empty, every inserted member is also conjugated by these.
    conjugators: Vec<(Element, Element)>,
}

impl<'a> Sifter<'a> {
    fn new(ctx: &'a GroupContext) -> Self {
        let p = ctx.positions();
        Sifter { ctx, slots: vec![None; p], inv: vec![None; p], conjugators: Vec::new() }
    }

    fn seeded(ctx: &'a GroupContext, igs: &[Element]) -> Self {
        let mut s = Self::new(ctx);
        for g in igs {
            let p = g.leading_position(ctx.n).expect("igs member is trivial");
            s.slots[p] = Some(*g);
            s.inv[p] = Some(ctx.inverse(g));
        }
        s
    }

    fn with_conjugators(mut self, conj: &[Element]) -> Self {
        self.conjugators = conj.iter().map(|c| (self.ctx.inverse(c), *c)).collect();
        self
    }

    /// Reduces `g` through the slots; identity iff `g` lies in the span.
    fn sift(&self, mut g: Element) -> Element {
        let n = self.ctx.n;
        while let Some(p) = g.leading_position(n) {
            let Some(h) = &self.slots[p] else { return g };
            if p == 0 {
                let e = h.t.trailing_zeros();
                if g.t.trailing_zeros() < e {
                    return g;
                }
                let m = (g.t >> e) as i64;
                let hinv = self.inv[0].as_ref().unwrap();
                g = self.ctx.mul(&g, &self.ctx.pow(hinv, m));
            } else {
                g = self.ctx.mul(&g, self.inv[p].as_ref().unwrap());
            }
        }
        g
    }

    /// Scales a top-leading element so that its exponent is a power of two.
    fn normalize_top(&self, g: Element) -> Element {
        let n = self.ctx.n as u32;
        let e = g.t.trailing_zeros();
        let u = g.t >> e;
        if u == 1 {
            return g;
        }
        // inverse of the odd part modulo 2^k
        let modulus = n >> e;
        let uinv = (1..modulus).step_by(2).find(|v| (u * v) % modulus == 1).unwrap_or(1);
        let h = self.ctx.pow(&g, uinv as i64);
        debug_assert_eq!(h.t, 1 << e);
        h
    }

    fn add_all(&mut self, gens: impl IntoIterator<Item = Element>) -> bool {
        let mut queue: VecDeque<Element> = gens.into_iter().collect();
        let mut changed = false;
        while let Some(g) = queue.pop_front() {
            let mut r = self.sift(g);
            let Some(p) = r.leading_position(self.ctx.n) else { continue };
            changed = true;
            let rel: i64 = if p == 0 {
                r = self.normalize_top(r);
                if let Some(old) = self.slots[0].take() {
                    queue.push_back(old);
                }
                (self.ctx.n >> r.t.trailing_zeros()) as i64
            } else {
                2
            };
            for h in self.slots.iter().flatten() {
                queue.push_back(self.ctx.comm(&r, h));
            }
            queue.push_back(self.ctx.pow(&r, rel));
            for (cinv, c) in &self.conjugators {
                queue.push_back(self.ctx.mul(&self.ctx.mul(cinv, &r), c));
            }
            self.inv[p] = Some(self.ctx.inverse(&r));
            self.slots[p] = Some(r);
        }
        changed
    }

    fn finish(self) -> Subgroup {
        let ctx = self.ctx;
        let n = ctx.n;
        let positions: Vec<usize> = (0..self.slots.len()).filter(|&p| self.slots[p].is_some()).collect();
        let mut igs = Vec::with_capacity(positions.len());
        for (idx, &p) in positions.iter().enumerate() {
            let mut g = self.slots[p].unwrap();
            for &q in &positions[idx + 1..] {
                if g.exponent_at(q, n) != 0 {
                    g = ctx.mul(&g, self.inv[q].as_ref().unwrap());
                }
            }
            igs.push(g);
        }
        let log_order = igs
            .iter()
            .map(|g| match g.leading_position(n) {
                Some(0) => ctx.k - g.t.trailing_zeros(),
                _ => 1,
            })
            .sum();
        Subgroup { ctx: ctx.clone(), igs, log_order }
    }
}

impl Subgroup {
    /// The subgroup generated by `gens`.
    pub fn close(ctx: &GroupContext, gens: &[Element]) -> Subgroup {
        let mut s = Sifter::new(ctx);
        s.add_all(gens.iter().copied());
        s.finish()
    }

    pub fn trivial(ctx: &GroupContext) -> Subgroup {
        Subgroup { ctx: ctx.clone(), igs: Vec::new(), log_order: 0 }
    }

    pub fn full(ctx: &GroupContext) -> Subgroup {
        Self::flat(ctx, 0)
    }

    /// `H_k`, the elements with `t = 0`.
    pub fn base(ctx: &GroupContext) -> Subgroup {
        Self::flat(ctx, 1)
    }

    /// `Z_k`, the elements with `t = 0` and `a = 0`.
    pub fn center_part(ctx: &GroupContext) -> Subgroup {
        Self::flat(ctx, 1 + ctx.n)
    }

    /// `N_p`, the coordinate subgroup of elements leading at or after `p`.
    pub fn flat(ctx: &GroupContext, p: usize) -> Subgroup {
        let n = ctx.n;
        let igs: Vec<Element> = (p..ctx.positions())
            .map(|q| {
                if q == 0 {
                    ctx.x()
                } else if q <= n {
                    ctx.y_i(q - 1)
                } else {
                    ctx.central(q - 1 - n)
                }
            })
            .collect();
        let log_order = igs.len() as u32 + if p == 0 { ctx.k - 1 } else { 0 };
        Subgroup { ctx: ctx.clone(), igs, log_order }
    }

    /// Smallest normal subgroup of `G_k` containing `gens`.
    pub fn normal_closure(ctx: &GroupContext, gens: &[Element]) -> Subgroup {
        let conj = [ctx.x(), ctx.inverse(&ctx.x()), ctx.y()];
        let mut s = Sifter::new(ctx).with_conjugators(&conj);
        s.add_all(gens.iter().copied());
        s.finish()
    }

    /// Smallest subgroup containing `gens` and closed under conjugation by
    /// `conjugators`.
    pub fn closure_under(ctx: &GroupContext, gens: &[Element], conjugators: &[Element]) -> Subgroup {
        let mut s = Sifter::new(ctx).with_conjugators(conjugators);
        s.add_all(gens.iter().copied());
        s.finish()
    }

    /// Subgroup generated by `self` and `gens`.
    pub fn extend(&self, gens: &[Element]) -> Subgroup {
        let mut s = Sifter::seeded(&self.ctx, &self.igs);
        if s.add_all(gens.iter().copied()) {
            s.finish()
        } else {
            self.clone()
        }
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn igs(&self) -> &[Element] {
        &self.igs
    }

    pub fn log_order(&self) -> u32 {
        self.log_order
    }

    pub fn is_trivial(&self) -> bool {
        self.igs.is_empty()
    }

    /// Leading positions of the sequence.
    pub fn leading_positions(&self) -> Vec<usize> {
        self.igs.iter().map(|g| g.leading_position(self.ctx.n).unwrap()).collect()
    }

    /// Relative orders along the sequence; their product is the order.
    pub fn relative_orders(&self) -> Vec<u64> {
        self.igs
            .iter()
            .map(|g| match g.leading_position(self.ctx.n) {
                Some(0) => 1u64 << (self.ctx.k - g.t.trailing_zeros()),
                _ => 2,
            })
            .collect()
    }

    pub fn contains(&self, g: &Element) -> bool {
        Sifter::seeded(&self.ctx, &self.igs).sift(*g).is_identity()
    }

    /// `self ≤ other`.
    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        if self.log_order > other.log_order {
            return false;
        }
        let s = Sifter::seeded(&other.ctx, &other.igs);
        self.igs.iter().all(|g| s.sift(*g).is_identity())
    }

    /// Normal in `G_k`: stable under conjugation by `x` and `y`.
    pub fn is_normal(&self) -> bool {
        let ctx = &self.ctx;
        self.is_normalized_by(&[ctx.x(), ctx.y()])
    }

    pub fn is_normalized_by(&self, elements: &[Element]) -> bool {
        let s = Sifter::seeded(&self.ctx, &self.igs);
        self.igs
            .iter()
            .all(|h| elements.iter().all(|c| s.sift(self.ctx.conj(h, c)).is_identity()))
    }

    /// Contained in `Z_k`.
    pub fn in_center(&self) -> bool {
        self.igs.iter().all(|g| g.in_center())
    }

    /// Equal to some coordinate subgroup `N_p`; returns `p`.
    pub fn flat_position(&self) -> Option<usize> {
        let p = self
            .igs
            .first()
            .map(|g| g.leading_position(self.ctx.n).unwrap())
            .unwrap_or(self.ctx.positions());
        let flat_log = (self.ctx.positions() - p) as u32 + if p == 0 { self.ctx.k - 1 } else { 0 };
        (self.log_order == flat_log).then_some(p)
    }

    /// `self ∩ N_p`: the members leading at or after `p`.
    pub fn restrict(&self, p: usize) -> Subgroup {
        let igs: Vec<Element> = self
            .igs
            .iter()
            .filter(|g| g.leading_position(self.ctx.n).unwrap() >= p)
            .copied()
            .collect();
        let log_order = if p == 0 {
            self.log_order
        } else {
            igs.len() as u32
        };
        Subgroup { ctx: self.ctx.clone(), igs, log_order }
    }

    /// `self ∩ Z_k`.
    pub fn center_intersection(&self) -> Subgroup {
        self.restrict(1 + self.ctx.n)
    }

    /// Iterates over all elements; intended for small subgroups.
    pub fn elements(&self) -> Vec<Element> {
        let ctx = &self.ctx;
        let orders = self.relative_orders();
        let mut out = vec![ctx.identity()];
        for (g, &r) in self.igs.iter().zip(&orders).rev() {
            let powers: Vec<Element> = (0..r as i64).map(|e| ctx.pow(g, e)).collect();
            let mut next = Vec::with_capacity(out.len() * r as usize);
            for p in &powers {
                for h in &out {
                    next.push(ctx.mul(p, h));
                }
            }
            out = next;
        }
        out
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        if self.log_order >= other.log_order {
            self.extend(&other.igs)
        } else {
            other.extend(&self.igs)
        }
    }

    /// `[self, other]` for normal subgroups: the normal closure of the
    /// commutators of the generating sequences.
    pub fn commutator_with(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        if cfg!(debug_assertions) && !(self.is_normal() && other.is_normal()) {
            return Err(GroupError::NotNormal);
        }
        let ctx = &self.ctx;
        let gens: Vec<Element> = self
            .igs
            .iter()
            .flat_map(|a| other.igs.iter().map(move |b| ctx.comm(a, b)))
            .collect();
        Ok(Subgroup::normal_closure(ctx, &gens))
    }

    /// `[self, G_k]` for normal `self`: generators commuted with `x` and `y`.
    pub fn commutator_with_group(&self) -> Subgroup {
        let ctx = &self.ctx;
        let (x, y) = (ctx.x(), ctx.y());
        let gens: Vec<Element> = self
            .igs
            .iter()
            .flat_map(|a| [ctx.comm(a, &x), ctx.comm(a, &y)])
            .collect();
        Subgroup::normal_closure(ctx, &gens)
    }

    /// The derived subgroup `[S, S]`, closed under conjugation by `S`.
    pub fn derived(&self) -> Subgroup {
        let ctx = &self.ctx;
        let mut gens = Vec::new();
        for (i, a) in self.igs.iter().enumerate() {
            for b in &self.igs[i + 1..] {
                gens.push(ctx.comm(a, b));
            }
        }
        Subgroup::closure_under(ctx, &gens, &self.igs)
    }

    /// `[S, S] · ⟨g^{2^m} : g ∈ igs(S)⟩`, which equals `S^{2^m} [S, S]`.
    pub fn agemo_mod_derived(&self, m: u32) -> Subgroup {
        let ctx = &self.ctx;
        let powers: Vec<Element> = self.igs.iter().map(|g| ctx.pow(g, 1i64 << m)).collect();
        self.derived().extend(&powers)
    }

    /// `⟨g^{2^m} : g ∈ igs(S)⟩ · T` for a normal `T`.
    pub fn generator_powers_over(&self, m: u32, over: &Subgroup) -> Subgroup {
        let ctx = &self.ctx;
        let powers: Vec<Element> = self.igs.iter().map(|g| ctx.pow(g, 1i64 << m)).collect();
        over.extend(&powers)
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        if let Some(p) = other.flat_position() {
            return Ok(self.restrict(p));
        }
        if let Some(p) = self.flat_position() {
            return Ok(other.restrict(p));
        }
        if self.in_center() || other.in_center() {
            let a = self.center_intersection();
            let b = other.center_intersection();
            return Ok(central_intersection(&self.ctx, &a, &b));
        }
        if self.ctx.k <= 2 {
            let (small, big) = if self.log_order <= other.log_order {
                (self, other)
            } else {
                (other, self)
            };
            let s = Sifter::seeded(&big.ctx, &big.igs);
            let common: Vec<Element> = small
                .elements()
                .into_iter()
                .filter(|g| s.sift(*g).is_identity())
                .collect();
            return Ok(Subgroup::close(&self.ctx, &common));
        }
        Err(GroupError::UnsupportedExact { k: self.ctx.k })
    }

    /// Abelian invariants of `self / lower`.
    pub fn layer_shape(&self, lower: &Subgroup) -> Result<LayerShape, GroupError> {
        let ctx = &self.ctx;
        if !lower.is_subgroup_of(self) {
            return Err(GroupError::NotNested);
        }
        if !lower.is_normalized_by(&self.igs) {
            return Err(GroupError::NotNormal);
        }
        let s = Sifter::seeded(ctx, &lower.igs);
        for (i, a) in self.igs.iter().enumerate() {
            for b in &self.igs[i + 1..] {
                if !s.sift(ctx.comm(a, b)).is_identity() {
                    return Err(GroupError::NonAbelianQuotient);
                }
            }
        }
        // ranks[j] = log |S^{2^j} T : T|
        let mut ranks = Vec::new();
        let mut j = 0u32;
        loop {
            let r = self.generator_powers_over(j, lower).log_order - lower.log_order;
            ranks.push(r);
            if r == 0 {
                break;
            }
            j += 1;
        }
        let mut inv = Vec::new();
        for e in 1..ranks.len() {
            let at_least = ranks[e - 1] - ranks[e];
            let more = if e + 1 < ranks.len() { ranks[e] - ranks[e + 1] } else { 0 };
            for _ in 0..(at_least - more) {
                inv.push(1u64 << e);
            }
        }
        inv.sort_unstable_by(|a, b| b.cmp(a));
        Ok(LayerShape(inv))
    }

    pub fn to_record(&self) -> SubgroupRecord {
        SubgroupRecord {
            k: self.ctx.k,
            log_order: self.log_order,
            igs: self.igs.iter().map(|g| self.ctx.format_element(g)).collect(),
        }
    }

    /// Rebuilds a subgroup and re-verifies that the record is a closed,
    /// canonical sequence with the declared order.
    pub fn from_record(ctx: &GroupContext, rec: &SubgroupRecord) -> Result<Subgroup, GroupError> {
        if rec.k != ctx.k {
            return Err(GroupError::ContextMismatch { expected: ctx.k, found: rec.k });
        }
        let gens = rec
            .igs
            .iter()
            .map(|s| ctx.parse_element(s))
            .collect::<Result<Vec<_>, _>>()?;
        let s = Subgroup::close(ctx, &gens);
        if s.igs != gens {
            return Err(GroupError::InvalidSubgroup("sequence is not closed and canonical".into()));
        }
        if s.log_order != rec.log_order {
            return Err(GroupError::InvalidSubgroup(format!(
                "declared log order {} but sequence gives {}",
                rec.log_order, s.log_order
            )));
        }
        Ok(s)
    }
}

/// Intersection of two subgroups of the elementary abelian `Z_k`.
fn central_intersection(ctx: &GroupContext, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut basis_b = Echelon::default();
    for g in b.igs() {
        basis_b.insert(g.z);
    }
    // rows (residue mod B, actual vector in A); zero residues span A ∩ B
    let mut pivots: Vec<(ZBits, ZBits)> = Vec::new();
    let mut common = Vec::new();
    for g in a.igs() {
        let mut res = basis_b.reduce(g.z);
        let mut vec = g.z;
        loop {
            let Some(p) = res.lowest() else {
                common.push(vec);
                break;
            };
            match pivots.iter().find(|(r, _)| r.lowest() == Some(p)) {
                Some((r, v)) => {
                    res ^= *r;
                    vec ^= *v;
                }
                None => {
                    pivots.push((res, vec));
                    break;
                }
            }
        }
    }
    let gens: Vec<Element> = common
        .into_iter()
        .map(|z| ctx.element(0, 0, z).unwrap())
        .collect();
    Subgroup::close(ctx, &gens)
}

/// Row echelon basis of a GF(2) space; rows sorted by their lowest bit.
#[derive(Default)]
pub(crate) struct Echelon {
    rows: Vec<ZBits>,
}

impl Echelon {
    /// Canonical representative of `v` modulo the span: zero at every pivot.
    pub(crate) fn reduce(&self, mut v: ZBits) -> ZBits {
        for r in &self.rows {
            if v.get(r.lowest().unwrap()) {
                v ^= *r;
            }
        }
        v
    }

    pub(crate) fn insert(&mut self, v: ZBits) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.lowest() else { return false };
        let at = self.rows.partition_point(|row| row.lowest().unwrap() < p);
        self.rows.insert(at, r);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::Commutators;

    #[test]
    fn trivial_and_full() {
        for k in 1..=3 {
            let ctx = GroupContext::new(k).unwrap();
            let t = Subgroup::close(&ctx, &[ctx.identity()]);
            assert!(t.is_trivial());
            assert_eq!(t.log_order(), 0);
            let g = Subgroup::close(&ctx, &[ctx.x(), ctx.y()]);
            assert_eq!(g.log_order(), ctx.log_order());
            assert_eq!(g, Subgroup::full(&ctx));
            assert_eq!(g.flat_position(), Some(0));
        }
    }

    #[test]
    fn close_is_idempotent_and_order_independent() {
        let ctx = GroupContext::new(2).unwrap();
        let mut cs = Commutators::new(&ctx);
        let gens = vec![cs.c(2), ctx.pow(&ctx.x(), 2), cs.c_sq(3), cs.z(1, 2)];
        let a = Subgroup::close(&ctx, &gens);
        let mut rev = gens.clone();
        rev.reverse();
        assert_eq!(a, Subgroup::close(&ctx, &rev));
        assert_eq!(a, Subgroup::close(&ctx, a.igs()));
        let rel: u64 = a.relative_orders().iter().product();
        assert_eq!(rel, 1 << a.log_order());
        assert_eq!(a.elements().len() as u64, rel);
    }

    #[test]
    fn top_leader_normalized() {
        let ctx = GroupContext::new(3).unwrap();
        let s = Subgroup::close(&ctx, &[ctx.pow(&ctx.x(), 6)]);
        assert_eq!(s.igs()[0].t, 2);
        assert_eq!(s.log_order(), 2);
    }

    #[test]
    fn base_and_center() {
        let ctx = GroupContext::new(2).unwrap();
        let h = Subgroup::normal_closure(&ctx, &[ctx.y()]);
        assert_eq!(h, Subgroup::base(&ctx));
        assert_eq!(h.log_order(), 14);
        let z = Subgroup::center_part(&ctx);
        assert_eq!(z.log_order(), 10);
        assert_eq!(h.commutator_with(&z).unwrap(), Subgroup::trivial(&ctx));
        let g = Subgroup::full(&ctx);
        assert_eq!(g.intersect(&z).unwrap(), z);
        assert_eq!(h.intersect(&g).unwrap(), h);
    }

    #[test]
    fn layer_shape_of_abelianization() {
        let ctx = GroupContext::new(2).unwrap();
        let g = Subgroup::full(&ctx);
        let g2 = g.commutator_with_group();
        assert_eq!(g.layer_shape(&g2).unwrap(), LayerShape(vec![4, 4]));
        assert_eq!(g.layer_shape(&g).unwrap(), LayerShape(vec![]));
        assert_eq!(g2.layer_shape(&g).unwrap_err(), GroupError::NotNested);
        let t = Subgroup::trivial(&ctx);
        assert_eq!(g.layer_shape(&t).unwrap_err(), GroupError::NonAbelianQuotient);
    }

    #[test]
    fn general_intersection_small_levels() {
        let ctx = GroupContext::new(2).unwrap();
        let a = Subgroup::close(&ctx, &[ctx.mul(&ctx.x(), &ctx.y())]);
        let b = Subgroup::close(&ctx, &[ctx.pow(&ctx.x(), 2), ctx.y_i(1)]);
        let i = a.intersect(&b).unwrap();
        for g in i.elements() {
            assert!(a.contains(&g) && b.contains(&g));
        }
        let brute = a.elements().into_iter().filter(|g| b.contains(g)).count();
        assert_eq!(1u64 << i.log_order(), brute as u64);

        let ctx3 = GroupContext::new(3).unwrap();
        let a = Subgroup::close(&ctx3, &[ctx3.mul(&ctx3.x(), &ctx3.y())]);
        let b = Subgroup::close(&ctx3, &[ctx3.pow(&ctx3.x(), 2), ctx3.y_i(1)]);
        assert_eq!(a.intersect(&b).unwrap_err(), GroupError::UnsupportedExact { k: 3 });
    }

    #[test]
    fn central_subspace_intersection() {
        let ctx = GroupContext::new(3).unwrap();
        let e = |c: usize| ctx.central(c);
        let a = Subgroup::close(&ctx, &[e(0), e(1), ctx.mul(&e(2), &e(3))]);
        let b = Subgroup::close(&ctx, &[ctx.mul(&e(0), &e(1)), e(2), e(3), e(9)]);
        let i = a.intersect(&b).unwrap();
        // span{0,1,2+3} ∩ span{0+1,2,3,9} = span{0+1, 2+3}
        assert_eq!(i.log_order(), 2);
        assert!(i.contains(&ctx.mul(&e(0), &e(1))));
        assert!(i.contains(&ctx.mul(&e(2), &e(3))));
        assert!(!i.contains(&e(0)));
    }

    #[test]
    fn record_round_trip_and_rejection() {
        let ctx = GroupContext::new(2).unwrap();
        let s = Subgroup::normal_closure(&ctx, &[ctx.comm(&ctx.y(), &ctx.x())]);
        let rec = s.to_record();
        assert_eq!(Subgroup::from_record(&ctx, &rec).unwrap(), s);
        let mut bad = rec.clone();
        bad.log_order += 1;
        assert!(Subgroup::from_record(&ctx, &bad).is_err());
        let mut bad = rec;
        bad.igs.truncate(1);
        assert!(Subgroup::from_record(&ctx, &bad).is_err());
    }
}
