//! Normal-form arithmetic in `G_k = X ⋉ M`.
//!
//! An element is stored as `x^t · y_0^{a_0} ⋯ y_{n-1}^{a_{n-1}} · z` where
//! `z` is a product of the central generators `s_i = y_i^2` and
//! `c_{i,j} = [y_i, y_j]` (`i < j`), all of order 2. Conjugation by `x`
//! shifts every index by one modulo `n`.

use std::fmt;

use crate::bits::{from_hex_le, to_hex_le, ZBits};
use crate::context::{GroupContext, Tables};
use crate::error::GroupError;

/// A group element in canonical `(t, a, z)` form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub(crate) k: u8,
    /// Exponent of `x`, in `0..2^k`.
    pub t: u32,
    /// Exponents of `y_0 … y_{n-1}`, bit `i` for `y_i`.
    pub a: u32,
    /// Central part; see [`Tables::square_coord`] and [`Tables::pair_coord`].
    pub z: ZBits,
}

/// Image of an element in `W_k = C_2 ≀ C_{2^k}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct WreathElement {
    pub t: u32,
    pub a: u32,
}

impl Element {
    pub fn level(&self) -> u32 {
        self.k as u32
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.t == 0 && self.a == 0 && self.z.is_zero()
    }

    /// `t = 0`: the element lies in `H_k`.
    #[inline]
    pub fn in_base(&self) -> bool {
        self.t == 0
    }

    /// `t = 0, a = 0`: the element lies in `Z_k`.
    #[inline]
    pub fn in_center(&self) -> bool {
        self.t == 0 && self.a == 0
    }

    /// First nonzero polycyclic position: 0 for the top, `1..=n` for the base,
    /// `n+1..` for the central coordinates. `None` for the identity.
    #[inline]
    pub fn leading_position(&self, n: usize) -> Option<usize> {
        if self.t != 0 {
            Some(0)
        } else if self.a != 0 {
            Some(1 + self.a.trailing_zeros() as usize)
        } else {
            self.z.lowest().map(|c| 1 + n + c)
        }
    }

    /// Exponent at polycyclic position `p`.
    #[inline]
    pub fn exponent_at(&self, p: usize, n: usize) -> u32 {
        if p == 0 {
            self.t
        } else if p <= n {
            (self.a >> (p - 1)) & 1
        } else {
            self.z.get(p - 1 - n) as u32
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t={}, a={:#b}, z={:?})", self.t, self.a, self.z)
    }
}

impl GroupContext {
    pub fn identity(&self) -> Element {
        Element { k: self.k as u8, t: 0, a: 0, z: ZBits::ZERO }
    }

    /// The top generator `x_k`.
    pub fn x(&self) -> Element {
        Element { t: 1 % self.n as u32, ..self.identity() }
    }

    /// The generator `y_k = y_0`.
    pub fn y(&self) -> Element {
        self.y_i(0)
    }

    /// Base generator `y_i = y^{x^i}`.
    pub fn y_i(&self, i: usize) -> Element {
        Element { a: 1 << (i % self.n), ..self.identity() }
    }

    /// Central generator with coordinate `c`.
    pub fn central(&self, c: usize) -> Element {
        Element { z: ZBits::unit(c), ..self.identity() }
    }

    /// Builds an element from raw coordinates, reducing `t` modulo `2^k`.
    pub fn element(&self, t: u32, a: u32, z: ZBits) -> Result<Element, GroupError> {
        if a & !self.a_mask() != 0 {
            return Err(GroupError::Parse("base vector wider than 2^k".into()));
        }
        if z.ones().any(|c| c >= self.d) {
            return Err(GroupError::Parse("central vector wider than d".into()));
        }
        Ok(Element { k: self.k as u8, t: t % self.n as u32, a, z })
    }

    #[inline]
    fn check(&self, g: &Element) -> Result<(), GroupError> {
        if g.k as u32 != self.k {
            Err(GroupError::ContextMismatch { expected: self.k, found: g.k as u32 })
        } else {
            Ok(())
        }
    }

    /// `g · h`, rejecting elements from another level.
    pub fn try_mul(&self, g: &Element, h: &Element) -> Result<Element, GroupError> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    /// `g · h`. Panics (debug) on a context mismatch; use [`Self::try_mul`]
    /// for checked input.
    #[inline]
    pub fn mul(&self, g: &Element, h: &Element) -> Element {
        debug_assert_eq!(g.k, h.k);
        debug_assert_eq!(g.k as u32, self.k);
        let (a1, z1) = self.shift_m(g.a, &g.z, h.t as usize);
        let mut z = z1 ^ h.z;
        self.collect_into(&mut z, a1, h.a);
        Element {
            k: g.k,
            t: (g.t + h.t) & (self.n as u32 - 1),
            a: a1 ^ h.a,
            z,
        }
    }

    pub fn inverse(&self, g: &Element) -> Element {
        // (y^a z)^{-1} = y^a · z · (y^a)^2 in M; then pull x^{-t} to the front.
        let mut z = g.z;
        self.collect_into(&mut z, g.a, g.a);
        let t_inv = (self.n as u32 - g.t) & (self.n as u32 - 1);
        let (a, z) = self.shift_m(g.a, &z, t_inv as usize);
        Element { k: g.k, t: t_inv, a, z }
    }

    /// `g^e` for any integer `e` (negative exponents invert first).
    pub fn pow(&self, g: &Element, e: i64) -> Element {
        let mut base = if e < 0 { self.inverse(g) } else { *g };
        let mut e = e.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `[g, h] = g^{-1} h^{-1} g h`.
    pub fn comm(&self, g: &Element, h: &Element) -> Element {
        let gh = self.mul(g, h);
        let hg = self.mul(h, g);
        self.mul(&self.inverse(&hg), &gh)
    }

    /// Left-normed commutator `[g_0, g_1, …, g_m]`.
    pub fn comm_chain(&self, items: &[Element]) -> Element {
        let mut it = items.iter();
        let mut acc = match it.next() {
            Some(g) => *g,
            None => return self.identity(),
        };
        for h in it {
            acc = self.comm(&acc, h);
        }
        acc
    }

    /// `h^g = g^{-1} h g`.
    pub fn conj(&self, h: &Element, g: &Element) -> Element {
        self.mul(&self.mul(&self.inverse(g), h), g)
    }

    /// Order of `g`; always a power of two.
    pub fn order(&self, g: &Element) -> u64 {
        let mut h = *g;
        let mut ord = 1u64;
        while !h.is_identity() {
            h = self.mul(&h, &h);
            ord <<= 1;
        }
        ord
    }

    /// Projection `G_k → G_k / Z_k ≅ W_k`.
    pub fn project_to_wreath(&self, g: &Element) -> WreathElement {
        WreathElement { t: g.t, a: g.a }
    }

    /// Product in `W_k`: the base group is elementary abelian and `x` shifts.
    pub fn wreath_mul(&self, g: &WreathElement, h: &WreathElement) -> WreathElement {
        WreathElement {
            t: (g.t + h.t) & (self.n as u32 - 1),
            a: self.rotate_a(g.a, h.t as usize) ^ h.a,
        }
    }

    /// Canonical text form `x^<t> y:<hex> s:<hex> c:<hex>`.
    pub fn format_element(&self, g: &Element) -> String {
        let n = self.n;
        let y = to_hex_le(|i| (g.a >> i) & 1 == 1, n);
        let s = to_hex_le(|i| g.z.get(i), n);
        let c = to_hex_le(|i| g.z.get(n + i), self.pair_count());
        format!("x^{} y:{} s:{} c:{}", g.t, y, s, c)
    }

    /// Parses the text form written by [`Self::format_element`].
    pub fn parse_element(&self, text: &str) -> Result<Element, GroupError> {
        let err = |m: &str| GroupError::Parse(format!("{m} in {text:?}"));
        let mut parts = text.split_whitespace();
        let t = parts
            .next()
            .and_then(|p| p.strip_prefix("x^"))
            .ok_or_else(|| err("missing x^<t>"))?
            .parse::<u32>()
            .map_err(|_| err("bad top exponent"))?;
        if t >= self.n as u32 {
            return Err(err("top exponent out of range"));
        }
        let mut field = |tag: &str, len: usize| -> Result<Vec<usize>, GroupError> {
            let raw = parts
                .next()
                .and_then(|p| p.strip_prefix(tag))
                .ok_or_else(|| err(&format!("missing {tag}")))?;
            from_hex_le(raw, len).map_err(|m| err(&m))
        };
        let a = field("y:", self.n)?.into_iter().fold(0u32, |acc, i| acc | 1 << i);
        let mut z = ZBits::ZERO;
        for i in field("s:", self.n)? {
            z.set(i);
        }
        for i in field("c:", self.pair_count())? {
            z.set(self.n + i);
        }
        if parts.next().is_some() {
            return Err(err("trailing input"));
        }
        Ok(Element { k: self.k as u8, t, a, z })
    }
}

impl Tables {
    /// Applies `σ^t` (conjugation by `x^t`) to the `M`-part `y^a z`.
    ///
    /// Rotating indices breaks the increasing order of the word: the block of
    /// generators landing on `0..t` must move in front of the block landing on
    /// `t..n`, picking up `c_{j,i}` for every such pair.
    #[inline]
    pub(crate) fn shift_m(&self, a: u32, z: &ZBits, t: usize) -> (u32, ZBits) {
        if t == 0 {
            return (a, *z);
        }
        let ar = self.rotate_a(a, t);
        let mut zr = self.shift_z(z, t);
        let low = ar & ((1u32 << t) - 1);
        let high = ar & !((1u32 << t) - 1);
        let mut rest = low;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.xor_pair_row(&mut zr, j, (high >> (j + 1)) as u64);
        }
        (ar, zr)
    }

    /// Collects `y^{a} · y^{b}` into `y^{a⊕b}`, adding the central correction
    /// to `z`: `s_i` for `a_i b_i`, and `c_{i,j}` (`i < j`) for `b_i a_j`.
    #[inline]
    pub(crate) fn collect_into(&self, z: &mut ZBits, a: u32, b: u32) {
        let sq = a & b;
        z.0[0] ^= sq as u64;
        let mut rest = b;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if i + 1 < self.n {
                self.xor_pair_row(z, i, (a >> (i + 1)) as u64);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_laws() {
        let ctx = GroupContext::new(2).unwrap();
        let e = ctx.identity();
        let g = ctx.mul(&ctx.x(), &ctx.y_i(3));
        assert_eq!(ctx.mul(&e, &g), g);
        assert_eq!(ctx.mul(&g, &e), g);
        assert_eq!(ctx.inverse(&e), e);
        assert_eq!(ctx.pow(&g, 0), e);
        assert_eq!(ctx.comm(&g, &e), e);
    }

    #[test]
    fn y_squared_is_s0() {
        let ctx = GroupContext::new(1).unwrap();
        let y = ctx.y();
        let yy = ctx.mul(&y, &y);
        assert_eq!(yy, ctx.central(ctx.square_coord(0)));
        // y^{-1} = y · y^2
        let inv = ctx.inverse(&y);
        assert_eq!(inv.t, 0);
        assert_eq!(inv.a, 1);
        assert_eq!(inv.z, ZBits::unit(0));
        assert_eq!(ctx.order(&y), 4);
    }

    #[test]
    fn x_conjugation_is_the_shift() {
        let ctx = GroupContext::new(3).unwrap();
        let x = ctx.x();
        for i in 0..ctx.n {
            assert_eq!(ctx.conj(&ctx.y_i(i), &x), ctx.y_i(i + 1));
        }
        assert_eq!(ctx.pow(&x, ctx.n as i64), ctx.identity());
        assert_eq!(ctx.order(&x), ctx.n as u64);
        // [y_0, y_1] and its conjugates
        let c01 = ctx.comm(&ctx.y_i(0), &ctx.y_i(1));
        assert_eq!(c01, ctx.central(ctx.pair_coord(0, 1)));
        let c = ctx.conj(&c01, &ctx.pow(&x, 7));
        assert_eq!(c, ctx.central(ctx.pair_coord(7, 0)));
    }

    #[test]
    fn wrap_correction() {
        // conjugating y_0 y_1 by x in G_1 gives y_1 y_0 = y_0 y_1 c_{0,1}
        let ctx = GroupContext::new(1).unwrap();
        let m = ctx.mul(&ctx.y_i(0), &ctx.y_i(1));
        let conj = ctx.conj(&m, &ctx.x());
        let expect = ctx.mul(&m, &ctx.central(ctx.pair_coord(0, 1)));
        assert_eq!(conj, expect);
    }

    #[test]
    fn context_mismatch_rejected() {
        let c1 = GroupContext::new(1).unwrap();
        let c2 = GroupContext::new(2).unwrap();
        let err = c2.try_mul(&c1.x(), &c2.x()).unwrap_err();
        assert_eq!(err, GroupError::ContextMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn text_form() {
        let ctx = GroupContext::new(2).unwrap();
        let g = ctx.mul(&ctx.pow(&ctx.x(), 3), &ctx.comm(&ctx.y(), &ctx.x()));
        let g = ctx.mul(&g, &ctx.central(ctx.pair_coord(1, 3)));
        let s = ctx.format_element(&g);
        assert_eq!(ctx.parse_element(&s).unwrap(), g);
        assert_eq!(ctx.format_element(&ctx.identity()), "x^0 y:0 s:0 c:00");
        assert!(ctx.parse_element("x^4 y:0 s:0 c:00").is_err());
        assert!(ctx.parse_element("x^0 y:0 s:0").is_err());
        assert!(ctx.parse_element("x^0 y:0 s:0 c:00 extra").is_err());
    }

    #[test]
    fn wreath_projection_kernel() {
        let ctx = GroupContext::new(2).unwrap();
        let z = ctx.central(5);
        assert_eq!(ctx.project_to_wreath(&z), WreathElement { t: 0, a: 0 });
        assert_eq!(ctx.project_to_wreath(&ctx.x()), WreathElement { t: 1, a: 0 });
    }
}
