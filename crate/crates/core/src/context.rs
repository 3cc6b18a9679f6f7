//! Level parameters and precomputed shift tables for `G_k`.

use std::sync::Arc;

use crate::bits::{ZBits, Z_CAPACITY};
use crate::error::GroupError;

/// Largest level supported without `allow_large`.
pub const DEFAULT_MAX_K: u32 = 4;

/// The level `k` together with every table the collector needs.
///
/// Cheap to clone; the tables are shared.
#[derive(Clone)]
pub struct GroupContext(Arc<Tables>);

pub struct Tables {
    pub k: u32,
    /// Base width `2^k`; also the order of the top generator.
    pub n: usize,
    /// Central rank `n + C(n, 2)`.
    pub d: usize,
    /// Offset in the pair block of the first pair `(i, i+1)`, for each `i`.
    pair_base: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    /// `z_shift[t][byte][value]`: image of one byte of a central vector under
    /// the index shift by `t`.
    z_shift: Vec<Vec<[ZBits; 256]>>,
    z_bytes: usize,
}

impl std::ops::Deref for GroupContext {
    type Target = Tables;
    fn deref(&self) -> &Tables {
        &self.0
    }
}

impl std::fmt::Debug for GroupContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupContext(k={})", self.k)
    }
}

impl PartialEq for GroupContext {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
    }
}
impl Eq for GroupContext {}

impl GroupContext {
    /// Builds the context for level `k`, `1 <= k <= 4`.
    pub fn new(k: u32) -> Result<Self, GroupError> {
        Self::with_limit(k, false)
    }

    /// Like [`GroupContext::new`], but `allow_large` lifts the default cap.
    /// The storage width still bounds `k` (central rank at most 576 bits).
    pub fn with_limit(k: u32, allow_large: bool) -> Result<Self, GroupError> {
        if k == 0 {
            return Err(GroupError::InvalidLevel { k, reason: "k must be positive" });
        }
        if k > DEFAULT_MAX_K && !allow_large {
            return Err(GroupError::InvalidLevel {
                k,
                reason: "k > 4 requires allow_large",
            });
        }
        if k >= 6 {
            return Err(GroupError::InvalidLevel { k, reason: "exceeds element storage" });
        }
        let n = 1usize << k;
        let d = n + n * (n - 1) / 2;
        if d > Z_CAPACITY {
            return Err(GroupError::InvalidLevel { k, reason: "exceeds element storage" });
        }
        let mut pair_base = Vec::with_capacity(n);
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            pair_base.push(pairs.len());
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        let mut tables = Tables {
            k,
            n,
            d,
            pair_base,
            pairs,
            z_shift: Vec::new(),
            z_bytes: d.div_ceil(8),
        };
        tables.z_shift = (0..n).map(|t| tables.build_shift(t)).collect();
        Ok(GroupContext(Arc::new(tables)))
    }
}

impl GroupContext {
    /// `log2 |G_k|` from the closed formula, for any `k`.
    pub fn log_order_of(k: u32) -> u32 {
        let n = 1u64 << k;
        k + (2 * n + crate::binom2(n)) as u32
    }
}

impl Tables {
    /// `log2 |G_k| = k + 2n + C(n, 2)`.
    pub fn log_order(&self) -> u32 {
        self.k + (self.n + self.d) as u32
    }

    /// Number of polycyclic positions: top, `n` base coordinates, `d` central.
    pub fn positions(&self) -> usize {
        1 + self.n + self.d
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Central coordinate of the commutator `[y_i, y_j]`, `i != j`.
    #[inline]
    pub fn pair_coord(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(i != j && j < self.n);
        self.n + self.pair_base[i] + (j - i - 1)
    }

    /// Inverse of the pair index: `p` counts pairs lexicographically.
    pub fn pair_at(&self, p: usize) -> (usize, usize) {
        self.pairs[p]
    }

    /// Central coordinate of the square `y_i^2`.
    #[inline]
    pub fn square_coord(&self, i: usize) -> usize {
        i
    }

    #[inline]
    pub(crate) fn a_mask(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    /// Rotates the base vector: coordinate `i` moves to `i + t mod n`.
    #[inline]
    pub(crate) fn rotate_a(&self, a: u32, t: usize) -> u32 {
        if t == 0 {
            a
        } else {
            ((a << t) | (a >> (self.n - t))) & self.a_mask()
        }
    }

    /// Index shift of a central vector (squares rotate, pairs map to pairs).
    #[inline]
    pub(crate) fn shift_z(&self, z: &ZBits, t: usize) -> ZBits {
        if t == 0 {
            return *z;
        }
        let table = &self.z_shift[t];
        let mut out = ZBits::ZERO;
        for (b, row) in table.iter().enumerate().take(self.z_bytes) {
            let v = z.byte(b);
            if v != 0 {
                out ^= row[v as usize];
            }
        }
        out
    }

    /// XORs the low bits of `chunk` into the pair block starting at the
    /// coordinate of pair `(i, i+1)`.
    #[inline]
    pub(crate) fn xor_pair_row(&self, z: &mut ZBits, i: usize, chunk: u64) {
        if chunk == 0 {
            return;
        }
        let off = self.n + self.pair_base[i];
        let w = off >> 6;
        let s = off & 63;
        z.0[w] ^= chunk << s;
        if s != 0 && w + 1 < z.0.len() {
            z.0[w + 1] ^= chunk >> (64 - s);
        }
    }

    fn shift_coord(&self, c: usize, t: usize) -> usize {
        if c < self.n {
            (c + t) % self.n
        } else {
            let (i, j) = self.pairs[c - self.n];
            self.pair_coord((i + t) % self.n, (j + t) % self.n)
        }
    }

    fn build_shift(&self, t: usize) -> Vec<[ZBits; 256]> {
        let bytes = self.d.div_ceil(8);
        (0..bytes)
            .map(|b| {
                let mut row = [ZBits::ZERO; 256];
                for v in 1usize..256 {
                    let low = v.trailing_zeros() as usize;
                    let c = b * 8 + low;
                    let mut img = row[v & (v - 1)];
                    if c < self.d {
                        img.flip(self.shift_coord(c, t));
                    }
                    row[v] = img;
                }
                row
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        for (k, n, d, lo) in [(1, 2, 3, 6), (2, 4, 10, 16), (3, 8, 36, 47), (4, 16, 136, 156)] {
            let ctx = GroupContext::new(k).unwrap();
            assert_eq!(ctx.n, n);
            assert_eq!(ctx.d, d);
            assert_eq!(ctx.log_order(), lo);
        }
        assert!(GroupContext::new(0).is_err());
        assert!(GroupContext::new(5).is_err());
        assert!(GroupContext::with_limit(5, true).is_ok());
        assert!(GroupContext::with_limit(6, true).is_err());
    }

    #[test]
    fn pair_index_is_lexicographic_bijection() {
        let ctx = GroupContext::new(3).unwrap();
        let mut seen = Vec::new();
        for i in 0..ctx.n {
            for j in i + 1..ctx.n {
                let c = ctx.pair_coord(i, j);
                assert_eq!(c, ctx.pair_coord(j, i));
                assert_eq!(ctx.pair_at(c - ctx.n), (i, j));
                seen.push(c);
            }
        }
        let expect: Vec<_> = (ctx.n..ctx.d).collect();
        assert_eq!(seen, expect);
    }

    #[test]
    fn shift_tables_compose() {
        let ctx = GroupContext::new(2).unwrap();
        let mut z = ZBits::ZERO;
        for c in [0, 3, ctx.pair_coord(0, 1), ctx.pair_coord(1, 3)] {
            z.set(c);
        }
        let once = ctx.shift_z(&z, 1);
        assert!(once.get(1) && once.get(0));
        assert!(once.get(ctx.pair_coord(1, 2)));
        assert!(once.get(ctx.pair_coord(2, 0)));
        let mut acc = z;
        for _ in 0..ctx.n {
            acc = ctx.shift_z(&acc, 1);
        }
        assert_eq!(acc, z);
        assert_eq!(ctx.shift_z(&ctx.shift_z(&z, 1), 2), ctx.shift_z(&z, 3));
    }
}
