//! Fixed-width GF(2) vectors for the central part of an element.

use std::fmt;

/// Number of 64-bit words backing a [`ZBits`]. Enough for the central rank
/// `2^k + C(2^k, 2)` up to `k = 5` (528 bits).
pub const Z_WORDS: usize = 9;

/// Maximum number of central coordinates a [`ZBits`] can hold.
pub const Z_CAPACITY: usize = Z_WORDS * 64;

/// A GF(2) vector of at most [`Z_CAPACITY`] coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ZBits(pub [u64; Z_WORDS]);

impl ZBits {
    pub const ZERO: ZBits = ZBits([0; Z_WORDS]);

    #[inline]
    pub fn unit(i: usize) -> Self {
        let mut z = Self::ZERO;
        z.set(i);
        z
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.0[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.0[i >> 6] ^= 1 << (i & 63);
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn count_ones(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    /// Index of the lowest set bit.
    #[inline]
    pub fn lowest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Iterates over the indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Extracts `len` bits starting at `start` into a new vector starting at 0.
    pub fn extract(&self, start: usize, len: usize) -> ZBits {
        let mut out = ZBits::ZERO;
        for i in self.ones().filter(|&i| i >= start && i < start + len) {
            out.set(i - start);
        }
        out
    }

    /// Byte `i` in little-endian order.
    #[inline]
    pub fn byte(&self, i: usize) -> u8 {
        (self.0[i >> 3] >> ((i & 7) * 8)) as u8
    }
}

impl std::ops::BitXor for ZBits {
    type Output = ZBits;
    #[inline]
    fn bitxor(self, rhs: ZBits) -> ZBits {
        let mut out = self;
        out ^= rhs;
        out
    }
}

impl std::ops::BitXorAssign for ZBits {
    #[inline]
    fn bitxor_assign(&mut self, rhs: ZBits) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a ^= b;
        }
    }
}

impl fmt::Debug for ZBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZBits{{")?;
        let mut first = true;
        for i in self.ones() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// Writes the low `len` bits of `bits` as hex, least significant nibble first.
pub(crate) fn to_hex_le(bits: impl Fn(usize) -> bool, len: usize) -> String {
    let digits = len.div_ceil(4).max(1);
    let mut s = String::with_capacity(digits);
    for d in 0..digits {
        let mut nib = 0u32;
        for b in 0..4 {
            let i = d * 4 + b;
            if i < len && bits(i) {
                nib |= 1 << b;
            }
        }
        s.push(char::from_digit(nib, 16).unwrap());
    }
    s
}

/// Inverse of [`to_hex_le`]; returns the set bit indices, rejecting bits at
/// or beyond `len`.
pub(crate) fn from_hex_le(s: &str, len: usize) -> Result<Vec<usize>, String> {
    if s.is_empty() {
        return Err("empty hex field".into());
    }
    let mut out = Vec::new();
    for (d, c) in s.chars().enumerate() {
        let nib = c
            .to_digit(16)
            .ok_or_else(|| format!("invalid hex digit {c:?}"))?;
        for b in 0..4 {
            if nib >> b & 1 == 1 {
                let i = d * 4 + b;
                if i >= len {
                    return Err(format!("bit {i} out of range (width {len})"));
                }
                out.push(i);
            }
        }
    }
    Ok(out)
}
