//! Exact computations in the finite 2-groups `G_k = C_{2^k} ⋉ M`, where `M`
//! is the largest class-2 exponent-4 group on `2^k` generators with
//! elementary abelian Frattini subgroup, and `x` permutes the generators
//! cyclically.
//!
//! The crate covers normal-form arithmetic ([`element`]), subgroup algebra
//! over induced polycyclic sequences ([`subgroup`]), the classical
//! filtration series ([`series`]), logarithmic-density sequences
//! ([`spectra`]), and a Todd–Coxeter oracle for small levels ([`oracle`]).

pub mod bits;
pub mod check;
pub mod claims;
pub mod context;
pub mod element;
pub mod error;
pub mod identities;
pub mod named;
pub mod oracle;
pub mod presentation;
pub mod series;
pub mod spectra;
pub mod subgroup;

pub use bits::ZBits;
pub use context::GroupContext;
pub use element::{Element, WreathElement};
pub use error::GroupError;
pub use named::{resolve, Commutators, NamedCommutator};
pub use series::{SeriesKind, SeriesTable};
pub use spectra::{DensityPoint, DensitySequence, InvariantSubspace};
pub use subgroup::{LayerShape, Subgroup};

/// `C(n, 2)`.
pub fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// `C(n, r)` as `u64`.
pub fn binom(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
