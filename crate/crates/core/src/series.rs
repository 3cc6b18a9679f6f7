//! Filtration series of `G_k`.
//!
//! Every recurrence with a power term evaluates it modulo a subgroup that
//! already contains the relevant derived subgroup, where the quotient is
//! abelian and squares of generators generate all squares:
//!
//! * lower 2-series: `[P, P] ≤ [P, G]`;
//! * Frattini series: `[Φ, Φ]` is joined explicitly;
//! * dimension series: for `c = ⌈i/2⌉`, `[D_c, D_c] ≤ [D_c, D_{⌊i/2⌋}]`,
//!   which is one of the commutator factors.
//!
//! The raw power series has no such reduction. It is computed from the
//! powers of every element at `k ≤ 2` and bracketed by a sandwich otherwise.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::ZBits;
use crate::context::GroupContext;
use crate::element::Element;
use crate::error::GroupError;
use crate::named::Commutators;
use crate::subgroup::{LayerShape, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SeriesKind {
    Gamma,
    LowerP,
    Frattini,
    Dimension,
    Power,
    MSeries,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 6] = [
        SeriesKind::Gamma,
        SeriesKind::LowerP,
        SeriesKind::Frattini,
        SeriesKind::Dimension,
        SeriesKind::Power,
        SeriesKind::MSeries,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Gamma => "gamma",
            SeriesKind::LowerP => "lowerp",
            SeriesKind::Frattini => "frattini",
            SeriesKind::Dimension => "dimension",
            SeriesKind::Power => "power",
            SeriesKind::MSeries => "m",
        }
    }

    /// Index of the first term (which is always `G_k`).
    pub fn first_index(self) -> usize {
        match self {
            SeriesKind::Gamma | SeriesKind::LowerP | SeriesKind::Dimension => 1,
            SeriesKind::Frattini | SeriesKind::Power | SeriesKind::MSeries => 0,
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesKind {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SeriesKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GroupError::Parse(format!("unknown series kind {s:?}")))
    }
}

/// A descending chain from `G_k` to the trivial subgroup.
#[derive(Clone, Debug)]
pub struct SeriesTable {
    kind: SeriesKind,
    ctx: GroupContext,
    /// Ends with exactly one trivial term.
    terms: Vec<Subgroup>,
}

/// One exported row.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesRow {
    pub kind: String,
    pub k: u32,
    pub i: usize,
    pub log_order: u32,
    pub layer_shape: String,
    pub igs: Vec<String>,
}

impl SeriesTable {
    fn from_terms(kind: SeriesKind, ctx: &GroupContext, mut terms: Vec<Subgroup>) -> Self {
        while terms.len() > 1 && terms[terms.len() - 2].is_trivial() {
            terms.pop();
        }
        if !terms.last().is_some_and(Subgroup::is_trivial) {
            terms.push(Subgroup::trivial(ctx));
        }
        SeriesTable { kind, ctx: ctx.clone(), terms }
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn first_index(&self) -> usize {
        self.kind.first_index()
    }

    /// Number of nontrivial terms.
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    /// Series index of the last stored term (the first trivial one).
    pub fn last_index(&self) -> usize {
        self.first_index() + self.terms.len() - 1
    }

    pub fn terms(&self) -> &[Subgroup] {
        &self.terms
    }

    /// Term with series index `i`; trivial beyond the end.
    pub fn term(&self, i: usize) -> Subgroup {
        let first = self.first_index();
        if i < first {
            return Subgroup::full(&self.ctx);
        }
        self.terms
            .get(i - first)
            .cloned()
            .unwrap_or_else(|| Subgroup::trivial(&self.ctx))
    }

    /// `(i, S_i)` pairs, ending with the first trivial term.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, &Subgroup)> {
        let first = self.first_index();
        self.terms.iter().enumerate().map(move |(j, s)| (first + j, s))
    }

    /// Shapes of `S_i / S_{i+1}`; the last entry is the empty shape.
    pub fn layer_shapes(&self) -> Result<Vec<LayerShape>, GroupError> {
        let mut out = Vec::with_capacity(self.terms.len());
        for w in self.terms.windows(2) {
            out.push(w[0].layer_shape(&w[1])?);
        }
        out.push(LayerShape(Vec::new()));
        Ok(out)
    }

    /// `log |S_i : S_{i+1}|` per term.
    pub fn layer_logs(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.windows(2).map(|w| w[0].log_order() - w[1].log_order()).collect();
        v.push(0);
        v
    }

    pub fn is_strictly_descending(&self) -> bool {
        self.terms
            .windows(2)
            .all(|w| w[1].is_subgroup_of(&w[0]) && w[1].log_order() < w[0].log_order())
    }

    /// Export rows. A non-abelian layer (possible in the M-series) is
    /// written as `nonabelian(2^r)` with `r = log |S_i : S_{i+1}|`.
    pub fn rows(&self) -> Result<Vec<SeriesRow>, GroupError> {
        let mut shapes = Vec::with_capacity(self.terms.len());
        for w in self.terms.windows(2) {
            shapes.push(match w[0].layer_shape(&w[1]) {
                Ok(shape) => shape.to_string(),
                Err(GroupError::NonAbelianQuotient) => {
                    format!("nonabelian(2^{})", w[0].log_order() - w[1].log_order())
                }
                Err(e) => return Err(e),
            });
        }
        shapes.push(LayerShape(Vec::new()).to_string());
        Ok(self
            .indexed()
            .zip(shapes)
            .map(|((i, s), shape)| SeriesRow {
                kind: self.kind.name().to_string(),
                k: self.ctx.k,
                i,
                log_order: s.log_order(),
                layer_shape: shape,
                igs: s.to_record().igs,
            })
            .collect())
    }

    pub fn to_json(&self) -> Result<String, GroupError> {
        let rows = self.rows()?;
        Ok(serde_json::to_string_pretty(&rows).expect("rows serialize"))
    }

    /// CSV with the sequence joined by `;`.
    pub fn to_csv(&self) -> Result<String, GroupError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kind", "k", "i", "log_order", "layer_shape", "igs"])
            .map_err(|e| GroupError::InvalidSubgroup(e.to_string()))?;
        for r in self.rows()? {
            w.write_record([
                r.kind,
                r.k.to_string(),
                r.i.to_string(),
                r.log_order.to_string(),
                r.layer_shape,
                r.igs.join(";"),
            ])
            .map_err(|e| GroupError::InvalidSubgroup(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| GroupError::InvalidSubgroup(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

/// Computes one series. The raw power series is exact only for `k <= 2`.
pub fn series(kind: SeriesKind, ctx: &GroupContext) -> Result<SeriesTable, GroupError> {
    let terms = match kind {
        SeriesKind::Gamma => iterate(ctx, |s| s.commutator_with_group()),
        SeriesKind::LowerP => iterate(ctx, |s| s.generator_powers_over(1, &s.commutator_with_group())),
        SeriesKind::Frattini => iterate(ctx, |s| s.agemo_mod_derived(1)),
        SeriesKind::Dimension => dimension_terms(ctx)?,
        SeriesKind::Power => {
            if ctx.k > 2 {
                return Err(GroupError::SandwichOnly { k: ctx.k });
            }
            let mut terms = Vec::new();
            for i in 0.. {
                let s = exact_power_subgroup(ctx, i);
                let done = s.is_trivial();
                terms.push(s);
                if done {
                    break;
                }
            }
            terms
        }
        SeriesKind::MSeries => m_terms(ctx),
    };
    Ok(SeriesTable::from_terms(kind, ctx, terms))
}

fn iterate(ctx: &GroupContext, step: impl Fn(&Subgroup) -> Subgroup) -> Vec<Subgroup> {
    let mut terms = vec![Subgroup::full(ctx)];
    while !terms.last().unwrap().is_trivial() {
        let next = step(terms.last().unwrap());
        assert!(next.log_order() < terms.last().unwrap().log_order(), "series stalled");
        terms.push(next);
    }
    terms
}

fn dimension_terms(ctx: &GroupContext) -> Result<Vec<Subgroup>, GroupError> {
    // d[j] = D_j; d[0] is unused
    let mut d = vec![Subgroup::full(ctx), Subgroup::full(ctx)];
    let cap = 4 * ctx.log_order() as usize + 4;
    for i in 2..cap {
        let mut comm = Subgroup::trivial(ctx);
        for j in 1..=i / 2 {
            comm = comm.join(&d[j].commutator_with(&d[i - j])?);
        }
        let next = d[i.div_ceil(2)].generator_powers_over(1, &comm);
        let done = next.is_trivial();
        d.push(next);
        if done {
            return Ok(d.split_off(1));
        }
    }
    Err(GroupError::InvalidSubgroup("dimension series did not terminate".into()))
}

/// `M_0 = G_k` and `M_i = ⟨x^{2^i}⟩^{G_k}`, the kernel of `G_k → G_i`.
fn m_terms(ctx: &GroupContext) -> Vec<Subgroup> {
    let mut terms = vec![Subgroup::full(ctx)];
    for i in 1..=ctx.k {
        let xi = ctx.pow(&ctx.x(), 1i64 << i);
        terms.push(Subgroup::normal_closure(ctx, &[xi]));
    }
    terms
}

/// `log |G_k : M_i|` must equal `log |G_i|`; returns the failures.
pub fn m_series_quotient_check(table: &SeriesTable) -> Vec<(usize, u32, u32)> {
    let ctx = table.context();
    let mut bad = Vec::new();
    for (i, s) in table.indexed().skip(1) {
        let expected = if i == 0 {
            0
        } else {
            GroupContext::log_order_of(i as u32)
        };
        let got = ctx.log_order() - s.log_order();
        if got != expected {
            bad.push((i, got, expected));
        }
    }
    bad
}

/// `⟨g^{2^i} : g ∈ G_k⟩` from every element; feasible for `k <= 2`.
pub fn exact_power_subgroup(ctx: &GroupContext, i: u32) -> Subgroup {
    assert!(ctx.k <= 2, "exhaustive power subgroup needs k <= 2");
    let e = 1i64 << i;
    let powers: HashSet<Element> = Subgroup::full(ctx)
        .elements()
        .into_iter()
        .map(|g| ctx.pow(&g, e))
        .collect();
    let mut gens: Vec<Element> = powers.into_iter().collect();
    gens.sort();
    Subgroup::close(ctx, &gens)
}

/// `⟨g^{2^i} : g ∈ G_k⟩` from one representative per coset of `Z_k`.
///
/// For `g = x^s h` and `z ∈ Z_k`, `(g z)^m = g^m ∏_{j<m} z^{x^{sj}}`, since
/// the conjugates of `z` are central in `H_k`. So the `m`-th powers of the
/// representatives together with the images of a basis of `Z_k` under
/// `z ↦ ∏_j z^{x^{sj}}` generate `G_k^m`. Cost is `2^{k+2^k}` powers.
pub fn coset_power_subgroup(ctx: &GroupContext, i: u32) -> Subgroup {
    let n = ctx.n;
    assert!(n <= 16, "coset power subgroup needs k <= 4");
    let m = 1usize << i.min(40);
    let x = ctx.x();
    let mut gens: Vec<Element> = Vec::new();
    for s in 0..n as u32 {
        for a in 0..(1u32 << n) {
            let g = ctx.element(s, a, ZBits::default()).unwrap();
            gens.push(ctx.pow(&g, m as i64));
        }
        let xs = ctx.pow(&x, s as i64);
        // j ↦ x^{sj} has this period; Z_k has exponent 2, so full periods
        // contribute by parity
        let period = (1..=n).find(|&j| (s as usize * j).is_multiple_of(n)).unwrap();
        for c in 0..ctx.d {
            let mut orbit = vec![ctx.central(c)];
            while orbit.len() < period {
                orbit.push(ctx.conj(orbit.last().unwrap(), &xs));
            }
            let cycle = orbit.iter().fold(ctx.identity(), |acc, z| ctx.mul(&acc, z));
            let start = if (m / period) % 2 == 1 { cycle } else { ctx.identity() };
            gens.push(orbit[..m % period].iter().fold(start, |acc, z| ctx.mul(&acc, z)));
        }
    }
    gens.sort();
    gens.dedup();
    Subgroup::close(ctx, &gens)
}

/// A certified bracket `lower ≤ target ≤ upper`.
#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub label: String,
    pub lower: Subgroup,
    pub upper: Subgroup,
    /// Present when the middle term is known exactly.
    pub target: Option<Subgroup>,
    pub checks: Vec<(String, bool)>,
}

impl SandwichReport {
    pub fn verified(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn is_tight(&self) -> bool {
        self.lower == self.upper
    }
}

#[derive(Clone, Debug)]
pub enum PowerTerm {
    Exact(Subgroup),
    Sandwich(SandwichReport),
}

/// `x^s h` for every `s` and every base vector, plus seeded random elements.
pub fn structured_sample(ctx: &GroupContext, random: usize, seed: u64) -> Vec<Element> {
    let n = ctx.n;
    let mut out = Vec::new();
    let a_count = if n <= 8 { 1u32 << n } else { 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..n as u32 {
        for a in 0..a_count {
            out.push(ctx.element(t, a, ZBits::default()).unwrap());
        }
    }
    for _ in 0..random {
        out.push(random_element(ctx, &mut rng));
    }
    out
}

pub fn random_element(ctx: &GroupContext, rng: &mut impl Rng) -> Element {
    let n = ctx.n;
    let t = rng.gen_range(0..n as u32);
    let a = if n == 32 { rng.gen() } else { rng.gen_range(0..1u32 << n) };
    let mut z = ZBits::default();
    for c in 0..ctx.d {
        if rng.gen::<bool>() {
            z.set(c);
        }
    }
    ctx.element(t, a, z).unwrap()
}

/// Term `i` of the power series: exact at `k <= 2`, a sandwich above.
///
/// The sandwich lower bound is the normal closure of the `2^i`-th powers of
/// [`structured_sample`]; the upper bound is `Γ_i` for `1 <= i <= k+1` and
/// trivial for larger `i`.
pub fn power_series(ctx: &GroupContext, i: u32, lcs: &SeriesTable) -> Result<PowerTerm, GroupError> {
    if i == 0 {
        return Ok(PowerTerm::Exact(Subgroup::full(ctx)));
    }
    if ctx.k <= 2 {
        return Ok(PowerTerm::Exact(exact_power_subgroup(ctx, i)));
    }
    Ok(PowerTerm::Sandwich(power_sandwich(ctx, i, lcs, 4096)))
}

pub fn power_sandwich(ctx: &GroupContext, i: u32, lcs: &SeriesTable, random: usize) -> SandwichReport {
    let e = 1i64 << i;
    let sample = structured_sample(ctx, random, 0x5eed + i as u64);
    let powers: HashSet<Element> = sample.iter().map(|g| ctx.pow(g, e)).collect();
    let mut gens: Vec<Element> = powers.into_iter().collect();
    gens.sort();
    let lower = Subgroup::normal_closure(ctx, &gens);
    let upper = if i <= ctx.k + 1 {
        gamma_n_subgroups(ctx, i, lcs).gamma
    } else {
        Subgroup::trivial(ctx)
    };
    let target = (ctx.k <= 3).then(|| coset_power_subgroup(ctx, i));
    let mut checks = vec![("lower <= upper".to_string(), lower.is_subgroup_of(&upper))];
    let g2 = lcs.term(1usize << (i + 1));
    checks.push((format!("gamma_{} <= lower", 1usize << (i + 1)), g2.is_subgroup_of(&lower)));
    if let Some(t) = &target {
        checks.push(("lower <= coset-reduced".into(), lower.is_subgroup_of(t)));
        checks.push(("coset-reduced <= upper".into(), t.is_subgroup_of(&upper)));
    }
    if ctx.k <= 2 {
        let exact = exact_power_subgroup(ctx, i);
        checks.push(("coset-reduced = exhaustive".into(), target.as_ref() == Some(&exact)));
    }
    SandwichReport { label: format!("G^(2^{i})"), lower, upper, target, checks }
}

/// Images of `Γ_n = ⟨x^{2^n}⟩ Q_{n-1} γ_{2^n}`, `Q_{n-1} = ⟨c_i^2 : i ≥ 2^{n-1}⟩`
/// and `T_n = ⟨x^{2^n}, c_i^2, c_j : i ≥ 2^{n-1}, j ≥ 2^n⟩` in `G_k`.
#[derive(Clone, Debug)]
pub struct GammaN {
    pub n: u32,
    pub gamma: Subgroup,
    pub q: Subgroup,
    pub t: Subgroup,
}

/// Indices beyond `2^{k+1}` only contribute elements of the trivial tail.
pub fn gamma_n_subgroups(ctx: &GroupContext, n: u32, lcs: &SeriesTable) -> GammaN {
    assert!(n >= 1, "Γ_n needs n >= 1");
    let top = 1usize << (ctx.k + 1);
    let mut cs = Commutators::new(ctx);
    let xn = ctx.pow(&ctx.x(), 1i64 << n);
    let half = 1usize << (n - 1);
    let full = 1usize << n;
    let squares: Vec<Element> = (half..=top.max(half)).map(|i| cs.c_sq(i)).collect();
    let q = Subgroup::close(ctx, &squares);
    let mut gamma_gens = vec![xn];
    gamma_gens.extend(q.igs().iter().copied());
    let gamma = lcs.term(full).extend(&gamma_gens);
    let mut t_gens = vec![xn];
    t_gens.extend(squares.iter().copied());
    t_gens.extend((full..=top.max(full)).map(|j| cs.c(j)));
    let t = Subgroup::close(ctx, &t_gens);
    GammaN { n, gamma, q, t }
}

/// `∏_{n·2^m ≥ i} γ_n^{2^m}`.
///
/// For `n ≥ 2` the factor is exact: `γ_n ≤ H_k` has class 2 with derived
/// subgroup of exponent 2, so `γ_n^2 = ⟨generator squares⟩[γ_n, γ_n]` and
/// `g ↦ g^{2^m}` is a homomorphism on `γ_n` for `m ≥ 2`. The `n = 1` factor `G^{2^{l(i)}}` is bracketed: the returned pair
/// is the product with that factor replaced by its sampled lower bound and
/// by `upper_g_power`.
pub fn dimension_product(
    i: usize,
    lcs: &SeriesTable,
    g_power_lower: &Subgroup,
    upper_g_power: &Subgroup,
) -> (Subgroup, Subgroup) {
    let mut rest = lcs.term(i);
    for n in 2..i {
        // smallest m with n·2^m ≥ i; larger m give smaller factors
        let m = (1u32..).find(|&m| n << m >= i).unwrap();
        let g = lcs.term(n);
        let f = if m == 1 {
            g.agemo_mod_derived(1)
        } else {
            g.generator_powers_over(m, &Subgroup::trivial(g.context()))
        };
        rest = rest.join(&f);
    }
    (rest.join(g_power_lower), rest.join(upper_g_power))
}

/// `l(i) = ⌈log_2 i⌉`.
pub fn ceil_log2(i: usize) -> u32 {
    if i <= 1 {
        0
    } else {
        usize::BITS - (i - 1).leading_zeros()
    }
}
