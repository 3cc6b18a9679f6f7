//! Registry of checkable statements about `G_k`, keyed by stable ids.
//!
//! Each claim evaluates to a list of [`CheckItem`]s at one level `k`. A claim
//! whose middle term is only bracketed reports `sandwich-only` when every
//! inclusion holds.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::check::CheckItem;
use crate::context::GroupContext;
use crate::element::Element;
use crate::error::GroupError;
use crate::identities;
use crate::named::Commutators;
use crate::oracle;
use crate::presentation;
use crate::series::{self, SeriesKind, SeriesTable};
use crate::spectra;
use crate::subgroup::{LayerShape, Subgroup};
use crate::binom2;

/// Series of one level, computed on first use and shared between claims.
pub struct Level {
    pub ctx: GroupContext,
    tables: [OnceLock<SeriesTable>; 5],
}

impl Level {
    pub fn new(k: u32) -> Result<Level, GroupError> {
        Ok(Level::from_context(GroupContext::new(k)?))
    }

    pub fn from_context(ctx: GroupContext) -> Level {
        Level { ctx, tables: Default::default() }
    }

    pub fn k(&self) -> u32 {
        self.ctx.k
    }

    /// Any kind but [`SeriesKind::Power`].
    pub fn table(&self, kind: SeriesKind) -> &SeriesTable {
        let slot = match kind {
            SeriesKind::Gamma => 0,
            SeriesKind::LowerP => 1,
            SeriesKind::Frattini => 2,
            SeriesKind::Dimension => 3,
            SeriesKind::MSeries => 4,
            SeriesKind::Power => panic!("power series has no cached table"),
        };
        self.tables[slot].get_or_init(|| series::series(kind, &self.ctx).expect("series computes"))
    }

    pub fn lcs(&self) -> &SeriesTable {
        self.table(SeriesKind::Gamma)
    }

    fn top(&self) -> usize {
        1usize << (self.k() + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SandwichOnly,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SandwichOnly => "sandwich-only",
        }
    }

    /// Sandwich-only counts as success: all of its inclusions hold.
    pub fn is_success(self) -> bool {
        self != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationResult {
    pub claim_id: String,
    pub k: u32,
    pub status: Status,
    pub statement: String,
    pub details: Vec<CheckItem>,
}

struct Outcome {
    items: Vec<CheckItem>,
    sandwich: bool,
}

impl From<Vec<CheckItem>> for Outcome {
    fn from(items: Vec<CheckItem>) -> Self {
        Outcome { items, sandwich: false }
    }
}

pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    /// The operation that evaluates it.
    pub op: &'static str,
    pub k_min: u32,
    pub k_max: u32,
    run: fn(&Level) -> Outcome,
}

impl Claim {
    pub fn supports(&self, k: u32) -> bool {
        (self.k_min..=self.k_max).contains(&k)
    }

    pub fn run(&self, level: &Level) -> VerificationResult {
        let out = (self.run)(level);
        let status = if out.items.iter().any(|c| !c.passed) || out.items.is_empty() {
            Status::Fail
        } else if out.sandwich {
            Status::SandwichOnly
        } else {
            Status::Pass
        };
        VerificationResult {
            claim_id: self.id.to_string(),
            k: level.k(),
            status,
            statement: self.statement.to_string(),
            details: out.items,
        }
    }
}

macro_rules! claim {
    ($id:literal, $op:literal, $k_min:literal ..= $k_max:literal, $run:expr, $statement:literal) => {
        Claim { id: $id, statement: $statement, op: $op, k_min: $k_min, k_max: $k_max, run: $run }
    };
}

/// Sorted by id.
pub static REGISTRY: &[Claim] = &[
    claim!("cor-zij-shift", "commutator_identity_checks", 1..=4, cor_zij_shift,
        "[z_{i,j}, x^{2^t}] = z_{i+2^t,j} z_{i,j+2^t} z_{i+2^t,j+2^t}"),
    claim!("eq-sq-comm", "commutator_identity_checks", 1..=4, eq_sq_comm,
        "1 = [y, x^{2^k}] and c_{2^{k-1}+1}^2 c_{2^k+1} lies in gamma_{2^k+2}"),
    claim!("lemma-cm2k", "membership", 1..=4, lemma_cm2k,
        "c_{m,2^k} lies in gamma_{2^k+m+1} for even m"),
    claim!("lemma-comm-eq1", "commutator_identity_checks", 1..=3, lemma_comm_eq1,
        "(ab)^{2^r} = a^{2^r} b^{2^r} prod_j [b,a,..(j)..,a]^{C(2^r,j+1)} modulo K(a,b), a = x, b = y"),
    claim!("lemma-comm-eq2", "commutator_identity_checks", 1..=3, lemma_comm_eq2,
        "[a^{2^r}, b] = prod_j [a,b,a,..(j)..,a]^{C(2^r,j+1)} modulo K(a,[a,b]), a = x, b = y"),
    claim!("lemma-double-product", "commutator_identity_checks", 1..=4, lemma_double_product,
        "[z_{i,j}, x, ..(m).., x] = prod_s prod_n z_{i+m-n, j+m-s+n}^{C(m,s)C(s,n)}"),
    claim!("lemma-exp2-i", "membership", 1..=4, lemma_exp2_i,
        "c_i^2 lies in gamma_{i+1} for i >= 2^{k-1}+1"),
    claim!("lemma-exp2-ii", "membership", 1..=4, lemma_exp2_ii,
        "c_i^2 = 1 and c_i lies in Z_k for i >= 2^k+1"),
    claim!("lemma-exp2-iii", "membership", 1..=4, lemma_exp2_iii,
        "c_i lies in gamma_{i+1} for i >= 2^k+2^{k-1}+1"),
    claim!("lemma-exponent", "power", 1..=4, lemma_exponent,
        "G_k has exponent 2^{k+2}, witnessed by xy with (xy)^{2^{k+1}} = c_{2^k}^2"),
    claim!("lemma-gamma-square", "gamma_n_subgroups", 1..=4, lemma_gamma_square,
        "Gamma_n^2 <= Gamma_{n+1} with Gamma_n = <x^{2^n}> Q_{n-1} gamma_{2^n} normal"),
    claim!("m-series-kernel", "series", 1..=4, m_series_kernel,
        "M_i = <x^{2^i}>^G is the kernel of G_k -> G_i"),
    claim!("oracle", "oracle", 1..=2, oracle_claim,
        "the engine agrees with coset enumeration of the exported presentation"),
    claim!("power-series", "power_series", 1..=3, power_series_claim,
        "G_k^{2^i} lies between sampled powers and Gamma_i, and G_k^{2^{k+2}} = 1"),
    claim!("presentation-round-trip", "export_presentation", 1..=4, presentation_round_trip,
        "the exported presentation parses, holds in the engine and has polycyclic length log|G_k|"),
    claim!("prop-dimension", "series", 1..=4, prop_dimension,
        "D_i = <x^{2^{l(i)}}> gamma_{ceil(i/2)}^2 gamma_i, length 2^{k+1}, and D_i = prod_{n 2^m >= i} gamma_n^{2^m}"),
    claim!("prop-lcs-class", "series", 1..=4, prop_lcs_class,
        "G_k has class 2^{k+1}-1 and G_k/gamma_2 = C_{2^k} x C_4"),
    claim!("prop-lcs-generators", "lcs_generator_check", 1..=4, prop_lcs_generators,
        "gamma_i = <listed c_i, c_{a,i-a}> gamma_{i+1} in each index range"),
    claim!("prop-lcs-shapes", "layer_shape", 1..=4, prop_lcs_shapes,
        "gamma_i/gamma_{i+1} has the stated elementary shape in each index range"),
    claim!("prop-lower2", "series", 1..=4, prop_lower2,
        "lower 2-series has length 2^{k+1}-1, P_2 = <x^2,y^2> gamma_2, P_i = <x^{2^{i-1}}, c_{i-1}^2> gamma_i then <x^{2^{i-1}}> gamma_i"),
    claim!("prop-order", "close", 1..=4, prop_order,
        "log|G_k| = k + 2^{k+1} + C(2^k,2), log|Z_k| = 2^k + C(2^k,2)"),
    claim!("remark-derived", "commutator_subgroup", 1..=4, remark_derived,
        "[H_k,Z_k] = 1, H_k^2 = Z_k, H_k has exponent 4 and is generated by the c_i"),
    claim!("remark-index", "intersect", 1..=3, remark_index,
        "log|Z : gamma_i ∩ Z| = 2C((i+1)/2,2) for odd i and 2C(i/2,2)+i/2 for even i"),
    claim!("series-normal", "series", 1..=4, series_normal,
        "every computed series strictly descends from G_k to 1 through normal subgroups"),
    claim!("spectrum-path", "spectrum_sweep", 1..=4, spectrum_path,
        "nested shift-invariant subgroups of Z_k give weakly increasing top densities up to Z_k"),
    claim!("thm-f-sandwich", "gamma_n_subgroups", 1..=4, thm_f_sandwich,
        "T_n (gamma_{2^n+2^{n-1}-1} ∩ Z) <= Phi_n <= Gamma_n"),
    claim!("thm-ld-complement-dimension", "complement_density", 1..=4, thm_ld_complement_dimension,
        "log|G : S_i Z| = 2i for the dimension series, S_0 = G"),
    claim!("thm-ld-complement-lowerp", "complement_density", 1..=4, thm_ld_complement_lowerp,
        "log|G : S_i Z| = 2i for the lower 2-series, S_0 = G"),
    claim!("thm-m-density", "density_sequence", 1..=4, thm_m_density,
        "log|Z : M_k ∩ Z| = 2^k + C(2^k,2) and the M-density of Z rises to (2^k + C(2^k,2))/log|G_k|"),
    claim!("thm-p-gamma-index", "gamma_n_subgroups", 1..=4, thm_p_gamma_index,
        "log|Z : Gamma_k ∩ Z| = 2C(2^{k-1},2), G^{2^k} <= Gamma_k, log|G : G^{2^k} Z| <= k + 2^k"),
];

pub fn find(id: &str) -> Option<&'static Claim> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Comma-separated ids; an entry also selects every id it prefixes at a `-`
/// boundary (`lemma-exp2` selects `lemma-exp2-i`, `-ii`, `-iii`).
pub fn select(selector: &str) -> Result<Vec<&'static Claim>, String> {
    let mut out: Vec<&'static Claim> = Vec::new();
    for part in selector.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let hits: Vec<&'static Claim> = REGISTRY
            .iter()
            .filter(|c| c.id == part || c.id.strip_prefix(part).is_some_and(|r| r.starts_with('-')))
            .collect();
        if hits.is_empty() {
            return Err(format!("unknown claim id {part:?}"));
        }
        for h in hits {
            if !out.iter().any(|c| c.id == h.id) {
                out.push(h);
            }
        }
    }
    if out.is_empty() {
        return Err("empty claim selection".into());
    }
    out.sort_by_key(|c| c.id);
    Ok(out)
}

/// Runs `claims` in parallel; results are ordered by claim id.
pub fn verify(level: &Level, claims: &[&'static Claim]) -> Vec<VerificationResult> {
    let mut out: Vec<VerificationResult> = claims.par_iter().map(|c| c.run(level)).collect();
    out.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    out
}

// ---------------------------------------------------------------------------
// claims

fn prop_order(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let (k, n) = (ctx.k, ctx.n as u64);
    let formula = k + (1u32 << (k + 1)) + binom2(n) as u32;
    let g = Subgroup::close(ctx, &[ctx.x(), ctx.y()]);
    let mut zgens = Vec::new();
    let x = ctx.x();
    let conj: Vec<Element> = (0..ctx.n).map(|i| ctx.conj(&ctx.y(), &ctx.pow(&x, i as i64))).collect();
    for (i, a) in conj.iter().enumerate() {
        zgens.push(ctx.mul(a, a));
        for b in &conj[i + 1..] {
            zgens.push(ctx.comm(a, b));
        }
    }
    let z = Subgroup::close(ctx, &zgens);
    let h = Subgroup::normal_closure(ctx, &[ctx.y()]);
    let mut items = vec![
        CheckItem::eq("log|<x,y>| = k + 2^{k+1} + C(2^k,2)", g.log_order(), formula),
        CheckItem::eq("log|Z_k| = 2^k + C(2^k,2)", z.log_order(), (n + binom2(n)) as u32),
        CheckItem::new("Z_k is the t = 0, a = 0 part", z == Subgroup::center_part(ctx), ""),
        CheckItem::eq("log|<y>^G| = 2^{k+1} + C(2^k,2)", h.log_order(), (2 * n + binom2(n)) as u32),
        CheckItem::eq("log|G_k : Z_k| = log|W_k| = k + 2^k", g.log_order() - z.log_order(), k + n as u32),
    ];
    if let Some(v) = [6u32, 16, 47, 156].get(k as usize - 1) {
        items.push(CheckItem::eq("tabulated value", g.log_order(), *v));
    }
    items.into()
}

fn remark_derived(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let h = Subgroup::base(ctx);
    let z = Subgroup::center_part(ctx);
    let hz = h.commutator_with(&z).expect("both normal");
    let hh = h.derived();
    let h2 = h.agemo_mod_derived(1);
    let fourth = h.igs().iter().all(|g| ctx.pow(g, 4).is_identity());
    let z_exp2 = z.igs().iter().all(|g| ctx.mul(g, g).is_identity());
    let mut cs = Commutators::new(ctx);
    let cgens: Vec<Element> = (1..=l.top()).map(|i| cs.c(i)).collect();
    vec![
        CheckItem::new("[H_k, Z_k] = 1", hz.is_trivial(), format!("log = {}", hz.log_order())),
        CheckItem::new("[H_k, H_k] <= Z_k", hh.is_subgroup_of(&z), format!("log = {}", hh.log_order())),
        CheckItem::new("H_k^2 = Z_k", h2 == z, format!("log|H_k^2| = {}", h2.log_order())),
        CheckItem::new(
            "H_k has exponent 4",
            fourth && z_exp2 && ctx.order(&ctx.y()) == 4,
            "generator fourth powers vanish, Z_k elementary, y of order 4",
        ),
        CheckItem::new(
            "H_k = <c_1, ..., c_{2^{k+1}}>",
            Subgroup::close(ctx, &cgens) == h,
            format!("log|H_k| = {}", h.log_order()),
        ),
    ]
    .into()
}

fn lemma_exp2_i(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let lcs = l.lcs();
    let mut cs = Commutators::new(ctx);
    let lo = ctx.n / 2 + 1;
    let bad: Vec<usize> = (lo..=l.top()).filter(|&i| !lcs.term(i + 1).contains(&cs.c_sq(i))).collect();
    vec![CheckItem::new(
        format!("c_i^2 in gamma_(i+1), {lo} <= i <= {}", l.top()),
        bad.is_empty(),
        format!("failures at {bad:?}"),
    )]
    .into()
}

fn lemma_exp2_ii(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let mut cs = Commutators::new(ctx);
    let lo = ctx.n + 1;
    let range = lo..=l.top() + 1;
    let sq: Vec<usize> = range.clone().filter(|&i| !cs.c_sq(i).is_identity()).collect();
    let central: Vec<usize> = range.filter(|&i| !cs.c(i).in_center()).collect();
    vec![
        CheckItem::new(format!("c_i^2 = 1, i >= {lo}"), sq.is_empty(), format!("failures at {sq:?}")),
        CheckItem::new(format!("c_i in Z_k, i >= {lo}"), central.is_empty(), format!("failures at {central:?}")),
    ]
    .into()
}

fn lemma_exp2_iii(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let lcs = l.lcs();
    let mut cs = Commutators::new(ctx);
    let lo = ctx.n + ctx.n / 2 + 1;
    let bad: Vec<usize> = (lo..=l.top()).filter(|&i| !lcs.term(i + 1).contains(&cs.c(i))).collect();
    vec![CheckItem::new(
        format!("c_i in gamma_(i+1), {lo} <= i <= {}", l.top()),
        bad.is_empty(),
        format!("failures at {bad:?}"),
    )]
    .into()
}

fn lemma_cm2k(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let lcs = l.lcs();
    let mut cs = Commutators::new(ctx);
    let n = ctx.n;
    let bad: Vec<usize> =
        (2..=l.top()).step_by(2).filter(|&m| !lcs.term(n + m + 1).contains(&cs.cij(m, n))).collect();
    vec![CheckItem::new(
        format!("c_(m,{n}) in gamma_({n}+m+1), even m <= {}", l.top()),
        bad.is_empty(),
        format!("failures at m = {bad:?}"),
    )]
    .into()
}

fn prop_lcs_class(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let lcs = l.lcs();
    let logs = lcs.layer_logs();
    let top_shape = lcs.term(1).layer_shape(&lcs.term(2));
    let gens = lcs.term(2).extend(&[ctx.x(), ctx.y()]);
    vec![
        CheckItem::eq("class", lcs.length(), l.top() - 1),
        CheckItem::new(
            "G_k/gamma_2 = C_(2^k) x C_4",
            top_shape.as_ref().ok() == Some(&LayerShape::from_parts(&[ctx.n as u64, 4], 0)),
            format!("{top_shape:?}"),
        ),
        CheckItem::new("G_k = <x, y> gamma_2", gens == Subgroup::full(ctx), ""),
        CheckItem::eq("sum of layer logs", logs.iter().sum::<u32>(), ctx.log_order()),
        CheckItem::new("strictly descending", lcs.is_strictly_descending(), format!("layer logs {logs:?}")),
    ]
    .into()
}

/// The generators listed for `γ_i` modulo `γ_{i+1}`, `2 <= i <= 2^{k+1}`.
pub fn lcs_listed_generators(cs: &mut Commutators, i: usize) -> (&'static str, Vec<Element>) {
    let n = cs.context().n;
    let mut out = Vec::new();
    let range = if i <= n {
        out.push(cs.c(i));
        let mut a = 2;
        while a < i {
            out.push(cs.cij(a, i - a));
            a += 2;
        }
        "2 <= i <= 2^k"
    } else {
        let with_ci = i <= n + n / 2;
        if with_ci {
            out.push(cs.c(i));
        }
        let mut a = if i.is_multiple_of(2) { i - n + 2 } else { i - n + 1 };
        while a <= n {
            out.push(cs.cij(a, i - a));
            a += 2;
        }
        if with_ci {
            "2^k+1 <= i <= 2^k+2^(k-1)"
        } else {
            "2^k+2^(k-1)+1 <= i <= 2^(k+1)"
        }
    };
    (range, out)
}

fn prop_lcs_generators(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let lcs = l.lcs();
    let mut cs = Commutators::new(ctx);
    let mut items = Vec::new();
    for i in 2..=l.top() {
        let (range, gens) = lcs_listed_generators(&mut cs, i);
        let got = lcs.term(i + 1).extend(&gens);
        let want = lcs.term(i);
        items.push(CheckItem::new(
            format!("gamma_{i} ({range})"),
            got == want,
            format!("{} generators, log {} vs {}", gens.len(), got.log_order(), want.log_order()),
        ));
    }
    items.into()
}

/// The stated shape of `γ_i/γ_{i+1}` for `1 <= i <= 2^{k+1}`.
pub fn lcs_expected_shape(k: u32, i: usize) -> LayerShape {
    let n = 1usize << k;
    let top = 2 * n;
    let even = i.is_multiple_of(2);
    if i == 1 {
        LayerShape::from_parts(&[n as u64, 4], 0)
    } else if i <= n / 2 {
        LayerShape::from_parts(&[4], if even { (i - 2) / 2 } else { (i - 1) / 2 })
    } else if i <= n {
        LayerShape::from_parts(&[], if even { i / 2 } else { i.div_ceil(2) })
    } else if i <= n + n / 2 {
        LayerShape::from_parts(&[], if even { (top - i + 2) / 2 } else { (top - i + 3) / 2 })
    } else {
        LayerShape::from_parts(&[], if even { (top - i) / 2 } else { (top - i).div_ceil(2) })
    }
}

fn prop_lcs_shapes(l: &Level) -> Outcome {
    let lcs = l.lcs();
    let mut items = Vec::new();
    for i in 1..=l.top() {
        let got = lcs.term(i).layer_shape(&lcs.term(i + 1));
        let want = lcs_expected_shape(l.k(), i);
        let shown = match &got {
            Ok(s) => s.to_string(),
            Err(e) => e.to_string(),
        };
        items.push(CheckItem::new(
            format!("gamma_{i}/gamma_{}", i + 1),
            got.as_ref().ok() == Some(&want),
            format!("got {shown}, expected {want}"),
        ));
    }
    items.into()
}

/// `log|Z : γ_i ∩ Z|` as stated.
pub fn remark_index_formula(i: usize) -> u64 {
    if i % 2 == 1 {
        2 * binom2(i.div_ceil(2) as u64)
    } else {
        2 * binom2((i / 2) as u64) + (i / 2) as u64
    }
}

/// `log|Z_m : γ_i(G_m) ∩ Z_m|` for `1 <= i <= max_i`.
pub fn center_index_profile(lcs: &SeriesTable, max_i: usize) -> Vec<u64> {
    let z = lcs.context().d as u32;
    (1..=max_i).map(|i| (z - lcs.term(i).center_intersection().log_order()) as u64).collect()
}

/// The statement concerns the inverse limit. `G_m` reproduces it for
/// `i <= 2^{m-1}+1`, so it is evaluated in `G_{k+2}`; the values of `G_k`
/// itself are checked on that range only.
fn remark_index(l: &Level) -> Outcome {
    let k = l.k();
    let host_k = k + 2;
    let host = match GroupContext::with_limit(host_k, true) {
        Ok(c) => c,
        Err(e) => return vec![CheckItem::new("host level", false, e.to_string())].into(),
    };
    let host_lcs = series::series(SeriesKind::Gamma, &host).expect("gamma series");
    let top = l.top();
    let want: Vec<u64> = (1..=top).map(remark_index_formula).collect();
    let got = center_index_profile(&host_lcs, top);
    let local = center_index_profile(l.lcs(), top);
    let faithful = (1usize << (k - 1)) + 1;
    let agree = local.iter().zip(&want).take_while(|(a, b)| a == b).count();
    vec![
        CheckItem::new(
            format!("G_{host_k}, 1 <= i <= {top}"),
            got == want,
            format!("got {got:?}, formula {want:?}"),
        ),
        CheckItem::new(
            format!("G_{k}, 1 <= i <= {faithful}"),
            local[..faithful] == want[..faithful],
            format!("G_{k} values {local:?}; agree with the formula for i <= {agree}"),
        ),
    ]
    .into()
}

fn lemma_exponent(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let k = ctx.k;
    let xy = ctx.mul(&ctx.x(), &ctx.y());
    let e = 1u64 << (k + 2);
    let mut cs = Commutators::new(ctx);
    let half = ctx.pow(&xy, (e / 2) as i64);
    let mut items = vec![
        CheckItem::eq("order of x", ctx.order(&ctx.x()), 1u64 << k),
        CheckItem::eq("order of y", ctx.order(&ctx.y()), 4),
        CheckItem::eq("order of xy", ctx.order(&xy), e),
        CheckItem::new(
            "(xy)^(2^(k+1)) = c_(2^k)^2 != 1",
            half == cs.c_sq(ctx.n) && !half.is_identity(),
            ctx.format_element(&half),
        ),
    ];
    if k <= 2 {
        let els = oracle::all_elements(ctx);
        let max = els.iter().map(|g| ctx.order(g)).max().unwrap();
        items.push(CheckItem::new(
            "maximum element order (exhaustive)",
            max == e,
            format!("{} elements, max order {max}", els.len()),
        ));
    } else {
        let sample = series::structured_sample(ctx, 4096, 0xe4);
        let max = sample.iter().map(|g| ctx.order(g)).max().unwrap();
        items.push(CheckItem::new(
            "maximum element order (coset representatives and random)",
            max == e,
            format!("{} elements, max order {max}", sample.len()),
        ));
    }
    items.into()
}

fn prop_lower2(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let lcs = l.lcs();
    let p = l.table(SeriesKind::LowerP);
    let mut cs = Commutators::new(ctx);
    let x_pow = |e: usize| ctx.pow(&ctx.x(), 1i64 << e.min(40));
    let mut items = vec![
        CheckItem::eq("length", p.length(), l.top() - 1),
        CheckItem::new(
            "P_2 = <x^2, y^2> gamma_2",
            p.term(2) == lcs.term(2).extend(&[x_pow(1), ctx.pow(&ctx.y(), 2)]),
            "",
        ),
    ];
    let mid = ctx.n / 2 + 1;
    let bad_a: Vec<usize> =
        (3..=mid).filter(|&i| p.term(i) != lcs.term(i).extend(&[x_pow(i - 1), cs.c_sq(i - 1)])).collect();
    let bad_b: Vec<usize> = (mid + 1..=l.top()).filter(|&i| p.term(i) != lcs.term(i).extend(&[x_pow(i - 1)])).collect();
    items.push(CheckItem::new(
        format!("P_i = <x^(2^(i-1)), c_(i-1)^2> gamma_i, 3 <= i <= {mid}"),
        bad_a.is_empty(),
        format!("failures at {bad_a:?}"),
    ));
    items.push(CheckItem::new(
        format!("P_i = <x^(2^(i-1))> gamma_i, {} <= i <= {}", mid + 1, l.top()),
        bad_b.is_empty(),
        format!("failures at {bad_b:?}"),
    ));
    items.into()
}

/// `G_k^{2^l}`: exhaustive at `k <= 2`, coset-reduced above.
fn power_subgroup(ctx: &GroupContext, l: u32) -> Subgroup {
    if l == 0 {
        Subgroup::full(ctx)
    } else if ctx.k <= 2 {
        series::exact_power_subgroup(ctx, l)
    } else {
        series::coset_power_subgroup(ctx, l)
    }
}

fn prop_dimension(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let lcs = l.lcs();
    let d = l.table(SeriesKind::Dimension);
    let mut items = vec![CheckItem::eq("length", d.length(), l.top())];
    let mut closed_bad = Vec::new();
    let mut product_bad = Vec::new();
    let powers: Vec<Subgroup> = (0..=series::ceil_log2(l.top())).map(|e| power_subgroup(ctx, e)).collect();
    for i in 1..=l.top() {
        let li = series::ceil_log2(i);
        let xi = ctx.pow(&ctx.x(), 1i64 << li);
        let closed = lcs.term(i.div_ceil(2)).agemo_mod_derived(1).join(&lcs.term(i)).extend(&[xi]);
        if closed != d.term(i) {
            closed_bad.push(i);
        }
        let (product, _) = series::dimension_product(i, lcs, &powers[li as usize], &powers[li as usize]);
        if product != d.term(i) {
            product_bad.push(i);
        }
    }
    items.push(CheckItem::new("closed form, every i", closed_bad.is_empty(), format!("failures at {closed_bad:?}")));
    items.push(CheckItem::new(
        "product formula, every i",
        product_bad.is_empty(),
        format!(
            "power factor {}; failures at {product_bad:?}",
            if ctx.k <= 2 { "exhaustive" } else { "coset-reduced" }
        ),
    ));
    items.into()
}

fn lemma_double_product(l: &Level) -> Outcome {
    identities::double_product_check(&l.ctx, l.top(), 6).into()
}

fn cor_zij_shift(l: &Level) -> Outcome {
    identities::z_shift_check(&l.ctx, l.top(), l.k()).into()
}

fn eq_sq_comm(l: &Level) -> Outcome {
    identities::square_commutator_check(&l.ctx, l.lcs()).into()
}

fn comm_eq(l: &Level, which: usize) -> Outcome {
    let ctx = &l.ctx;
    let class = l.lcs().length();
    let mut items = Vec::new();
    for r in 1..=l.k() + 2 {
        let mut pair = identities::power_commutator_checks(ctx, &ctx.x(), &ctx.y(), r, class);
        items.push(pair.swap_remove(which));
    }
    items.into()
}

fn lemma_comm_eq1(l: &Level) -> Outcome {
    comm_eq(l, 0)
}

fn lemma_comm_eq2(l: &Level) -> Outcome {
    comm_eq(l, 1)
}

fn lemma_gamma_square(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let mut items = Vec::new();
    for n in 1..=l.k() {
        let g = series::gamma_n_subgroups(ctx, n, l.lcs());
        let next = series::gamma_n_subgroups(ctx, n + 1, l.lcs());
        let sq = g.gamma.agemo_mod_derived(1);
        items.push(CheckItem::new(format!("Gamma_{n} normal"), g.gamma.is_normal(), ""));
        items.push(CheckItem::new(
            format!("Gamma_{n}^2 <= Gamma_{}", n + 1),
            sq.is_subgroup_of(&next.gamma),
            format!("log {} into {}", sq.log_order(), next.gamma.log_order()),
        ));
    }
    items.into()
}

fn thm_f_sandwich(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let lcs = l.lcs();
    let phi = l.table(SeriesKind::Frattini);
    let mut items = Vec::new();
    for n in 1..=l.k() {
        let g = series::gamma_n_subgroups(ctx, n, lcs);
        let idx = (1usize << n) + (1usize << (n - 1)) - 1;
        let lower = g.t.join(&lcs.term(idx).center_intersection());
        let f = phi.term(n as usize);
        items.push(CheckItem::new(
            format!("T_{n} (gamma_{idx} ∩ Z) <= Phi_{n} <= Gamma_{n}"),
            lower.is_subgroup_of(&f) && f.is_subgroup_of(&g.gamma),
            format!("logs {} <= {} <= {}", lower.log_order(), f.log_order(), g.gamma.log_order()),
        ));
    }
    items.into()
}

fn thm_p_gamma_index(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let (k, n) = (ctx.k, ctx.n);
    let lcs = l.lcs();
    let z = Subgroup::center_part(ctx);
    let g = series::gamma_n_subgroups(ctx, k, lcs);
    let gz = g.gamma.center_intersection();
    let want = 2 * binom2((n / 2) as u64);
    let mut items = vec![CheckItem::eq("log|Z : Gamma_k ∩ Z|", (z.log_order() - gz.log_order()) as u64, want)];
    if k >= 2 {
        let sq = lcs.term(n / 2).agemo_mod_derived(1);
        let rhs = sq.join(&lcs.term(n).center_intersection());
        items.push(CheckItem::new("Gamma_k ∩ Z = gamma_(2^(k-1))^2 (gamma_(2^k) ∩ Z)", gz == rhs, ""));
        let mut cs = Commutators::new(ctx);
        let squares: Vec<Element> = (n / 2..n).map(|i| cs.c_sq(i)).collect();
        let bound = lcs.term(n).center_intersection().extend(&squares);
        items.push(CheckItem::new(
            "gamma_(2^(k-1))^2 <= <c_i^2 : 2^(k-1) <= i < 2^k> (gamma_(2^k) ∩ Z)",
            sq.is_subgroup_of(&bound),
            "",
        ));
    }
    if k <= 4 {
        let p = power_subgroup(ctx, k);
        let pz = p.join(&z);
        items.push(CheckItem::new(
            "G^(2^k) <= Gamma_k",
            p.is_subgroup_of(&g.gamma),
            format!("log|G^(2^k)| = {}, log|Gamma_k| = {}", p.log_order(), g.gamma.log_order()),
        ));
        items.push(CheckItem::new(
            "log|G : G^(2^k) Z| <= k + 2^k",
            ctx.log_order() - pz.log_order() <= k + n as u32,
            format!("value {}", ctx.log_order() - pz.log_order()),
        ));
    }
    items.into()
}

fn power_series_claim(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let lcs = l.lcs();
    let mut items = Vec::new();
    let mut sandwich = false;
    for i in 1..=l.k() + 2 {
        match series::power_series(ctx, i, lcs).expect("i >= 1") {
            series::PowerTerm::Exact(p) => {
                let g2 = lcs.term(1usize << (i + 1));
                items.push(CheckItem::new(
                    format!("G^(2^{i}) exact, gamma_{} <= G^(2^{i})", 1usize << (i + 1)),
                    g2.is_subgroup_of(&p),
                    format!("log {}", p.log_order()),
                ));
                if i <= l.k() + 1 {
                    let up = series::gamma_n_subgroups(ctx, i, lcs).gamma;
                    items.push(CheckItem::new(format!("G^(2^{i}) <= Gamma_{i}"), p.is_subgroup_of(&up), ""));
                }
                items.push(CheckItem::new(
                    format!("coset reduction agrees at i = {i}"),
                    series::coset_power_subgroup(ctx, i) == p,
                    "",
                ));
                if i == 1 {
                    items.push(CheckItem::new(
                        "log|G : G^2| >= 2",
                        ctx.log_order() - p.log_order() >= 2,
                        format!("value {}", ctx.log_order() - p.log_order()),
                    ));
                }
                if i == l.k() + 2 {
                    items.push(CheckItem::new("G^(2^(k+2)) = 1", p.is_trivial(), ""));
                }
            }
            series::PowerTerm::Sandwich(rep) => {
                sandwich = true;
                let logs = format!(
                    "logs {} <= {} <= {}",
                    rep.lower.log_order(),
                    rep.target.as_ref().map_or("?".into(), |t| t.log_order().to_string()),
                    rep.upper.log_order()
                );
                for (label, ok) in &rep.checks {
                    items.push(CheckItem::new(format!("{}: {label}", rep.label), *ok, logs.clone()));
                }
                if i == l.k() + 2 {
                    let top = rep.target.as_ref().is_some_and(Subgroup::is_trivial);
                    items.push(CheckItem::new("G^(2^(k+2)) = 1", top, ""));
                }
            }
        }
    }
    Outcome { items, sandwich }
}

fn m_series_kernel(l: &Level) -> Outcome {
    let m = l.table(SeriesKind::MSeries);
    let bad = series::m_series_quotient_check(m);
    vec![
        CheckItem::new("log|G_k : M_i| = log|G_i|", bad.is_empty(), format!("failures {bad:?}")),
        CheckItem::eq("M_k is the last nontrivial index plus one", m.length(), l.k() as usize),
        CheckItem::new("every M_i normal", m.terms().iter().all(Subgroup::is_normal), ""),
    ]
    .into()
}

fn thm_m_density(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let n = ctx.n as u64;
    let m = l.table(SeriesKind::MSeries);
    let z = Subgroup::center_part(ctx);
    let d = spectra::density_sequence(&z, m).expect("Z_k is flat");
    let top = d.top().expect("nonempty");
    let want_num = (n + binom2(n)) as u32;
    let increasing = d.points.windows(2).all(|w| w[0].ratio < w[1].ratio);
    let shown: Vec<String> = d.points.iter().map(|p| p.ratio_text()).collect();
    vec![
        CheckItem::eq("top index", top.i, l.k() as usize),
        CheckItem::eq("log|Z : M_k ∩ Z|", top.num, want_num),
        CheckItem::eq("top ratio", top.ratio_text(), format!("{}/{}", want_num, ctx.log_order())),
        CheckItem::new("ratios strictly increasing in i", increasing, shown.join(", ")),
    ]
    .into()
}

/// `log|G : S_i Z|` for `i = 0..=k`, where `S_0 = G` is the first term.
fn shifted_complement(l: &Level, kind: SeriesKind) -> Vec<u32> {
    let t = l.table(kind);
    let z = Subgroup::center_part(&l.ctx);
    let vals = spectra::complement_density(&z, t).expect("Z_k is normal");
    (0..=l.k() as usize).map(|i| vals.get(i).map_or(vals.last().unwrap().1, |v| v.1)).collect()
}

fn thm_ld_complement_lowerp(l: &Level) -> Outcome {
    let got = shifted_complement(l, SeriesKind::LowerP);
    let want: Vec<u32> = (0..=l.k()).map(|i| 2 * i).collect();
    vec![CheckItem::eq("log|G : P_(i+1) Z|, 0 <= i <= k", got, want)].into()
}

fn thm_ld_complement_dimension(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let got = shifted_complement(l, SeriesKind::Dimension);
    let want: Vec<u32> = (0..=l.k()).map(|i| 2 * i).collect();
    // D_{i+1} Z / Z is <x^{2^{l(i+1)}}> times an index-i subspace of the base
    let closed: Vec<u32> =
        (0..=l.k() as usize).map(|i| (series::ceil_log2(i + 1) + i as u32).min(ctx.k + ctx.n as u32)).collect();
    vec![
        CheckItem::eq("log|G : D_(i+1) Z| = 2i, 0 <= i <= k", got.clone(), want),
        CheckItem::eq("log|G : D_(i+1) Z| = l(i+1) + i", got, closed),
    ]
    .into()
}

fn series_normal(l: &Level) -> Outcome {
    let mut items = Vec::new();
    for kind in SeriesKind::ALL {
        if kind == SeriesKind::Power {
            continue;
        }
        let t = l.table(kind);
        let ok = t.is_strictly_descending()
            && t.terms().iter().all(Subgroup::is_normal)
            && t.terms()[0] == Subgroup::full(&l.ctx)
            && t.terms().last().is_some_and(Subgroup::is_trivial);
        items.push(CheckItem::new(format!("{kind}"), ok, format!("length {}", t.length())));
    }
    items.into()
}

fn spectrum_path(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let m = l.table(SeriesKind::MSeries);
    let chain = spectra::orbit_chain(ctx);
    let tops: Vec<_> = chain
        .iter()
        .map(|t| spectra::density_sequence(&t.span, m).expect("flat").top().expect("nonempty").clone())
        .collect();
    let monotone = tops.windows(2).all(|w| w[0].ratio <= w[1].ratio);
    let shown: Vec<String> = tops.iter().map(|p| p.ratio_text()).collect();
    let last = tops.last().unwrap();
    let n = ctx.n as u64;
    vec![
        CheckItem::new("top ratios weakly increase along the chain", monotone, shown.join(", ")),
        CheckItem::eq("chain starts at 0", tops[0].num, 0),
        CheckItem::eq("chain ends at Z_k", last.num as u64, n + binom2(n)),
        CheckItem::new(
            "every member normal",
            chain.iter().all(|t| t.span.is_normal()),
            format!("{} members", chain.len()),
        ),
    ]
    .into()
}

fn oracle_claim(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    match oracle::run(ctx) {
        Ok(r) => {
            let max = r.order_census.last().map_or(0, |c| c.0);
            vec![
                CheckItem::eq("cosets = |G_k|", r.cosets as u64, r.engine_order),
                CheckItem::new(
                    "products agree",
                    r.mismatches == 0,
                    format!("{} products, {} mismatches", r.products_checked, r.mismatches),
                ),
                CheckItem::eq("maximum element order", max, 1u64 << (ctx.k + 2)),
                CheckItem::new(
                    "center from the table = center from the engine",
                    r.center_order == r.engine_center_order,
                    format!("{} vs {}", r.center_order, r.engine_center_order),
                ),
            ]
            .into()
        }
        Err(e) => vec![CheckItem::new("oracle", false, e.to_string())].into(),
    }
}

fn presentation_round_trip(l: &Level) -> Outcome {
    let ctx = &l.ctx;
    let n = ctx.n as u64;
    let text = presentation::export(ctx);
    let pres = match presentation::parse(&text) {
        Ok(p) => p,
        Err(e) => return vec![CheckItem::new("parse", false, e.to_string())].into(),
    };
    let rebuilt = pres.context();
    let engine = pres.verify_in_engine(ctx);
    let poly_len = ctx.k as u64 + pres.generators.len() as u64 - 1;
    let mut items = vec![
        CheckItem::eq("generator count 1 + 2^(k+1) + C(2^k,2)", pres.generators.len() as u64, 1 + 2 * n + binom2(n)),
        CheckItem::eq("polycyclic length", poly_len, ctx.log_order() as u64),
        CheckItem::new("relations hold in the engine", engine.is_ok(), engine.err().unwrap_or_default()),
    ];
    match rebuilt {
        Ok(c) => {
            let g = Subgroup::close(&c, &[c.x(), c.y()]);
            items.push(CheckItem::eq("rebuilt level order", g.log_order(), GroupContext::log_order_of(c.k)));
            items.push(CheckItem::eq("export is stable", presentation::export(&c), text));
        }
        Err(e) => items.push(CheckItem::new("rebuild", false, e.to_string())),
    }
    items.into()
}
