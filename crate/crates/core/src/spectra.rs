//! Logarithmic-density sequences `log |H S_i : S_i| / log |G_k : S_i|` of a
//! target subgroup against a filtration series, and `σ`-invariant subspaces
//! of `Z_k` as targets.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::context::GroupContext;
use crate::element::Element;
use crate::error::GroupError;
use crate::series::{SeriesKind, SeriesTable};
use crate::subgroup::Subgroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityPoint {
    pub i: usize,
    pub num: u32,
    pub den: u32,
    pub ratio: Ratio<u64>,
}

impl DensityPoint {
    /// Unreduced `num/den`.
    pub fn ratio_text(&self) -> String {
        format!("{}/{}", self.num, self.den)
    }

    pub fn ratio_float(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Clone, Debug)]
pub struct DensitySequence {
    pub kind: SeriesKind,
    pub k: u32,
    pub target_log_order: u32,
    /// Terms with `S_i ≠ G_k`, by increasing `i`.
    pub points: Vec<DensityPoint>,
    /// Number of trailing points used for the estimates.
    pub tail_window: usize,
}

#[derive(Serialize)]
struct DensityRow<'a> {
    kind: &'a str,
    k: u32,
    i: usize,
    num: u32,
    den: u32,
    ratio_exact: String,
    ratio_float: String,
}

impl DensitySequence {
    fn tail(&self) -> &[DensityPoint] {
        &self.points[self.points.len() - self.tail_window..]
    }

    /// Minimum ratio over the tail window.
    pub fn liminf_estimate(&self) -> Option<Ratio<u64>> {
        self.tail().iter().map(|p| p.ratio).min()
    }

    /// Max minus min over the tail window.
    pub fn tail_spread(&self) -> Option<Ratio<u64>> {
        let t = self.tail();
        let max = t.iter().map(|p| p.ratio).max()?;
        let min = t.iter().map(|p| p.ratio).min()?;
        Some(max - min)
    }

    /// Ratio at the last index, where `S_i` is trivial.
    pub fn top(&self) -> Option<&DensityPoint> {
        self.points.last()
    }

    fn rows(&self) -> Vec<DensityRow<'_>> {
        self.points
            .iter()
            .map(|p| DensityRow {
                kind: self.kind.name(),
                k: self.k,
                i: p.i,
                num: p.num,
                den: p.den,
                ratio_exact: p.ratio_text(),
                ratio_float: format!("{:.6}", p.ratio_float()),
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in self.rows() {
            w.serialize(r).expect("in-memory csv");
        }
        let out = w.into_inner().expect("in-memory csv");
        let mut s = String::from_utf8(out).expect("csv is utf-8");
        if self.points.is_empty() {
            s.push_str("kind,k,i,num,den,ratio_exact,ratio_float\n");
        }
        s
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            kind: &'a str,
            k: u32,
            target_log_order: u32,
            tail_window: usize,
            top_ratio: Option<String>,
            liminf_estimate: Option<String>,
            tail_spread: Option<String>,
            points: Vec<DensityRow<'a>>,
        }
        let doc = Doc {
            kind: self.kind.name(),
            k: self.k,
            target_log_order: self.target_log_order,
            tail_window: self.tail_window,
            top_ratio: self.top().map(DensityPoint::ratio_text),
            liminf_estimate: self.liminf_estimate().map(|r| r.to_string()),
            tail_spread: self.tail_spread().map(|r| r.to_string()),
            points: self.rows(),
        };
        serde_json::to_string_pretty(&doc).expect("density serializes")
    }
}

/// Density of `target` along `table`; the tail window is the last half.
pub fn density_sequence(target: &Subgroup, table: &SeriesTable) -> Result<DensitySequence, GroupError> {
    let ctx = table.context();
    if target.context() != ctx {
        return Err(GroupError::ContextMismatch { expected: ctx.k, found: target.context().k });
    }
    let total = ctx.log_order();
    let mut points = Vec::new();
    for (i, s) in table.indexed() {
        let den = total - s.log_order();
        if den == 0 {
            continue;
        }
        let num = target.log_order() - target.intersect(s)?.log_order();
        points.push(DensityPoint { i, num, den, ratio: Ratio::new(num as u64, den as u64) });
    }
    let tail_window = points.len().div_ceil(2);
    Ok(DensitySequence { kind: table.kind(), k: ctx.k, target_log_order: target.log_order(), points, tail_window })
}

/// `log |G_k : S_i · target|` for every term, `target` normal.
pub fn complement_density(target: &Subgroup, table: &SeriesTable) -> Result<Vec<(usize, u32)>, GroupError> {
    if !target.is_normal() {
        return Err(GroupError::NotNormal);
    }
    let total = table.context().log_order();
    Ok(table.indexed().map(|(i, s)| (i, total - s.join(target).log_order())).collect())
}

/// A `σ`-invariant subgroup of `Z_k`, hence normal in `G_k`.
#[derive(Clone, Debug)]
pub struct InvariantSubspace {
    pub seed: Vec<Element>,
    pub span: Subgroup,
}

pub fn invariant_subspace(ctx: &GroupContext, seed: &[Element]) -> Result<InvariantSubspace, GroupError> {
    if seed.iter().any(|g| !g.in_center()) {
        return Err(GroupError::OutsideCenter);
    }
    let span = Subgroup::closure_under(ctx, seed, &[ctx.x()]);
    debug_assert!(span.is_normal());
    Ok(InvariantSubspace { seed: seed.to_vec(), span })
}

/// Nested `σ`-invariant subspaces: the squares first, then pair orbits by
/// increasing cyclic distance, each step adding one orbit.
pub fn orbit_chain(ctx: &GroupContext) -> Vec<InvariantSubspace> {
    let n = ctx.n;
    let mut seeds: Vec<Element> = Vec::new();
    let mut out = vec![invariant_subspace(ctx, &[]).unwrap()];
    seeds.push(ctx.central(ctx.square_coord(0)));
    out.push(invariant_subspace(ctx, &seeds).unwrap());
    for dist in 1..=n / 2 {
        seeds.push(ctx.central(ctx.pair_coord(0, dist)));
        out.push(invariant_subspace(ctx, &seeds).unwrap());
    }
    out
}

/// Density sequences for each target, sorted by tail minimum.
pub fn spectrum_sweep(
    kind: SeriesKind,
    table: &SeriesTable,
    targets: &[InvariantSubspace],
) -> Result<Vec<DensitySequence>, GroupError> {
    debug_assert_eq!(table.kind(), kind);
    let mut out: Vec<(usize, DensitySequence)> = targets
        .par_iter()
        .enumerate()
        .map(|(idx, t)| density_sequence(&t.span, table).map(|d| (idx, d)))
        .collect::<Result<_, _>>()?;
    out.sort_by(|a, b| a.1.liminf_estimate().cmp(&b.1.liminf_estimate()).then(a.0.cmp(&b.0)));
    Ok(out.into_iter().map(|(_, d)| d).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::series;

    #[test]
    fn full_and_trivial_targets() {
        let ctx = GroupContext::new(2).unwrap();
        let t = series(SeriesKind::Gamma, &ctx).unwrap();
        let full = density_sequence(&Subgroup::full(&ctx), &t).unwrap();
        assert!(full.points.iter().all(|p| p.num == p.den));
        let triv = density_sequence(&Subgroup::trivial(&ctx), &t).unwrap();
        assert!(triv.points.iter().all(|p| p.num == 0));
        assert!(complement_density(&Subgroup::full(&ctx), &t).unwrap().iter().all(|&(_, v)| v == 0));
    }

    #[test]
    fn seed_outside_center_rejected() {
        let ctx = GroupContext::new(2).unwrap();
        assert_eq!(invariant_subspace(&ctx, &[ctx.y()]).unwrap_err(), GroupError::OutsideCenter);
        assert!(invariant_subspace(&ctx, &[]).unwrap().span.is_trivial());
    }

    #[test]
    fn orbit_chain_is_nested_and_ends_at_center() {
        let ctx = GroupContext::new(3).unwrap();
        let chain = orbit_chain(&ctx);
        for w in chain.windows(2) {
            assert!(w[0].span.is_subgroup_of(&w[1].span));
        }
        assert_eq!(chain.last().unwrap().span, Subgroup::center_part(&ctx));
    }

    #[test]
    fn csv_columns() {
        let ctx = GroupContext::new(1).unwrap();
        let t = series(SeriesKind::MSeries, &ctx).unwrap();
        let d = density_sequence(&Subgroup::center_part(&ctx), &t).unwrap();
        let csv = d.to_csv();
        assert_eq!(csv, "kind,k,i,num,den,ratio_exact,ratio_float\nm,1,1,3,6,3/6,0.500000\n");
    }
}
