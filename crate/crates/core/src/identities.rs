//! Exact instances of commutator identities in `G_k`.
//!
//! Identities valid in the inverse limit hold verbatim in every `G_k`, so
//! each check evaluates both sides with the collector and compares.

use std::collections::HashSet;

use crate::check::CheckItem;
use crate::context::GroupContext;
use crate::element::Element;
use crate::named::Commutators;
use crate::series::SeriesTable;
use crate::subgroup::Subgroup;

/// `C(n, r)` for `n <= 128` without overflow.
pub fn binom_u128(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// `g^e` with `e` reduced modulo the order of `g`.
fn pow_big(ctx: &GroupContext, g: &Element, e: u128) -> Element {
    let ord = ctx.order(g) as u128;
    ctx.pow(g, (e % ord) as i64)
}

/// `[g, x, …(m)…, x]`.
fn comm_x_times(ctx: &GroupContext, g: &Element, m: usize) -> Element {
    let x = ctx.x();
    (0..m).fold(*g, |acc, _| ctx.comm(&acc, &x))
}

/// `[z_{i,j}, x, …(m)…, x] = ∏_{s ≤ m} ∏_{n ≤ s} z_{i+m-n, j+m-s+n}^{C(m,s) C(s,n)}`.
pub fn double_product_check(ctx: &GroupContext, max_index: usize, max_m: usize) -> Vec<CheckItem> {
    let mut cs = Commutators::new(ctx);
    let mut bad = Vec::new();
    let mut count = 0usize;
    for i in 1..=max_index {
        for j in 1..=max_index {
            for m in 0..=max_m {
                let lhs = comm_x_times(ctx, &cs.z(i, j), m);
                let mut rhs = ctx.identity();
                for s in 0..=m {
                    for n in 0..=s {
                        let e = binom_u128(m as u64, s as u64) * binom_u128(s as u64, n as u64);
                        if e % 2 == 1 {
                            rhs = ctx.mul(&rhs, &cs.z(i + m - n, j + m - s + n));
                        }
                    }
                }
                count += 1;
                if lhs != rhs {
                    bad.push((i, j, m));
                }
            }
        }
    }
    vec![CheckItem::new(
        format!("double product, i,j <= {max_index}, m <= {max_m}"),
        bad.is_empty(),
        format!("{count} cases, failures {:?}", &bad[..bad.len().min(8)]),
    )]
}

/// `[z_{i,j}, x^{2^t}] = z_{i+2^t, j} z_{i, j+2^t} z_{i+2^t, j+2^t}`.
pub fn z_shift_check(ctx: &GroupContext, max_index: usize, max_t: u32) -> Vec<CheckItem> {
    let mut cs = Commutators::new(ctx);
    let mut bad = Vec::new();
    let mut count = 0usize;
    for t in 0..=max_t {
        let s = 1usize << t;
        let xs = ctx.pow(&ctx.x(), s as i64);
        for i in 1..=max_index {
            for j in 1..=max_index {
                let lhs = ctx.comm(&cs.z(i, j), &xs);
                let rhs = ctx.mul(&ctx.mul(&cs.z(i + s, j), &cs.z(i, j + s)), &cs.z(i + s, j + s));
                count += 1;
                if lhs != rhs {
                    bad.push((i, j, t));
                }
            }
        }
    }
    vec![CheckItem::new(
        format!("z shift, i,j <= {max_index}, t <= {max_t}"),
        bad.is_empty(),
        format!("{count} cases, failures {:?}", &bad[..bad.len().min(8)]),
    )]
}

/// `1 = [y, x^{2^k}] ≡ c_{2^{k-1}+1}^2 c_{2^k+1}` modulo `γ_{2^k+2}`.
pub fn square_commutator_check(ctx: &GroupContext, lcs: &SeriesTable) -> Vec<CheckItem> {
    let k = ctx.k;
    let n = ctx.n;
    let mut cs = Commutators::new(ctx);
    let lhs = ctx.comm(&ctx.y(), &ctx.pow(&ctx.x(), n as i64));
    let rhs = ctx.mul(&cs.c_sq(n / 2 + 1), &cs.c(n + 1));
    let quotient = ctx.mul(&ctx.inverse(&lhs), &rhs);
    let modulus = lcs.term(n + 2);
    vec![
        CheckItem::new("[y, x^(2^k)] = 1", lhs.is_identity(), ctx.format_element(&lhs)),
        CheckItem::new(
            format!("c_{}^2 c_{} in gamma_{}", n / 2 + 1, n + 1, n + 2),
            modulus.contains(&quotient),
            format!("k = {k}, residue {}", ctx.format_element(&quotient)),
        ),
    ]
}

/// Commutator values in `{u, v}` grouped by weight, with their weight in `v`
/// capped at 2. Weights beyond `max_weight` are not generated.
pub fn commutator_family(
    ctx: &GroupContext,
    u: &Element,
    v: &Element,
    max_weight: usize,
    limit: usize,
) -> Result<Vec<Vec<(Element, u8)>>, String> {
    let mut levels: Vec<Vec<(Element, u8)>> = vec![Vec::new(), vec![(*u, 0), (*v, 1)]];
    for w in 2..=max_weight {
        let mut seen: HashSet<(Element, u8)> = HashSet::new();
        for w1 in 1..w {
            let (left, right) = (&levels[w1], &levels[w - w1]);
            for (a, va) in left {
                for (b, vb) in right {
                    let c = ctx.comm(a, b);
                    if !c.is_identity() {
                        seen.insert((c, (va + vb).min(2)));
                    }
                }
            }
            if seen.len() > limit {
                return Err(format!("more than {limit} commutator values of weight {w}"));
            }
        }
        let mut level: Vec<(Element, u8)> = seen.into_iter().collect();
        level.sort();
        levels.push(level);
    }
    Ok(levels)
}

/// Normal closure of (i) commutators in `{u, v}` of weight at least `2^r` and
/// weight at least 2 in `v`, and (ii) `2^{r-s+1}`-th powers of such
/// commutators of weight below `2^s`, `1 <= s <= r`.
pub fn k_subgroup(ctx: &GroupContext, u: &Element, v: &Element, r: u32, class: usize) -> Result<Subgroup, String> {
    let levels = commutator_family(ctx, u, v, class, 200_000)?;
    let mut gens = Vec::new();
    let pr = 1usize << r;
    for (w, level) in levels.iter().enumerate().skip(1) {
        for (c, vw) in level {
            if *vw < 2 {
                continue;
            }
            if w >= pr {
                gens.push(*c);
            }
            for s in 1..=r {
                if w < (1usize << s) {
                    gens.push(pow_big(ctx, c, 1u128 << (r - s + 1)));
                }
            }
        }
    }
    Ok(Subgroup::normal_closure(ctx, &gens))
}

/// `(ab)^{2^r}` against `a^{2^r} b^{2^r} ∏_{j=1}^{2^r-1} [b, a, …(j)…, a]^{C(2^r, j+1)}`
/// modulo `K(a, b)`, and `[a^{2^r}, b]` against
/// `∏_{j=0}^{2^r-1} [a, b, a, …(j)…, a]^{C(2^r, j+1)}` modulo `K(a, [a, b])`.
pub fn power_commutator_checks(ctx: &GroupContext, a: &Element, b: &Element, r: u32, class: usize) -> Vec<CheckItem> {
    let pr = 1u64 << r;
    let mut out = Vec::new();

    let lhs = ctx.pow(&ctx.mul(a, b), pr as i64);
    let mut rhs = ctx.mul(&ctx.pow(a, pr as i64), &ctx.pow(b, pr as i64));
    let mut term = ctx.comm(b, a);
    for j in 1..pr {
        rhs = ctx.mul(&rhs, &pow_big(ctx, &term, binom_u128(pr, j + 1)));
        term = ctx.comm(&term, a);
    }
    let diff = ctx.mul(&lhs, &ctx.inverse(&rhs));
    out.push(match k_subgroup(ctx, a, b, r, class) {
        Ok(k) => CheckItem::new(
            format!("power of product, r = {r}"),
            k.contains(&diff),
            format!("log |K| = {}, discrepancy {}", k.log_order(), ctx.format_element(&diff)),
        ),
        Err(e) => CheckItem::new(format!("power of product, r = {r}"), false, e),
    });

    let ab = ctx.comm(a, b);
    let lhs = ctx.comm(&ctx.pow(a, pr as i64), b);
    let mut rhs = ctx.identity();
    let mut term = ab;
    for j in 0..pr {
        rhs = ctx.mul(&rhs, &pow_big(ctx, &term, binom_u128(pr, j + 1)));
        term = ctx.comm(&term, a);
    }
    let diff = ctx.mul(&lhs, &ctx.inverse(&rhs));
    out.push(match k_subgroup(ctx, a, &ab, r, class) {
        Ok(k) => CheckItem::new(
            format!("commutator with power, r = {r}"),
            k.contains(&diff),
            format!("log |K| = {}, discrepancy {}", k.log_order(), ctx.format_element(&diff)),
        ),
        Err(e) => CheckItem::new(format!("commutator with power, r = {r}"), false, e),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{series, SeriesKind};

    #[test]
    fn binomials() {
        assert_eq!(binom_u128(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binom_u128(5, 7), 0);
    }

    #[test]
    fn double_product_m_zero_is_identity_map() {
        let ctx = GroupContext::new(2).unwrap();
        assert!(double_product_check(&ctx, 8, 0)[0].passed);
    }

    #[test]
    fn level_one_square_commutator() {
        let ctx = GroupContext::new(1).unwrap();
        let lcs = series(SeriesKind::Gamma, &ctx).unwrap();
        let items = square_commutator_check(&ctx, &lcs);
        assert!(items.iter().all(|c| c.passed), "{items:?}");
        // γ_4 is trivial at level 1, so c_2^2 = c_3^{-1}
        let mut cs = Commutators::new(&ctx);
        assert_eq!(cs.c_sq(2), ctx.inverse(&cs.c(3)));
    }

    #[test]
    fn z_shift_small() {
        let ctx = GroupContext::new(3).unwrap();
        let items = z_shift_check(&ctx, 5, 3);
        assert!(items[0].passed, "{items:?}");
    }
}
