//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wrsp_core::claims::{self, Level, Status, VerificationResult};
use wrsp_core::series::{random_element, series, SeriesKind};
use wrsp_core::spectra::density_sequence;
use wrsp_core::{oracle, presentation, GroupContext, Subgroup};

type Verdict = Result<String, String>;
type Runner = Box<dyn Fn(&[Level]) -> Verdict>;

fn run_claims(levels: &[&Level], ids: &[&str]) -> Vec<VerificationResult> {
    let mut out = Vec::new();
    for level in levels {
        for id in ids {
            let c = claims::find(id).unwrap_or_else(|| panic!("unknown claim {id}"));
            out.push(c.run(level));
        }
    }
    out
}

/// Passes when every result succeeds; `allow_sandwich` admits sandwich-only.
fn judge(results: &[VerificationResult], allow_sandwich: bool) -> Verdict {
    let bad: Vec<String> = results
        .iter()
        .filter(|r| r.status == Status::Fail || (!allow_sandwich && r.status == Status::SandwichOnly))
        .map(|r| {
            let why: Vec<String> =
                r.details.iter().filter(|d| !d.passed).map(|d| format!("{}: {}", d.label, d.detail)).collect();
            format!("{} at k={} is {} [{}]", r.claim_id, r.k, r.status.name(), why.join("; "))
        })
        .collect();
    if bad.is_empty() {
        let checks: usize = results.iter().map(|r| r.details.len()).sum();
        Ok(format!("{} claim runs, {checks} checks", results.len()))
    } else {
        Err(bad.join(" | "))
    }
}

fn within(limit: Duration, took: Duration, what: &str) -> Result<(), String> {
    if took <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {took:?}, limit {limit:?}"))
    }
}

fn order_formula() -> Verdict {
    let mut notes = Vec::new();
    for (k, want, limit) in [(1u32, 6u32, 1u64), (2, 16, 1), (3, 47, 60)] {
        let t0 = Instant::now();
        let ctx = GroupContext::new(k).map_err(|e| e.to_string())?;
        let g = Subgroup::close(&ctx, &[ctx.x(), ctx.y()]);
        within(Duration::from_secs(limit), t0.elapsed(), &format!("k={k}"))?;
        let formula = k + (1 << (k + 1)) + (1u32 << k) * ((1u32 << k) - 1) / 2;
        if g.log_order() != want || formula != want {
            return Err(format!("k={k}: close gives {}, formula {formula}, expected {want}", g.log_order()));
        }
        notes.push(format!("k={k}: {want}"));
    }
    Ok(notes.join(", "))
}

fn oracle_level_one() -> Verdict {
    let t0 = Instant::now();
    let ctx = GroupContext::new(1).map_err(|e| e.to_string())?;
    let r = oracle::run(&ctx).map_err(|e| e.to_string())?;
    within(Duration::from_secs(1), t0.elapsed(), "oracle")?;
    if r.passed() && r.cosets == 64 && r.products_checked >= 64 * 64 {
        Ok(format!("{} cosets, {} products, 0 mismatches", r.cosets, r.products_checked))
    } else {
        Err(format!("{r:?}"))
    }
}

fn property_suites() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    for k in 1..=3 {
        let ctx = GroupContext::new(k).map_err(|e| e.to_string())?;
        for _ in 0..100_000 {
            let (g, h, f) = (random_element(&ctx, &mut rng), random_element(&ctx, &mut rng), random_element(&ctx, &mut rng));
            if ctx.mul(&ctx.mul(&g, &h), &f) != ctx.mul(&g, &ctx.mul(&h, &f)) {
                return Err(format!("associativity fails at k={k}"));
            }
        }
        for _ in 0..10_000 {
            let (g, h) = (random_element(&ctx, &mut rng), random_element(&ctx, &mut rng));
            let lhs = ctx.project_to_wreath(&ctx.mul(&g, &h));
            let rhs = ctx.wreath_mul(&ctx.project_to_wreath(&g), &ctx.project_to_wreath(&h));
            if lhs != rhs {
                return Err(format!("projection is not a homomorphism at k={k}"));
            }
        }
    }
    let shuffled = shuffle_idempotence(&mut rng)?;
    let outputs = emitter_determinism()?;
    Ok(format!(
        "3x10^5 associativity triples, 3x10^4 projection pairs, {shuffled} subgroups x 100 shuffles, {outputs} outputs byte-identical"
    ))
}

fn shuffle_idempotence(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    use rand::seq::SliceRandom;
    let mut count = 0;
    for k in 1..=3 {
        let ctx = GroupContext::new(k).map_err(|e| e.to_string())?;
        for kind in SeriesKind::ALL {
            let Ok(table) = series(kind, &ctx) else { continue };
            for s in table.terms() {
                let mut gens = s.igs().to_vec();
                for _ in 0..100 {
                    gens.shuffle(rng);
                    if Subgroup::close(&ctx, &gens) != *s {
                        return Err(format!("shuffled igs of a {kind} term at k={k} closes differently"));
                    }
                }
                if Subgroup::close(&ctx, s.igs()) != *s {
                    return Err(format!("close is not idempotent on a {kind} term at k={k}"));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Every emitter behind the command-line outputs, rendered twice from scratch.
fn emitter_determinism() -> Result<usize, String> {
    let render = || -> Result<Vec<String>, String> {
        let mut out = Vec::new();
        for k in 1..=3 {
            let ctx = GroupContext::new(k).map_err(|e| e.to_string())?;
            for kind in SeriesKind::ALL {
                if let Ok(t) = series(kind, &ctx) {
                    out.push(t.to_json().map_err(|e| e.to_string())?);
                    out.push(t.to_csv().map_err(|e| e.to_string())?);
                    let d = density_sequence(&Subgroup::center_part(&ctx), &t).map_err(|e| e.to_string())?;
                    out.push(d.to_csv());
                    out.push(d.to_json());
                }
            }
            out.push(presentation::export(&ctx));
            let level = Level::new(k).map_err(|e| e.to_string())?;
            let picked: Vec<_> = claims::REGISTRY.iter().filter(|c| c.supports(k) && c.id != "oracle").collect();
            let report = claims::verify(&level, &picked);
            out.push(serde_json::to_string(&report).map_err(|e| e.to_string())?);
        }
        Ok(out)
    };
    let (a, b) = (render()?, render()?);
    if a != b {
        let at = a.iter().zip(&b).position(|(x, y)| x != y).unwrap_or(0);
        return Err(format!("output {at} differs between runs"));
    }
    Ok(a.len())
}

fn density_values() -> Verdict {
    let mut ratios = Vec::new();
    for (k, want) in [(1u32, "3/6"), (2, "10/16"), (3, "36/47")] {
        let ctx = GroupContext::new(k).map_err(|e| e.to_string())?;
        let m = series(SeriesKind::MSeries, &ctx).map_err(|e| e.to_string())?;
        let d = density_sequence(&Subgroup::center_part(&ctx), &m).map_err(|e| e.to_string())?;
        let top = d.top().ok_or("empty density sequence")?;
        if top.i != k as usize || top.ratio_text() != want {
            return Err(format!("k={k}: top ratio {} at i={}, expected {want}", top.ratio_text(), top.i));
        }
        ratios.push(top.ratio);
    }
    if !ratios.windows(2).all(|w| w[0] < w[1]) {
        return Err(format!("ratios not strictly increasing: {ratios:?}"));
    }
    let level = Level::new(3).map_err(|e| e.to_string())?;
    let r = judge(&run_claims(&[&level], &["remark-index", "thm-m-density"]), false)?;
    let last: Ratio<u64> = *ratios.last().unwrap();
    Ok(format!("3/6 < 10/16 < 36/47 ({:.4}); {r}", *last.numer() as f64 / *last.denom() as f64))
}

fn pick<'a>(levels: &'a [Level], ks: &[usize]) -> Vec<&'a Level> {
    ks.iter().map(|&k| &levels[k - 1]).collect()
}

struct Criterion {
    number: u32,
    title: &'static str,
    run: Runner,
}

fn main() {
    let total = Instant::now();
    let levels: Vec<Level> = (1..=3).map(|k| Level::new(k).expect("level")).collect();
    let criteria: Vec<Criterion> = vec![
        Criterion { number: 1, title: "order formula log|G_k| for k = 1, 2, 3", run: Box::new(|_| order_formula()) },
        Criterion { number: 2, title: "oracle equivalence at k = 1", run: Box::new(|_| oracle_level_one()) },
        Criterion {
            number: 3,
            title: "lower central series: class, generators, layer shapes",
            run: Box::new(|l| {
                let t0 = Instant::now();
                let r = judge(
                    &run_claims(&pick(l, &[1, 2, 3]), &["prop-lcs-class", "prop-lcs-generators", "prop-lcs-shapes"]),
                    false,
                );
                within(Duration::from_secs(300), t0.elapsed(), "lower central series")?;
                r
            }),
        },
        Criterion {
            number: 4,
            title: "c_i^2 and c_i memberships, c_{m,2^k} membership at k = 2, 3",
            run: Box::new(|l| {
                judge(
                    &run_claims(&pick(l, &[2, 3]), &["lemma-exp2-i", "lemma-exp2-ii", "lemma-exp2-iii", "lemma-cm2k"]),
                    false,
                )
            }),
        },
        Criterion {
            number: 5,
            title: "lower 2-series length and closed forms, k = 1..3",
            run: Box::new(|l| judge(&run_claims(&pick(l, &[1, 2, 3]), &["prop-lower2"]), false)),
        },
        Criterion {
            number: 6,
            title: "dimension series: length, closed form, product formula, k = 1..3",
            run: Box::new(|l| judge(&run_claims(&pick(l, &[1, 2, 3]), &["prop-dimension"]), false)),
        },
        Criterion {
            number: 7,
            title: "exponent 2^{k+2} witnessed by xy, k = 1..3",
            run: Box::new(|l| judge(&run_claims(&pick(l, &[1, 2, 3]), &["lemma-exponent"]), false)),
        },
        Criterion {
            number: 8,
            title: "z-shift, double product, Gamma_n^2 <= Gamma_{n+1}, T/Phi/Gamma sandwich",
            run: Box::new(|l| {
                judge(
                    &run_claims(
                        &pick(l, &[1, 2, 3]),
                        &["cor-zij-shift", "lemma-double-product", "lemma-gamma-square", "thm-f-sandwich"],
                    ),
                    false,
                )
            }),
        },
        Criterion { number: 9, title: "M-density of Z and the index of gamma_i ∩ Z", run: Box::new(|_| density_values()) },
        Criterion { number: 10, title: "property suites and output determinism", run: Box::new(|_| property_suites()) },
    ];

    let mut failed = 0;
    for c in &criteria {
        let t0 = Instant::now();
        let verdict = (c.run)(&levels);
        let took = t0.elapsed().as_secs_f64();
        match verdict {
            Ok(note) => println!("criterion {:>2} PASS  {}  ({took:.2} s)  {note}", c.number, c.title),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {}  ({took:.2} s)  {why}", c.number, c.title);
            }
        }
    }
    let wall = total.elapsed();
    let wall_ok = wall < Duration::from_secs(600);
    println!(
        "acceptance: {} of {} criteria pass, wall clock {:.1} s{}",
        criteria.len() - failed,
        criteria.len(),
        wall.as_secs_f64(),
        if wall_ok { "" } else { " (over the 10 minute budget)" }
    );
    if failed > 0 || !wall_ok {
        std::process::exit(1);
    }
}
