//! The `wrsp` command line: claim verification, series and density export,
//! presentation export and the coset-enumeration oracle.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wrsp_core::claims::{self, Claim, Level, VerificationResult};
use wrsp_core::series::{self, PowerTerm};
use wrsp_core::spectra::{density_sequence, invariant_subspace};
use wrsp_core::{oracle, presentation, Element, GroupContext, SeriesKind, Subgroup};

/// Misuse of the command line; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

#[derive(Parser, Debug)]
#[command(name = "wrsp", version, about = "Exact computations in the 2-groups G_k = C_{2^k} ⋉ M")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run registered claims at one level.
    Verify(VerifyArgs),
    /// Export a filtration series.
    Series(SeriesArgs),
    /// Logarithmic density of a target subgroup along a series.
    Density(DensityArgs),
    /// Write the power-commutator presentation of G_k.
    ExportPresentation(ExportArgs),
    /// Compare the engine with a coset enumeration of the presentation.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
pub struct Common {
    /// Level k.
    #[arg(long)]
    pub k: u32,
    /// Allow k = 4.
    #[arg(long)]
    pub deep: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Gamma,
    Lowerp,
    Frattini,
    Dimension,
    Power,
    M,
}

impl From<Kind> for SeriesKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Gamma => SeriesKind::Gamma,
            Kind::Lowerp => SeriesKind::LowerP,
            Kind::Frattini => SeriesKind::Frattini,
            Kind::Dimension => SeriesKind::Dimension,
            Kind::Power => SeriesKind::Power,
            Kind::M => SeriesKind::MSeries,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(name = "H", alias = "h")]
    H,
    Full,
    Trivial,
    SeedFile,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated claim ids or prefixes.
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    pub claims: Option<String>,
    /// Every claim supported at this level.
    #[arg(long)]
    pub all: bool,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub kind: Kind,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = Target::Z)]
    pub target: Target,
    /// Central seed elements, one per line; implies `--target seed-file`.
    #[arg(long)]
    pub seed_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Result of a command: `passed = false` maps to exit code 1.
pub struct Outcome {
    pub passed: bool,
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Verify(a) => cmd_verify(&a),
        Command::Series(a) => cmd_series(&a),
        Command::Density(a) => cmd_density(&a),
        Command::ExportPresentation(a) => cmd_export(&a),
        Command::Oracle(a) => cmd_oracle(&a),
    }
}

/// Sets the worker count from `WRSP_THREADS` if present.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("WRSP_THREADS") else { return Ok(()) };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return usage(format!("WRSP_THREADS must be a positive integer, got {raw:?}")),
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the worker pool")?;
    Ok(())
}

fn level_context(k: u32, deep: bool) -> Result<GroupContext> {
    match k {
        1..=3 => {}
        4 if deep => {}
        4 => return usage("k = 4 requires --deep"),
        _ => return usage(format!("k must be in 1..=4, got {k}")),
    }
    Ok(GroupContext::new(k)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Explicit ids outside their supported range are usage errors; prefixes
/// keep only the claims that apply.
fn select_claims(selector: &str, k: u32) -> Result<Vec<&'static Claim>> {
    for part in selector.split(',').map(str::trim) {
        if let Some(c) = claims::find(part) {
            if !c.supports(k) {
                return usage(format!("claim {} supports k in {}..={}, not {k}", c.id, c.k_min, c.k_max));
            }
        }
    }
    let picked: Vec<_> = claims::select(selector)
        .map_err(UsageError)?
        .into_iter()
        .filter(|c| c.supports(k))
        .collect();
    if picked.is_empty() {
        return usage(format!("no selected claim supports k = {k}"));
    }
    Ok(picked)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    k: u32,
    passed: bool,
    results: &'a [VerificationResult],
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let ctx = level_context(a.common.k, a.common.deep)?;
    let k = ctx.k;
    let picked = match &a.claims {
        Some(sel) => select_claims(sel, k)?,
        None => claims::REGISTRY.iter().filter(|c| c.supports(k)).collect(),
    };
    let level = Level::from_context(ctx);
    let results = claims::verify(&level, &picked);
    let passed = results.iter().all(|r| r.status.is_success());
    for r in &results {
        eprintln!("{:<14} {}", r.status.name(), r.claim_id);
    }
    let text = match a.common.format {
        Format::Json => json(&VerifyReport { k, passed, results: &results })?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    let failed: Vec<&str> =
                        r.details.iter().filter(|d| !d.passed).map(|d| d.label.as_str()).collect();
                    vec![
                        r.claim_id.clone(),
                        r.k.to_string(),
                        r.status.name().to_string(),
                        r.details.len().to_string(),
                        failed.join(";"),
                    ]
                })
                .collect();
            csv_table(&["claim_id", "k", "status", "checks", "failed"], &rows)?
        }
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(Outcome { passed })
}

#[derive(Serialize)]
struct SandwichRow {
    kind: &'static str,
    k: u32,
    i: u32,
    status: &'static str,
    lower_log_order: u32,
    upper_log_order: u32,
    target_log_order: Option<u32>,
    verified: bool,
}

fn cmd_series(a: &SeriesArgs) -> Result<Outcome> {
    let ctx = level_context(a.common.k, a.common.deep)?;
    let kind = SeriesKind::from(a.kind);
    if kind == SeriesKind::Power && ctx.k > 2 {
        return power_sandwich_table(&ctx, &a.common);
    }
    let table = series::series(kind, &ctx)?;
    let text = match a.common.format {
        Format::Json => table.to_json()? + "\n",
        Format::Csv => table.to_csv()?,
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(Outcome { passed: true })
}

/// Power terms at `k >= 3` as bounds `lower <= G^{2^i} <= upper`.
fn power_sandwich_table(ctx: &GroupContext, common: &Common) -> Result<Outcome> {
    let lcs = series::series(SeriesKind::Gamma, ctx)?;
    let mut rows = Vec::new();
    for i in 0..=ctx.k + 2 {
        let row = match series::power_series(ctx, i, &lcs)? {
            PowerTerm::Exact(s) => SandwichRow {
                kind: "power",
                k: ctx.k,
                i,
                status: "exact",
                lower_log_order: s.log_order(),
                upper_log_order: s.log_order(),
                target_log_order: Some(s.log_order()),
                verified: true,
            },
            PowerTerm::Sandwich(r) => SandwichRow {
                kind: "power",
                k: ctx.k,
                i,
                status: "sandwich",
                lower_log_order: r.lower.log_order(),
                upper_log_order: r.upper.log_order(),
                target_log_order: r.target.as_ref().map(Subgroup::log_order),
                verified: r.verified(),
            },
        };
        rows.push(row);
    }
    let passed = rows.iter().all(|r| r.verified);
    let text = match common.format {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(common.out.as_deref(), &text)?;
    Ok(Outcome { passed })
}

/// Seed file: one central element per line, either in the canonical text
/// form `x^0 y:.. s:.. c:..` or as a `*`-separated product of the names
/// `s<i>` and `c<i>_<j>`. Blank lines and `#` comments are skipped.
pub fn parse_seed_file(ctx: &GroupContext, text: &str) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let g = parse_seed_line(ctx, line).with_context(|| format!("seed file line {}: {line:?}", no + 1))?;
        if !g.in_center() {
            bail!("seed file line {}: element lies outside Z_k", no + 1);
        }
        out.push(g);
    }
    Ok(out)
}

fn parse_seed_line(ctx: &GroupContext, line: &str) -> Result<Element> {
    if line.starts_with("x^") {
        return Ok(ctx.parse_element(line)?);
    }
    let n = ctx.n;
    let mut g = ctx.identity();
    for name in line.split('*').map(str::trim) {
        let coord = if let Some(i) = name.strip_prefix('s') {
            let i: usize = i.parse().with_context(|| format!("bad index in {name:?}"))?;
            if i >= n {
                bail!("{name} out of range for n = {n}");
            }
            ctx.square_coord(i)
        } else if let Some(rest) = name.strip_prefix('c') {
            let (i, j) = rest.split_once('_').with_context(|| format!("expected c<i>_<j>, got {name:?}"))?;
            let (i, j): (usize, usize) = (i.parse()?, j.parse()?);
            if i == j || i >= n || j >= n {
                bail!("{name} out of range for n = {n}");
            }
            ctx.pair_coord(i.min(j), i.max(j))
        } else {
            bail!("unknown generator {name:?}");
        };
        g = ctx.mul(&g, &ctx.central(coord));
    }
    Ok(g)
}

fn cmd_density(a: &DensityArgs) -> Result<Outcome> {
    let ctx = level_context(a.common.k, a.common.deep)?;
    let kind = SeriesKind::from(a.kind);
    if kind == SeriesKind::Power && ctx.k > 2 {
        return usage("the power series is only bounded at k >= 3; density needs an exact series");
    }
    let target_kind = if a.seed_file.is_some() { Target::SeedFile } else { a.target };
    let target = match target_kind {
        Target::Z => Subgroup::center_part(&ctx),
        Target::H => Subgroup::base(&ctx),
        Target::Full => Subgroup::full(&ctx),
        Target::Trivial => Subgroup::trivial(&ctx),
        Target::SeedFile => {
            let Some(path) = &a.seed_file else { return usage("--target seed-file needs --seed-file PATH") };
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let seeds = parse_seed_file(&ctx, &text).map_err(|e| UsageError(format!("{e:#}")))?;
            invariant_subspace(&ctx, &seeds)?.span
        }
    };
    let table = series::series(kind, &ctx)?;
    let d = density_sequence(&target, &table)?;
    let text = match a.common.format {
        Format::Json => d.to_json() + "\n",
        Format::Csv => d.to_csv(),
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(Outcome { passed: true })
}

fn cmd_export(a: &ExportArgs) -> Result<Outcome> {
    if !(1..=4).contains(&a.k) {
        return usage(format!("k must be in 1..=4, got {}", a.k));
    }
    let ctx = GroupContext::new(a.k)?;
    emit(a.out.as_deref(), &presentation::export(&ctx))?;
    Ok(Outcome { passed: true })
}

#[derive(Serialize)]
struct OracleDoc {
    k: u32,
    passed: bool,
    cosets: usize,
    engine_order: u64,
    products_checked: u64,
    mismatches: u64,
    order_census: Vec<(u64, u64)>,
    center_order: u64,
    engine_center_order: u64,
}

fn cmd_oracle(a: &OracleArgs) -> Result<Outcome> {
    if !(1..=2).contains(&a.k) {
        return usage(format!("the oracle enumerates G_1 or G_2, not G_{}", a.k));
    }
    let ctx = GroupContext::new(a.k)?;
    let r = oracle::run(&ctx)?;
    let passed = r.passed();
    let doc = OracleDoc {
        k: r.k,
        passed,
        cosets: r.cosets,
        engine_order: r.engine_order,
        products_checked: r.products_checked,
        mismatches: r.mismatches,
        order_census: r.order_census,
        center_order: r.center_order,
        engine_center_order: r.engine_center_order,
    };
    emit(a.out.as_deref(), &json(&doc)?)?;
    Ok(Outcome { passed })
}
