//! Command implementations and dispatch.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use kronload::characters::{build_table, CharacterTable};
use kronload::kronecker::{kron, Triple};
use kronload::loadings::{
    compute_loadings, difference_loadings, similitude_loadings, LoadingTable, Mode,
};
use kronload::partitions::{enumerate, Partition};
use kronload::stats::{fit_gamma, fit_normal, moments, triple_moments, FitParams, Moments};
use kronload::thresholds::{
    classify, conjectured_b_star, conjectured_r_star, conjectured_thresholds, scan, Rule,
    ScanOptions, ScanResult, Thresholds, Verdict, VerdictKind, QUANTIZED_4DEC_SLACK,
    TIE_GUARD_SLACK,
};
use serde_json::json;

use crate::args::{Cli, Command, Format, Side};
use crate::export::{csv_field, json_f64_4dec};
use crate::{cache, export, fixtures, svg, verify};

/// Totals beyond these need `--long` for the conjecture walks; the r-side
/// closed form is cheap far beyond the b-side candidate walk.
pub const CONJECTURE_R_LONG_GATE_N: u32 = 48;
pub const CONJECTURE_B_LONG_GATE_N: u32 = 24;

#[derive(Debug)]
pub enum CliError {
    Lib(kronload::Error),
    Io(std::io::Error),
    VerifyFailed { failures: usize },
}

impl CliError {
    /// Process exit code: 2 for domain errors, 3 for verification failures,
    /// 4 for refused resource budgets (usage errors exit 1 before dispatch).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(kronload::Error::ResourceBudget(_)) => 4,
            CliError::Lib(_) | CliError::Io(_) => 2,
            CliError::VerifyFailed { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{}", e),
            CliError::Io(e) => write!(f, "{}", e),
            CliError::VerifyFailed { failures } => {
                write!(f, "verification failed: {} check(s) did not pass", failures)
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<kronload::Error> for CliError {
    fn from(e: kronload::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Shared command context resolved from the global flags.
pub struct Ctx {
    pub cache_dir: PathBuf,
    pub mode: Mode,
    /// True when no `--iters`/`--tol` override is active; only then are
    /// loading vectors and thresholds cached, so the cache always holds
    /// default-mode results.
    pub default_mode: bool,
    pub format: Format,
    pub long: bool,
}

fn warn(msg: &str) {
    eprintln!("warning: {}", msg);
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    let (mode, default_mode) = match (cli.iters, cli.tol) {
        (Some(k), _) => (Mode::Fixed(k), false),
        (None, Some(tol)) => (
            Mode::Converge {
                tol,
                max_iters: 10_000,
            },
            false,
        ),
        (None, None) => (Mode::default(), true),
    };
    let ctx = Ctx {
        cache_dir: cache::resolve_dir(cli.cache.as_deref()),
        mode,
        default_mode,
        format: cli.format,
        long: cli.long,
    };
    match cli.command {
        Command::Partitions { n } => cmd_partitions(&ctx, n),
        Command::Chartable { n } => cmd_chartable(&ctx, n),
        Command::Kron { n, lambda, mu, nu } => cmd_kron(&ctx, n, &lambda, &mu, &nu),
        Command::Loadings { n } => cmd_loadings(&ctx, n),
        Command::Scan { n, bins, out_dir } => cmd_scan(&ctx, n, bins, out_dir.as_deref()),
        Command::Classify { n, lambda, mu, nu } => cmd_classify(&ctx, n, &lambda, &mu, &nu),
        Command::Thresholds { n } => cmd_thresholds(&ctx, n),
        Command::Conjecture { n, side } => cmd_conjecture(&ctx, n, side),
        Command::Stats { n } => cmd_stats(&ctx, n),
        Command::Verify { scope } => verify::run(&ctx, scope),
    }
}

// ---------------------------------------------------------------------------
// Cached artifact getters.

pub fn get_table(ctx: &Ctx, n: u32) -> Result<CharacterTable, CliError> {
    match cache::load_chartable(&ctx.cache_dir, n) {
        Ok(Some(table)) => return Ok(table),
        Ok(None) => {}
        Err(c) => warn(&format!("{}; recomputing", c)),
    }
    let table = build_table(n, None)?;
    if let Err(e) = cache::store_chartable(&ctx.cache_dir, &table) {
        warn(&format!("could not write chartable cache: {}", e));
    }
    Ok(table)
}

pub fn get_loadings(ctx: &Ctx, n: u32) -> Result<LoadingTable, CliError> {
    if ctx.default_mode {
        match cache::load_loadings(&ctx.cache_dir, n) {
            Ok(Some(table)) => return Ok(table),
            Ok(None) => {}
            Err(c) => warn(&format!("{}; recomputing", c)),
        }
    }
    let table = compute_loadings(n, ctx.mode)?;
    if ctx.default_mode {
        if let Err(e) = cache::store_loadings(&ctx.cache_dir, &table) {
            warn(&format!("could not write loadings cache: {}", e));
        }
    }
    Ok(table)
}

/// Evaluates every applicable conjecture side for `n`, honoring the
/// long-run gates. Returns the thresholds plus whether a side was skipped
/// because it needs `--long`.
fn conjectured_for(ctx: &Ctx, n: u32) -> Result<(Option<Thresholds>, bool), CliError> {
    let r_applicable = n % 4 == 0 && n >= 8;
    let b_applicable = n % 3 == 0 && n >= 6;
    let mut gated = false;
    let sim = if r_applicable {
        if n > CONJECTURE_R_LONG_GATE_N && !ctx.long {
            gated = true;
            None
        } else {
            Some(similitude_loadings(n, ctx.mode)?)
        }
    } else {
        None
    };
    let diff = if b_applicable {
        if n > CONJECTURE_B_LONG_GATE_N && !ctx.long {
            gated = true;
            None
        } else {
            Some(difference_loadings(n, ctx.mode)?)
        }
    } else {
        None
    };
    if sim.is_none() && diff.is_none() {
        return Ok((None, gated));
    }
    let th = conjectured_thresholds(n, sim.as_ref(), diff.as_ref())?;
    Ok((Some(th), gated))
}

/// Finds thresholds for `n`: a cached scan result first, then the embedded
/// exhaustive table (totals 6 through 20), then the conjectured closed
/// forms. The second value names the source.
/// Where resolved thresholds came from. The source decides the certificate
/// slack: embedded table rows are stored at four decimals, so verdicts
/// issued against them must clear the threshold by the quantization radius;
/// cached and conjectured values are full precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Cache,
    EmbeddedTable,
    Conjectured,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::Cache => "cache",
            Source::EmbeddedTable => "embedded exhaustive table",
            Source::Conjectured => "conjectured",
        }
    }

    /// Slack for certificates issued against thresholds from this source.
    pub fn slack(self) -> f64 {
        match self {
            Source::EmbeddedTable => QUANTIZED_4DEC_SLACK,
            Source::Cache | Source::Conjectured => TIE_GUARD_SLACK,
        }
    }
}

pub fn resolve_thresholds(ctx: &Ctx, n: u32) -> Result<(Thresholds, Source), CliError> {
    match cache::load_thresholds(&ctx.cache_dir, n) {
        Ok(Some(th)) => return Ok((th, Source::Cache)),
        Ok(None) => {}
        Err(c) => warn(&format!("{}; ignoring", c)),
    }
    if let Some(th) = fixtures::embedded_thresholds(n) {
        return Ok((th, Source::EmbeddedTable));
    }
    let (conjectured, gated) = conjectured_for(ctx, n)?;
    if let Some(th) = conjectured {
        if ctx.default_mode {
            if let Err(e) = cache::store_thresholds(&ctx.cache_dir, &th) {
                warn(&format!("could not write thresholds cache: {}", e));
            }
        }
        return Ok((th, Source::Conjectured));
    }
    if gated {
        return Err(kronload::Error::ResourceBudget(format!(
            "the conjecture walk for n={} is a long computation; rerun with --long",
            n
        ))
        .into());
    }
    Err(kronload::Error::Domain(format!(
        "no thresholds available for n={}: not in the embedded table, no cached scan, \
and no conjecture applies; run `kronload scan --n {}` first",
        n, n
    ))
    .into())
}

// ---------------------------------------------------------------------------
// Simple listings.

fn cmd_partitions(ctx: &Ctx, n: u32) -> Result<(), CliError> {
    let order = enumerate(n)?;
    match ctx.format {
        Format::Csv => {
            println!("index,partition,depth");
            for (i, p) in order.iter().enumerate() {
                println!("{},{},{}", i, csv_field(&p.format(true)), p.depth());
            }
        }
        Format::Json => {
            let rows: Vec<_> = order
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    json!({
                        "index": i,
                        "partition": p.format(true),
                        "depth": p.depth(),
                    })
                })
                .collect();
            let value = json!({ "n": n, "count": order.len(), "partitions": rows });
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
    }
    Ok(())
}

fn cmd_chartable(ctx: &Ctx, n: u32) -> Result<(), CliError> {
    let table = get_table(ctx, n)?;
    let class_names: Vec<String> = table
        .classes()
        .iter()
        .map(|c| c.rho.format(true))
        .collect();
    match ctx.format {
        Format::Csv => {
            let header: Vec<String> = std::iter::once("partition".to_string())
                .chain(class_names.iter().map(|s| csv_field(s)))
                .collect();
            println!("{}", header.join(","));
            for (i, p) in table.order().iter().enumerate() {
                let values: Vec<String> = table.row(i).iter().map(|v| v.to_string()).collect();
                println!("{},{}", csv_field(&p.format(true)), values.join(","));
            }
        }
        Format::Json => {
            let rows: Vec<_> = table
                .order()
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    json!({
                        "partition": p.format(true),
                        "values": table.row(i),
                    })
                })
                .collect();
            let value = json!({ "n": n, "classes": class_names, "rows": rows });
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
    }
    Ok(())
}

fn parse_triple(n: u32, lambda: &str, mu: &str, nu: &str) -> Result<Triple, CliError> {
    let lambda = Partition::parse_with_total(lambda, n)?;
    let mu = Partition::parse_with_total(mu, n)?;
    let nu = Partition::parse_with_total(nu, n)?;
    Ok(Triple::new(lambda, mu, nu)?)
}

fn cmd_kron(ctx: &Ctx, n: u32, lambda: &str, mu: &str, nu: &str) -> Result<(), CliError> {
    let t = parse_triple(n, lambda, mu, nu)?;
    let table = get_table(ctx, n)?;
    let value = kron(&t, &table)?;
    match ctx.format {
        Format::Csv => println!("{}", value),
        Format::Json => {
            let obj = json!({
                "n": n,
                "lambda": t.lambda.format(true),
                "mu": t.mu.format(true),
                "nu": t.nu.format(true),
                "value": value,
            });
            println!("{}", serde_json::to_string_pretty(&obj).expect("json"));
        }
    }
    Ok(())
}

fn cmd_loadings(ctx: &Ctx, n: u32) -> Result<(), CliError> {
    let table = get_loadings(ctx, n)?;
    match ctx.format {
        Format::Csv => print!("{}", export::loadings_csv(&table)),
        Format::Json => {
            let rows: Vec<_> = table
                .order
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    json!({
                        "partition": p.format(true),
                        "r": json_f64_4dec(table.r[i]),
                        "b": json_f64_4dec(table.b[i]),
                        "v": json_f64_4dec(table.v[i]),
                        "w": json_f64_4dec(table.w[i]),
                    })
                })
                .collect();
            let value = json!({
                "n": n,
                "iterations": [table.iterations.0, table.iterations.1],
                "residuals": [table.residuals.0, table.residuals.1],
                "rows": rows,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Scan and classification.

fn triple_compact(t: &Option<Triple>) -> String {
    match t {
        Some(t) => format!(
            "{};{};{}",
            t.lambda.format(true),
            t.mu.format(true),
            t.nu.format(true)
        ),
        None => String::new(),
    }
}

fn write_scan_outputs(n: u32, result: &ScanResult, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let (r_fit, b_fit) = export::scan_fits(result);
    fs::write(dir.join("scan.json"), export::scan_json(result))?;
    fs::write(dir.join("r_hist.csv"), export::histogram_csv(&result.r_hist))?;
    fs::write(dir.join("b_hist.csv"), export::histogram_csv(&result.b_hist))?;
    fs::write(
        dir.join("r_hist.svg"),
        svg::render_histogram_svg(
            &result.r_hist,
            r_fit.as_ref().ok(),
            &format!("triple r-loadings, n = {}", n),
        ),
    )?;
    fs::write(
        dir.join("b_hist.svg"),
        svg::render_histogram_svg(
            &result.b_hist,
            b_fit.as_ref().ok(),
            &format!("triple b-loadings, n = {}", n),
        ),
    )?;
    eprintln!(
        "wrote scan.json, r_hist.csv, b_hist.csv, r_hist.svg, b_hist.svg to {}",
        dir.display()
    );
    Ok(())
}

fn cmd_scan(ctx: &Ctx, n: u32, bins: usize, out_dir: Option<&Path>) -> Result<(), CliError> {
    let table = get_table(ctx, n)?;
    let loadings = get_loadings(ctx, n)?;
    let opts = ScanOptions {
        long: ctx.long,
        bins,
        ..ScanOptions::default()
    };
    let result = scan(n, &table, &loadings, &opts)?;
    if ctx.default_mode {
        if let Err(e) = cache::store_thresholds(&ctx.cache_dir, &result.thresholds) {
            warn(&format!("could not write thresholds cache: {}", e));
        }
    }
    if let Some(dir) = out_dir {
        write_scan_outputs(n, &result, dir)?;
    }
    let th = &result.thresholds;
    match ctx.format {
        Format::Csv => {
            println!(
                "n,r_star,b_star,argmin_r,argmin_b,provenance,total_triples,nonzero,zero,depth_violating,r_below,b_below,min_r_depth_violating"
            );
            let min_r_dv = if result.min_r_depth_violating.is_finite() {
                format!("{:.4}", result.min_r_depth_violating)
            } else {
                "inf".to_string()
            };
            println!(
                "{},{:.4},{:.4},{},{},{},{},{},{},{},{},{},{}",
                n,
                th.r_star,
                th.b_star,
                csv_field(&triple_compact(&th.argmin_r)),
                csv_field(&triple_compact(&th.argmin_b)),
                th.provenance,
                result.total_triples,
                result.nonzero_count,
                result.zero_count,
                result.depth_violating_count,
                result.r_below_count,
                result.b_below_count,
                min_r_dv
            );
        }
        Format::Json => print!("{}", export::scan_json(&result)),
    }
    Ok(())
}

fn verdict_name(kind: VerdictKind) -> &'static str {
    match kind {
        VerdictKind::ProvablyZero => "provably_zero",
        VerdictKind::ProvablyNonzero => "provably_nonzero",
        VerdictKind::Unknown => "unknown",
    }
}

fn rule_name(rule: Rule) -> &'static str {
    match rule {
        Rule::RBelowThreshold => "r_below_threshold",
        Rule::BBelowThreshold => "b_below_threshold",
    }
}

fn explain(verdict: &Verdict, th: &Thresholds) -> String {
    let prefix = if verdict.advisory {
        "advisory (conjectured thresholds): "
    } else {
        ""
    };
    match verdict.kind {
        VerdictKind::ProvablyZero => format!(
            "{}r(t) = {:.4} < r* = {:.4}, so the coefficient vanishes",
            prefix, verdict.r_value, th.r_star
        ),
        VerdictKind::ProvablyNonzero => format!(
            "{}b(t) = {:.4} < b* = {:.4}, so the coefficient is nonzero",
            prefix, verdict.b_value, th.b_star
        ),
        VerdictKind::Unknown => format!("{}neither threshold rule fires", prefix),
    }
}

fn cmd_classify(ctx: &Ctx, n: u32, lambda: &str, mu: &str, nu: &str) -> Result<(), CliError> {
    let t = parse_triple(n, lambda, mu, nu)?;
    let loadings = get_loadings(ctx, n)?;
    let (th, source) = resolve_thresholds(ctx, n)?;
    let verdict = classify(&t, &th, &loadings, source.slack())?;
    match ctx.format {
        Format::Csv => {
            println!(
                "n,lambda,mu,nu,r,b,r_star,b_star,provenance,source,verdict,rule,margin,advisory,explanation"
            );
            let (rule, margin) = match verdict.witness {
                Some(w) => (rule_name(w.rule).to_string(), format!("{:.4}", w.margin)),
                None => (String::new(), String::new()),
            };
            let fmt_star = |x: f64| {
                if x.is_finite() {
                    format!("{:.4}", x)
                } else {
                    String::new()
                }
            };
            println!(
                "{},{},{},{},{:.4},{:.4},{},{},{},{},{},{},{},{},{}",
                n,
                csv_field(&t.lambda.format(true)),
                csv_field(&t.mu.format(true)),
                csv_field(&t.nu.format(true)),
                verdict.r_value,
                verdict.b_value,
                fmt_star(th.r_star),
                fmt_star(th.b_star),
                th.provenance,
                source.label(),
                verdict_name(verdict.kind),
                rule,
                margin,
                verdict.advisory,
                csv_field(&explain(&verdict, &th))
            );
        }
        Format::Json => {
            let witness = match verdict.witness {
                Some(w) => json!({
                    "rule": rule_name(w.rule),
                    "margin": json_f64_4dec(w.margin),
                }),
                None => serde_json::Value::Null,
            };
            let value = json!({
                "n": n,
                "lambda": t.lambda.format(true),
                "mu": t.mu.format(true),
                "nu": t.nu.format(true),
                "r": json_f64_4dec(verdict.r_value),
                "b": json_f64_4dec(verdict.b_value),
                "r_star": json_f64_4dec(th.r_star),
                "b_star": json_f64_4dec(th.b_star),
                "provenance": th.provenance.to_string(),
                "source": source.label(),
                "verdict": verdict_name(verdict.kind),
                "witness": witness,
                "advisory": verdict.advisory,
                "explanation": explain(&verdict, &th),
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
    }
    Ok(())
}

fn cmd_thresholds(ctx: &Ctx, n: u32) -> Result<(), CliError> {
    let (th, source) = resolve_thresholds(ctx, n)?;
    let fmt_star = |x: f64| {
        if x.is_finite() {
            format!("{:.4}", x)
        } else {
            String::new()
        }
    };
    match ctx.format {
        Format::Csv => {
            println!("n,r_star,b_star,argmin_r,argmin_b,provenance,source");
            println!(
                "{},{},{},{},{},{},{}",
                n,
                fmt_star(th.r_star),
                fmt_star(th.b_star),
                csv_field(&triple_compact(&th.argmin_r)),
                csv_field(&triple_compact(&th.argmin_b)),
                th.provenance,
                source.label()
            );
        }
        Format::Json => {
            let star = |x: f64| {
                if x.is_finite() {
                    json_f64_4dec(x)
                } else {
                    serde_json::Value::Null
                }
            };
            let triple_json = |t: &Option<Triple>| match t {
                Some(t) => json!([
                    t.lambda.format(true),
                    t.mu.format(true),
                    t.nu.format(true)
                ]),
                None => serde_json::Value::Null,
            };
            let value = json!({
                "n": n,
                "r_star": star(th.r_star),
                "b_star": star(th.b_star),
                "argmin_r": triple_json(&th.argmin_r),
                "argmin_b": triple_json(&th.argmin_b),
                "provenance": th.provenance.to_string(),
                "source": source.label(),
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Conjectures and statistics.

fn cmd_conjecture(ctx: &Ctx, n: u32, side: Side) -> Result<(), CliError> {
    let r_applicable = n % 4 == 0 && n >= 8;
    let b_applicable = n % 3 == 0 && n >= 6;
    let gate = |limit: u32, what: &str| -> Result<(), CliError> {
        if n > limit && !ctx.long {
            Err(kronload::Error::ResourceBudget(format!(
                "the {} conjecture at n={} is a long computation (gate at n={}); rerun with --long",
                what, n, limit
            ))
            .into())
        } else {
            Ok(())
        }
    };

    let mut rows: Vec<(char, f64, Triple)> = Vec::new();
    match side {
        Side::R | Side::Both => {
            if r_applicable {
                if side == Side::R {
                    gate(CONJECTURE_R_LONG_GATE_N, "r*")?;
                }
                if n > CONJECTURE_R_LONG_GATE_N && !ctx.long {
                    warn(&format!(
                        "skipping the r* conjecture at n={}; rerun with --long",
                        n
                    ));
                } else {
                    let sim = similitude_loadings(n, ctx.mode)?;
                    let (value, triple) = conjectured_r_star(&sim)?;
                    rows.push(('r', value, triple));
                }
            } else if side == Side::R {
                return Err(kronload::Error::Domain(format!(
                    "the r* conjecture needs n divisible by 4 with n >= 8; got n={}",
                    n
                ))
                .into());
            }
        }
        Side::B => {}
    }
    match side {
        Side::B | Side::Both => {
            if b_applicable {
                if side == Side::B {
                    gate(CONJECTURE_B_LONG_GATE_N, "b*")?;
                }
                if n > CONJECTURE_B_LONG_GATE_N && !ctx.long {
                    warn(&format!(
                        "skipping the b* conjecture at n={}; rerun with --long",
                        n
                    ));
                } else {
                    let diff = difference_loadings(n, ctx.mode)?;
                    let (value, triple) = conjectured_b_star(&diff)?;
                    rows.push(('b', value, triple));
                }
            } else if side == Side::B {
                return Err(kronload::Error::Domain(format!(
                    "the b* conjecture needs n divisible by 3 with n >= 6; got n={}",
                    n
                ))
                .into());
            }
        }
        Side::R => {}
    }

    if rows.is_empty() {
        if !r_applicable && !b_applicable {
            return Err(kronload::Error::Domain(format!(
                "no conjecture applies at n={}: r* needs 4 | n (n >= 8), b* needs 3 | n (n >= 6)",
                n
            ))
            .into());
        }
        return Err(kronload::Error::ResourceBudget(format!(
            "every applicable conjecture at n={} is gated; rerun with --long",
            n
        ))
        .into());
    }

    match ctx.format {
        Format::Csv => {
            println!("side,n,value,lambda,mu,nu");
            for (side, value, triple) in &rows {
                println!(
                    "{},{},{:.4},{},{},{}",
                    side,
                    n,
                    value,
                    csv_field(&triple.lambda.format(true)),
                    csv_field(&triple.mu.format(true)),
                    csv_field(&triple.nu.format(true))
                );
            }
        }
        Format::Json => {
            let sides: Vec<_> = rows
                .iter()
                .map(|(side, value, triple)| {
                    json!({
                        "side": side.to_string(),
                        "value": json_f64_4dec(*value),
                        "triple": [
                            triple.lambda.format(true),
                            triple.mu.format(true),
                            triple.nu.format(true)
                        ],
                    })
                })
                .collect();
            let value = json!({ "n": n, "provenance": "conjectured", "sides": sides });
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
    }
    Ok(())
}

struct StatsSide {
    partition: Moments,
    triple: Moments,
    fit: Result<FitParams, kronload::Error>,
}

fn stats_side(values: &[f64], gamma: bool) -> Result<StatsSide, CliError> {
    let partition = moments(values.iter().copied())?;
    let triple = triple_moments(&partition);
    let fit = if gamma {
        fit_gamma(triple.mean, triple.variance)
    } else {
        fit_normal(triple.mean, triple.variance)
    };
    Ok(StatsSide {
        partition,
        triple,
        fit,
    })
}

fn cmd_stats(ctx: &Ctx, n: u32) -> Result<(), CliError> {
    let table = get_loadings(ctx, n)?;
    let r = stats_side(&table.r, false)?;
    let b = stats_side(&table.b, true)?;
    match ctx.format {
        Format::Csv => {
            let fit_cell = |side: &StatsSide, which: usize| match &side.fit {
                Ok(f) => format!(
                    "{:.4}",
                    if which == 0 { f.params.0 } else { f.params.1 }
                ),
                Err(_) => String::new(),
            };
            let fit_family = |side: &StatsSide| match &side.fit {
                Ok(f) => match f.family {
                    kronload::stats::Family::Normal => "normal",
                    kronload::stats::Family::Gamma => "gamma",
                },
                Err(_) => "",
            };
            println!("metric,r,b");
            println!("partition_count,{},{}", r.partition.count, b.partition.count);
            println!(
                "partition_mean,{:.4},{:.4}",
                r.partition.mean, b.partition.mean
            );
            println!(
                "partition_variance,{:.4},{:.4}",
                r.partition.variance, b.partition.variance
            );
            println!("triple_count,{},{}", r.triple.count, b.triple.count);
            println!("triple_mean,{:.4},{:.4}", r.triple.mean, b.triple.mean);
            println!(
                "triple_variance,{:.4},{:.4}",
                r.triple.variance, b.triple.variance
            );
            println!("fit_family,{},{}", fit_family(&r), fit_family(&b));
            println!("fit_param1,{},{}", fit_cell(&r, 0), fit_cell(&b, 0));
            println!("fit_param2,{},{}", fit_cell(&r, 1), fit_cell(&b, 1));
        }
        Format::Json => {
            let side_json = |side: &StatsSide| {
                let fit = match &side.fit {
                    Ok(f) => json!({
                        "family": match f.family {
                            kronload::stats::Family::Normal => "normal",
                            kronload::stats::Family::Gamma => "gamma",
                        },
                        "params": [json_f64_4dec(f.params.0), json_f64_4dec(f.params.1)],
                        "degenerate": f.degenerate,
                    }),
                    Err(_) => serde_json::Value::Null,
                };
                json!({
                    "partition": {
                        "count": side.partition.count,
                        "mean": json_f64_4dec(side.partition.mean),
                        "variance": json_f64_4dec(side.partition.variance),
                    },
                    "triple": {
                        "count": side.triple.count,
                        "mean": json_f64_4dec(side.triple.mean),
                        "variance": json_f64_4dec(side.triple.variance),
                    },
                    "fit": fit,
                })
            };
            let value = json!({ "n": n, "r": side_json(&r), "b": side_json(&b) });
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use kronload::thresholds::Provenance;

    fn test_ctx(dir: &Path) -> Ctx {
        Ctx {
            cache_dir: dir.to_path_buf(),
            mode: Mode::default(),
            default_mode: true,
            format: Format::Csv,
            long: false,
        }
    }

    #[test]
    fn getters_roundtrip_through_cache() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = test_ctx(dir.path());
        let t1 = get_table(&ctx, 6).unwrap();
        let t2 = get_table(&ctx, 6).unwrap();
        assert_eq!(t1.values(), t2.values());
        assert!(cache::path_for(dir.path(), cache::Kind::Chartable, 6).exists());

        let l1 = get_loadings(&ctx, 6).unwrap();
        let l2 = get_loadings(&ctx, 6).unwrap();
        assert_eq!(l1.r, l2.r);
        assert!(cache::path_for(dir.path(), cache::Kind::Loadings, 6).exists());

        // A non-default mode must bypass the cache entirely.
        let fast_ctx = Ctx {
            mode: Mode::Fixed(3),
            default_mode: false,
            ..test_ctx(dir.path())
        };
        let rough = get_loadings(&fast_ctx, 7).unwrap();
        assert!(!cache::path_for(dir.path(), cache::Kind::Loadings, 7).exists());
        assert_eq!(rough.iterations, (3, 3));
    }

    #[test]
    fn threshold_resolution_order() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = test_ctx(dir.path());

        // Totals 6..=20 come from the embedded table when nothing is cached.
        let (th, source) = resolve_thresholds(&ctx, 6).unwrap();
        assert_eq!(source, Source::EmbeddedTable);
        assert!((th.r_star - 90.9986).abs() < 1e-3);
        assert_eq!(th.provenance, Provenance::Exhaustive);

        // A cached scan takes precedence once present.
        let table = get_table(&ctx, 6).unwrap();
        let loadings = get_loadings(&ctx, 6).unwrap();
        let result = scan(6, &table, &loadings, &ScanOptions::default()).unwrap();
        cache::store_thresholds(dir.path(), &result.thresholds).unwrap();
        let (th2, source2) = resolve_thresholds(&ctx, 6).unwrap();
        assert_eq!(source2, Source::Cache);
        assert_eq!(th2, result.thresholds);

        // Outside the embedded range, an applicable conjecture fills in and
        // is itself cached.
        let (th21, source21) = resolve_thresholds(&ctx, 21).unwrap();
        assert_eq!(source21, Source::Conjectured);
        assert_eq!(th21.provenance, Provenance::Conjectured);
        assert!(th21.b_star.is_finite());
        assert_eq!(th21.r_star, f64::NEG_INFINITY);
        let (_, source21b) = resolve_thresholds(&ctx, 21).unwrap();
        assert_eq!(source21b, Source::Cache);

        // No sources at all: a clear domain error.
        let err = resolve_thresholds(&ctx, 22).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("scan"));
    }

    #[test]
    fn exit_codes_map_as_documented() {
        assert_eq!(
            CliError::from(kronload::Error::ResourceBudget("x".into())).exit_code(),
            4
        );
        assert_eq!(
            CliError::from(kronload::Error::Domain("x".into())).exit_code(),
            2
        );
        assert_eq!(CliError::VerifyFailed { failures: 1 }.exit_code(), 3);
        assert_eq!(
            CliError::from(std::io::Error::new(std::io::ErrorKind::Other, "x")).exit_code(),
            2
        );
    }
}
