//! `pnveri`: verdicts, scans, oracles and singularity censuses for
//! `x^t` over finite fields of odd characteristic.

mod config;
mod render;

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use pnveri::arith::{is_prime, Case};
use pnveri::criteria::{
    group_conditions, group_proves, verdict, Classification, CriteriaConfig, Status, Verdict,
};
use pnveri::gf::build_field_capped;
use pnveri::oracle::{self, OracleError};
use pnveri::poly::UniPoly;
use pnveri::sing::{self, SingError};

use config::{parse_groups, parse_range, parse_seed, Format, RunConfig};
use render::{ScanSummary, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "pnveri", version, about = "Exceptional planarity checks for monomials x^t")]
struct Cli {
    /// TOML or JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// RNG seed for factoring (decimal or 0x-hex). Overrides SEED.
    #[arg(long, global = true)]
    seed: Option<String>,
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CapArgs {
    #[arg(long, global = true)]
    max_ext_degree: Option<usize>,
    #[arg(long, global = true)]
    bifactor_degree: Option<u32>,
    #[arg(long, global = true)]
    recombination_subsets: Option<u64>,
    #[arg(long, global = true)]
    oracle_field: Option<u64>,
    #[arg(long, global = true)]
    oracle_pairs: Option<u64>,
    #[arg(long, global = true)]
    oracle_candidates: Option<u64>,
    #[arg(long, global = true)]
    census_points: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verdict for one exponent.
    Check(CheckArgs),
    /// Verdicts for a range of exponents, with a summary of unresolved ones.
    Scan(ScanArgs),
    /// Brute-force ground truth.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Singular points of g_t.
    Census(CensusArgs),
    /// Quick consistency checks on known values.
    Selftest,
}

#[derive(Debug, Args)]
struct Selection {
    /// Groups to evaluate, e.g. "1,3" or "1-5".
    #[arg(long, value_parser = parse_groups)]
    groups: Option<BTreeSet<u8>>,
    /// Include condition (b) in groups 3 to 5.
    #[arg(long)]
    with_b: bool,
    /// Exit with code 2 when a verdict was skipped by a cap.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    t: u64,
    #[command(flatten)]
    sel: Selection,
    /// Cross-check absolute irreducibility claims by exhaustive divisor search.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 3)]
    t_min: u64,
    #[arg(long)]
    t_max: u64,
    #[command(flatten)]
    sel: Selection,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    /// Whether x^t is planar over F_{p^n} for each n.
    Planar {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t: u64,
        /// Extension degrees, e.g. "1..5" or "2,4".
        #[arg(long, value_parser = parse_degrees)]
        n: Degrees,
    },
    /// Whether a polynomial permutes F_{p^n}. Coefficients are given lowest
    /// degree first, each as a field element index.
    Pp {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<u64>,
    },
    /// Whether g_t has an F_{p^n}-point off the diagonal, for each n.
    Points {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, value_parser = parse_degrees)]
        n: Degrees,
    },
    /// |Omega_t| by comparing all pairs of (t-1)-th roots of unity.
    Pairs {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t: u64,
    },
}

#[derive(Debug, Args)]
struct CensusArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    t: u64,
    /// Recheck the first K multiplicities by Taylor expansion.
    #[arg(long)]
    verify: Option<usize>,
    /// Points to list in text output.
    #[arg(long, default_value_t = 20)]
    show: usize,
}

#[derive(Debug, Clone)]
struct Degrees(Vec<usize>);

fn parse_degrees(s: &str) -> Result<Degrees, String> {
    parse_range(s).map(Degrees)
}

/// Errors that map to exit code 2.
fn is_cap_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        matches!(c.downcast_ref::<OracleError>(), Some(OracleError::CapExceeded { .. }))
            || matches!(c.downcast_ref::<SingError>(), Some(SingError::CapExceeded { .. }))
            || c.downcast_ref::<CapHit>().is_some()
    })
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct CapHit(String);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_cap_error(&e) { 2 } else { 1 })
        }
    }
}

fn settings(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(s) = &cli.seed {
        cfg.seed = parse_seed(s)?;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    let c = &cli.caps;
    let caps = &mut cfg.caps;
    if let Some(v) = c.max_ext_degree {
        caps.max_ext_degree = v;
    }
    if let Some(v) = c.bifactor_degree {
        caps.bifactor_degree = v;
    }
    if let Some(v) = c.recombination_subsets {
        caps.recombination_subsets = v;
    }
    if let Some(v) = c.oracle_field {
        caps.oracle_field = v;
    }
    if let Some(v) = c.oracle_pairs {
        caps.oracle_pairs = v;
    }
    if let Some(v) = c.oracle_candidates {
        caps.oracle_candidates = v;
    }
    if let Some(v) = c.census_points {
        caps.census_points = v;
    }
    Ok(cfg)
}

fn apply_selection(cfg: &mut RunConfig, sel: &Selection) {
    if let Some(g) = &sel.groups {
        cfg.groups = g.clone();
    }
    cfg.with_b |= sel.with_b;
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        bail!("p must be an odd prime, got {p}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = settings(&cli)?;
    match &cli.command {
        Command::Check(a) => {
            apply_selection(&mut cfg, &a.sel);
            cfg.validate()?;
            cmd_check(&cfg, a)
        }
        Command::Scan(a) => {
            apply_selection(&mut cfg, &a.sel);
            cfg.validate()?;
            cmd_scan(&cfg, a)
        }
        Command::Oracle(q) => {
            cfg.validate()?;
            cmd_oracle(&cfg, q)
        }
        Command::Census(a) => {
            cfg.validate()?;
            cmd_census(&cfg, a)
        }
        Command::Selftest => cmd_selftest(),
    }
}

fn skipped_somewhere(v: &Verdict) -> bool {
    matches!(v.classification, Classification::Skipped(_))
        || (v.is_unresolved() && v.conditions.iter().any(|c| matches!(c.status, Status::Skipped(_))))
}

fn cmd_check(cfg: &RunConfig, a: &CheckArgs) -> Result<()> {
    check_prime(a.p)?;
    if a.t < 2 {
        bail!("t must be at least 2, got {}", a.t);
    }
    let v = verdict(a.p, a.t, &cfg.criteria(a.exhaustive));
    let mut out = io::stdout().lock();
    match cfg.format {
        Format::Text => write!(out, "{}", render::verdict_text(&v))?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&render::verdict_json(&v))?)?,
        Format::Csv => render::write_csv(&mut out, std::slice::from_ref(&v))?,
    }
    if a.sel.strict && skipped_somewhere(&v) {
        return Err(CapHit(format!("t = {} was not settled within the caps", v.t)).into());
    }
    Ok(())
}

fn summarize(p: u64, t_min: u64, t_max: u64, verdicts: &[Verdict], ccfg: &CriteriaConfig) -> ScanSummary {
    let mut s = ScanSummary {
        p,
        t_min,
        t_max,
        case_b_unresolved: Vec::new(),
        case_b_discrepancies: Vec::new(),
        case_a: Vec::new(),
        exceptional: Vec::new(),
    };
    let counted: Vec<&Verdict> = verdicts.iter().filter(|v| v.t % p != 0).collect();
    for v in &counted {
        if let Classification::Exceptional(_) = v.classification {
            s.exceptional.push(v.t);
        }
        if v.case == Some(Case::B) {
            if v.is_unresolved() {
                s.case_b_unresolved.push(v.t);
            }
            for n in v.notes.iter().filter(|n| n.starts_with("table discrepancy")) {
                s.case_b_discrepancies.push(render::Discrepancy { t: v.t, note: n.clone() });
            }
        }
    }
    for &g in &ccfg.groups {
        let ids = group_conditions(g, ccfg.with_b);
        let mut row = render::GroupRow { group: g, unresolved: Vec::new(), skipped: Vec::new() };
        for v in counted.iter().filter(|v| v.case == Some(Case::A) && !v.conditions.is_empty()) {
            if group_proves(v, g, ccfg.with_b) {
                continue;
            }
            let skipped =
                v.conditions.iter().any(|c| ids.contains(&c.id) && matches!(c.status, Status::Skipped(_)));
            if skipped {
                row.skipped.push(v.t);
            } else {
                row.unresolved.push(v.t);
            }
        }
        s.case_a.push(row);
    }
    s
}

fn cmd_scan(cfg: &RunConfig, a: &ScanArgs) -> Result<()> {
    check_prime(a.p)?;
    if a.t_min < 2 || a.t_min > a.t_max {
        bail!("need 2 <= t-min <= t-max, got {}..{}", a.t_min, a.t_max);
    }
    let ccfg = cfg.criteria(false);
    let work = || -> Vec<Verdict> { (a.t_min..=a.t_max).into_par_iter().map(|t| verdict(a.p, t, &ccfg)).collect() };
    let verdicts = match a.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().context("thread pool")?.install(work),
        None => work(),
    };
    let summary = summarize(a.p, a.t_min, a.t_max, &verdicts, &ccfg);
    let mut out = io::stdout().lock();
    match cfg.format {
        Format::Csv => {
            render::write_csv(&mut out, &verdicts)?;
            eprint!("{}", render::summary_text(&summary));
        }
        Format::Json => {
            let doc = json!({ "schema": SCHEMA, "verdicts": verdicts, "summary": summary });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Text => {
            for v in &verdicts {
                let detail = v.classification.detail();
                let group = v.group_attained.map(|g| format!(" [group {g}]")).unwrap_or_default();
                writeln!(out, "t = {:>5}  {:<11} {detail}{group}", v.t, v.classification.label())?;
            }
            writeln!(out)?;
            write!(out, "{}", render::summary_text(&summary))?;
        }
    }
    if a.sel.strict {
        let skipped: Vec<u64> = verdicts.iter().filter(|v| skipped_somewhere(v)).map(|v| v.t).collect();
        if !skipped.is_empty() {
            return Err(CapHit(format!("{} exponents were not settled within the caps", skipped.len())).into());
        }
    }
    Ok(())
}

fn cmd_oracle(cfg: &RunConfig, q: &OracleCmd) -> Result<()> {
    let ocfg = cfg.oracle();
    let report = match q {
        OracleCmd::Planar { p, t, n } => {
            check_prime(*p)?;
            let mut res = Vec::new();
            for &k in &n.0 {
                res.push(json!({ "n": k, "planar": oracle::is_planar(*p, *t, k, &ocfg)? }));
            }
            oracle::OracleReport {
                query: "planar".into(),
                params: json!({ "p": p, "t": t, "n": n.0 }),
                result: json!(res),
                exhaustive: "every x in F_{p^n}".into(),
            }
        }
        OracleCmd::Pp { p, n, coeffs } => {
            check_prime(*p)?;
            let ctx = build_field_capped(*p, *n, cfg.caps.max_ext_degree)?;
            let size = ctx.order_u64().unwrap_or(u64::MAX);
            if let Some(c) = coeffs.iter().find(|&&c| c >= size) {
                bail!("coefficient index {c} is not below the field size {size}");
            }
            let h = UniPoly::new(ctx.clone(), coeffs.iter().map(|&c| ctx.elem_from_index(c)).collect());
            oracle::OracleReport {
                query: "pp".into(),
                params: json!({ "p": p, "n": n, "coeffs": coeffs }),
                result: json!(oracle::is_pp(&h, &ocfg)?),
                exhaustive: "every x in F_{p^n}".into(),
            }
        }
        OracleCmd::Points { p, t, n } => {
            check_prime(*p)?;
            let mut res = Vec::new();
            for &k in &n.0 {
                res.push(json!({ "n": k, "off_diagonal_point": oracle::distinct_point_search(*p, *t, k, &ocfg)? }));
            }
            oracle::OracleReport {
                query: "points".into(),
                params: json!({ "p": p, "t": t, "n": n.0 }),
                result: json!(res),
                exhaustive: "every x in F_{p^n}, all y".into(),
            }
        }
        OracleCmd::Pairs { p, t } => {
            check_prime(*p)?;
            oracle::OracleReport {
                query: "pairs".into(),
                params: json!({ "p": p, "t": t }),
                result: json!(oracle::brute_pairs(*p, *t, &ocfg)?),
                exhaustive: "all ordered pairs of (t-1)-th roots of unity".into(),
            }
        }
    };
    let mut out = io::stdout().lock();
    match cfg.format {
        Format::Json | Format::Csv => {
            let doc = json!({ "schema": SCHEMA, "oracle": report });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Text => {
            writeln!(out, "{} {}", report.query, report.params)?;
            match &report.result {
                serde_json::Value::Array(rows) => {
                    for r in rows {
                        writeln!(out, "  {r}")?;
                    }
                }
                r => writeln!(out, "  {r}")?,
            }
            writeln!(out, "  searched: {}", report.exhaustive)?;
        }
    }
    Ok(())
}

fn cmd_census(cfg: &RunConfig, a: &CensusArgs) -> Result<()> {
    check_prime(a.p)?;
    let scfg = cfg.sing();
    let case = pnveri::arith::decompose(a.p, a.t)?.case;
    let summary = match case {
        Case::A => sing::omega_census(a.p, a.t, &scfg)?,
        Case::B => sing::case_b_enum(a.p, a.t, &scfg)?,
    };
    let check = match a.verify {
        Some(k) => Some(sing::verify_multiplicities(&summary, k, &scfg)?),
        None => None,
    };
    let mut out = io::stdout().lock();
    match cfg.format {
        Format::Text => write!(out, "{}", render::census_text(&summary, a.show, check.as_ref()))?,
        Format::Json | Format::Csv => {
            let doc = json!({ "schema": SCHEMA, "census": summary, "verification": check });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(())
}

fn cmd_selftest() -> Result<()> {
    let ccfg = CriteriaConfig::default();
    let ocfg = oracle::OracleConfig::default();
    let scfg = sing::SingConfig::default();
    let label = |p, t| verdict(p, t, &ccfg).classification;
    type Check<'a> = (&'static str, Box<dyn Fn() -> Result<bool> + 'a>);
    let checks: Vec<Check> = vec![
        ("t = 5 over F_3 is odd", Box::new(|| Ok(label(3, 5) == Classification::ProvenOdd))),
        ("t = 4 over F_3 is exceptional", Box::new(|| Ok(matches!(label(3, 4), Classification::Exceptional(_))))),
        ("t = 14 over F_3 is exceptional", Box::new(|| Ok(matches!(label(3, 14), Classification::Exceptional(_))))),
        ("t = 8 over F_5 is proven by (a)", Box::new(|| Ok(verdict(5, 8, &ccfg).group_attained == Some(1)))),
        ("t = 82 over F_5 is unresolved at group 3", Box::new(|| {
            let v = verdict(5, 82, &ccfg);
            Ok(!group_proves(&v, 3, false))
        })),
        ("x^4 planar over F_3 and F_27, not F_9", Box::new(|| {
            Ok(oracle::is_planar(3, 4, 1, &ocfg)?
                && !oracle::is_planar(3, 4, 2, &ocfg)?
                && oracle::is_planar(3, 4, 3, &ocfg)?)
        })),
        ("x^14 not planar over F_27", Box::new(|| Ok(!oracle::is_planar(3, 14, 3, &ocfg)?))),
        ("census of t = 14 over F_3 matches brute force", Box::new(|| {
            let s = sing::omega_census(3, 14, &scfg)?;
            Ok(s.n_t == Some(oracle::brute_pairs(3, 14, &ocfg)?))
        })),
    ];
    let mut failed = 0;
    for (name, f) in &checks {
        let ok = match f() {
            Ok(b) => b,
            Err(e) => {
                println!("error {name}: {e:#}");
                false
            }
        };
        println!("{} {name}", if ok { "ok  " } else { "FAIL" });
        failed += usize::from(!ok);
    }
    if failed > 0 {
        bail!("{failed} selftest checks failed");
    }
    Ok(())
}
