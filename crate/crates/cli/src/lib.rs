//! Command-line front end for `linform`.
//!
//! Every command prints a human summary by default and the library's JSON
//! with `--json`. Exit codes: 0 ok, 1 a verification suite failed, 2 bad
//! input, 3 a node budget or size limit was exceeded.

pub mod cache;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linform::engine::{compute_mf, default_diameter};
use linform::explorer::{
    scan_ap_minimizer_converse, scan_completeness_converse, spectrum, ScanBounds,
};
use linform::theory::{verify_suite, Bounds, Suite};
use linform::{
    compute_nf, enumerate_minimizers, image, ExtremalResult, KSet, LinearForm, NfConfig,
};
use serde::Serialize;

use crate::cache::{Cache, CacheRecord};

pub const EXIT_SUITE_FAILED: u8 = 1;
pub const EXIT_BAD_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "linform",
    version,
    about = "Extremal image sizes of linear forms on k-sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certified bracket for N_f(k), the least image size over k-sets
    Nf(NfArgs),
    /// M_f(k), the largest image size over k-sets, with a witness
    Mf(FormArgs),
    /// All minimizing k-sets within the diameter (needs an exact N_f(k))
    Minimizers(MinimizersArgs),
    /// Image sizes reached by canonical k-sets within a diameter
    Spectrum(SpectrumArgs),
    /// Check the engine against proven formulas
    Verify(VerifyArgs),
    /// Bounded search for counterexamples to a converse question
    Scan(ScanArgs),
    /// Print every valid record in a cache file
    CacheDump(CacheDumpArgs),
}

#[derive(Args, Debug)]
pub struct FormArgs {
    /// Coefficients, e.g. 1,2,3
    #[arg(long)]
    pub coeffs: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct NfArgs {
    #[command(flatten)]
    pub form: FormArgs,
    /// Search diameter [default: U (k - 1)]
    #[arg(long)]
    pub diameter: Option<i64>,
    /// Largest ladder rung N_f(l) bootstrapped for the certificate
    #[arg(long, default_value_t = 4)]
    pub ladder: usize,
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    /// JSON-lines result cache
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MinimizersArgs {
    #[command(flatten)]
    pub form: FormArgs,
    /// Search diameter [default: U (k - 1)]
    #[arg(long)]
    pub diameter: Option<i64>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub form: FormArgs,
    /// Search diameter [default: U (k - 1)]
    #[arg(long)]
    pub diameter: Option<i64>,
    #[arg(long)]
    pub budget_nodes: Option<u64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite to run; all suites when omitted
    #[arg(long)]
    pub suite: Option<Suite>,
    #[arg(long, default_value_t = 3)]
    pub max_m: usize,
    #[arg(long, default_value_t = 4)]
    pub max_coeff: u64,
    #[arg(long, default_value_t = 5)]
    pub max_k: usize,
    #[arg(long)]
    pub diameter: Option<i64>,
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Conjecture {
    /// Is every form with N_f(k) = U k - U + 1 complete?
    Completeness,
    /// Is every form whose minimizers are all progressions complete?
    ApMinimizer,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub conjecture: Conjecture,
    /// Scan exactly this many variables
    #[arg(long, conflicts_with = "max_m")]
    pub m: Option<usize>,
    /// Scan 1..=max-m variables
    #[arg(long)]
    pub max_m: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub max_coeff: u64,
    /// Scan exactly this k
    #[arg(long, conflicts_with = "max_k")]
    pub k: Option<usize>,
    /// Scan 1..=max-k
    #[arg(long)]
    pub max_k: Option<usize>,
    #[arg(long)]
    pub diameter: Option<i64>,
    #[arg(long)]
    pub budget_nodes: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CacheDumpArgs {
    #[arg(long)]
    pub cache: PathBuf,
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn bad_input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_BAD_INPUT,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<linform::Error> for Failure {
    fn from(e: linform::Error) -> Self {
        let code = match e {
            linform::Error::NotCertifiedExact { .. } => EXIT_BUDGET,
            ref e if e.is_capacity() => EXIT_BUDGET,
            _ => EXIT_BAD_INPUT,
        };
        Failure {
            code,
            message: format!("{e:?}: {e}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::bad_input(format!("{e:#}"))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::bad_input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn parse_form(s: &str) -> Result<LinearForm, Failure> {
    Ok(s.parse::<LinearForm>()?)
}

fn json_line(out: &mut impl Write, value: &impl Serialize) -> Outcome {
    let text = serde_json::to_string(value).map_err(|e| Failure::bad_input(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn set_list(sets: &[KSet]) -> String {
    sets.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn note_normalization(out: &mut impl Write, raw: &str, f: &LinearForm) -> Outcome {
    if f.raw_gcd() != 1 || raw.replace(' ', "") != f.to_string() {
        writeln!(
            out,
            "form normalized to {f} (common factor {})",
            f.raw_gcd()
        )?;
    }
    Ok(())
}

/// Runs one command, writing its output to `out`.
pub fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    match cli.command {
        Command::Nf(a) => cmd_nf(a, out),
        Command::Mf(a) => cmd_mf(a, out),
        Command::Minimizers(a) => cmd_minimizers(a, out),
        Command::Spectrum(a) => cmd_spectrum(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Scan(a) => cmd_scan(a, out),
        Command::CacheDump(a) => cmd_cache_dump(a, out),
    }
}

fn nf_result(a: &NfArgs, f: &LinearForm) -> Result<ExtremalResult, Failure> {
    if a.form.k == 0 {
        return Err(linform::Error::ZeroK.into());
    }
    let diameter = a.diameter.unwrap_or_else(|| default_diameter(f, a.form.k));
    let cache = a.cache.as_ref().map(Cache::new);
    if let Some(c) = &cache {
        if let Some(hit) = c.lookup(f, a.form.k, diameter, a.ladder)? {
            eprintln!("cache hit in {}", c.path().display());
            return Ok(hit.to_result());
        }
    }
    let config = NfConfig {
        diameter: Some(diameter),
        ladder_max_ell: a.ladder,
        budget_nodes: a.budget_nodes,
        ..NfConfig::default()
    };
    let r = compute_nf(f, a.form.k, &config)?;
    if let Some(c) = &cache {
        c.append(&CacheRecord::new(&r, a.ladder))?;
    }
    Ok(r)
}

fn cmd_nf(a: NfArgs, out: &mut impl Write) -> Outcome {
    let f = parse_form(&a.form.coeffs)?;
    let r = nf_result(&a, &f)?;
    if a.form.json {
        return json_line(out, &r);
    }
    note_normalization(out, &a.form.coeffs, &f)?;
    if r.exact {
        writeln!(out, "N_f({}) = {} (exact)", r.k, r.best)?;
    } else {
        writeln!(
            out,
            "N_f({}) in [{}, {}] (not certified; best found within diameter {})",
            r.k, r.lower, r.best, r.diameter
        )?;
    }
    let c = &r.certificate;
    let mut cert = format!(
        "certificate: {} gives {}",
        serde_json::to_value(c.kind).unwrap().as_str().unwrap(),
        r.lower
    );
    if c.ell > 0 {
        cert.push_str(&format!(" (l = {}, N_f(l) = {})", c.ell, c.lambda));
    }
    writeln!(out, "{cert}")?;
    let more = if r.witness_overflow { " ..." } else { "" };
    writeln!(out, "witnesses: {}{more}", set_list(&r.witnesses))?;
    writeln!(out, "diameter: {}, nodes: {}", r.diameter, r.nodes)?;
    Ok(())
}

fn cmd_mf(a: FormArgs, out: &mut impl Write) -> Outcome {
    let f = parse_form(&a.coeffs)?;
    if a.k == 0 {
        return Err(linform::Error::ZeroK.into());
    }
    let r = compute_mf(&f, a.k)?;
    if a.json {
        return json_line(out, &r);
    }
    note_normalization(out, &a.coeffs, &f)?;
    writeln!(out, "M_f({}) = {}", r.k, r.value)?;
    let w: Vec<String> = r.witness.iter().map(|x| x.to_string()).collect();
    writeln!(out, "witness: {{{}}}", w.join(","))?;
    Ok(())
}

#[derive(Serialize)]
struct MinimizersReport<'a> {
    coeffs: &'a LinearForm,
    k: usize,
    diameter: i64,
    value: u64,
    minimizers: Vec<KSet>,
}

fn cmd_minimizers(a: MinimizersArgs, out: &mut impl Write) -> Outcome {
    let f = parse_form(&a.form.coeffs)?;
    if a.form.k == 0 {
        return Err(linform::Error::ZeroK.into());
    }
    let diameter = a.diameter.unwrap_or_else(|| default_diameter(&f, a.form.k));
    let minimizers = enumerate_minimizers(&f, a.form.k, diameter)?;
    let value = image(&f, minimizers[0].elems())?.size() as u64;
    if a.form.json {
        return json_line(
            out,
            &MinimizersReport {
                coeffs: &f,
                k: a.form.k,
                diameter,
                value,
                minimizers,
            },
        );
    }
    note_normalization(out, &a.form.coeffs, &f)?;
    writeln!(
        out,
        "N_f({}) = {}; minimizing sets within diameter {} ({}):",
        a.form.k,
        value,
        diameter,
        minimizers.len()
    )?;
    for s in &minimizers {
        writeln!(out, "{s}")?;
    }
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs, out: &mut impl Write) -> Outcome {
    let f = parse_form(&a.form.coeffs)?;
    if a.form.k == 0 {
        return Err(linform::Error::ZeroK.into());
    }
    let diameter = a.diameter.unwrap_or_else(|| default_diameter(&f, a.form.k));
    let s = spectrum(&f, a.form.k, diameter, a.budget_nodes)?;
    if a.form.json {
        return json_line(out, &s);
    }
    note_normalization(out, &a.form.coeffs, &f)?;
    let values: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
    writeln!(
        out,
        "image sizes of {}-sets within diameter {}: [{}]{}",
        s.k,
        s.diameter,
        values.join(", "),
        if s.is_interval { " (an interval)" } else { "" }
    )?;
    for (v, n) in &s.census {
        writeln!(out, "{v:>8}  {n}")?;
    }
    if !s.mf_reached {
        writeln!(out, "M_f({}) is not reached within this diameter", s.k)?;
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs, out: &mut impl Write) -> Outcome {
    let bounds = Bounds {
        diameter: a.diameter,
        budget_nodes: a.budget_nodes,
        ..Bounds::new(a.max_m, a.max_coeff, a.max_k)
    };
    let suites = match a.suite {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let mut failed = Vec::new();
    for suite in suites {
        let report = verify_suite(suite, &bounds)?;
        if a.json {
            json_line(out, &report)?;
        } else {
            writeln!(out, "{}", report.summary())?;
            for m in report.mismatches.iter().take(10) {
                writeln!(
                    out,
                    "  coeffs {:?} k={} {}: expected {}, got {}",
                    m.coeffs, m.k, m.check, m.expected, m.got
                )?;
            }
        }
        if !report.passed {
            failed.push(suite.name());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_SUITE_FAILED,
            message: format!("suites failed: {}", failed.join(", ")),
        })
    }
}

fn cmd_scan(a: ScanArgs, out: &mut impl Write) -> Outcome {
    let ms = match (a.m, a.max_m) {
        (Some(m), _) => m..=m,
        (None, Some(m)) => 1..=m,
        (None, None) => return Err(Failure::bad_input("scan needs --m or --max-m")),
    };
    let ks = match (a.k, a.max_k) {
        (Some(k), _) => k..=k,
        (None, Some(k)) => 1..=k,
        (None, None) => return Err(Failure::bad_input("scan needs --k or --max-k")),
    };
    if ks.contains(&0) {
        return Err(linform::Error::ZeroK.into());
    }
    for k in ks {
        for m in ms.clone() {
            let bounds = ScanBounds {
                diameter: a.diameter,
                budget_nodes: a.budget_nodes,
                ..ScanBounds::new(m, a.max_coeff, k)
            };
            let findings = match a.conjecture {
                Conjecture::Completeness => scan_completeness_converse(&bounds)?,
                Conjecture::ApMinimizer => scan_ap_minimizer_converse(&bounds)?,
            };
            for x in &findings {
                json_line(out, x)?;
            }
        }
    }
    Ok(())
}

fn cmd_cache_dump(a: CacheDumpArgs, out: &mut impl Write) -> Outcome {
    if !a.cache.exists() {
        return Err(Failure::bad_input(format!(
            "{} does not exist",
            a.cache.display()
        )));
    }
    for r in Cache::new(&a.cache).records()? {
        json_line(out, &r)?;
    }
    Ok(())
}

/// Worker count from `LINFORM_THREADS`, if set.
pub fn thread_limit() -> Result<Option<usize>, Failure> {
    match std::env::var("LINFORM_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::bad_input(format!(
                "LINFORM_THREADS must be a positive integer, got {v:?}"
            ))),
        },
    }
}
