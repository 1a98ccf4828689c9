//! Command-line definition and dispatch.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hookext::resolution::differential_matrix;
use hookext::HookShape;
use serde::Serialize;

use crate::cache::{self, ResultCache};
use crate::checks::{self, CheckKind, VerifyReport};
use crate::config::{self, pick, FileConfig};
use crate::dump::MatrixDump;
use crate::record::{asciify, compute_record, Family, RecordRow, ResultRecord, CSV_HEADER};
use crate::sweep::SweepSpec;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hookext", version, about = "Integral Ext groups between hook Weyl modules")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: one per logical CPU).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Neither read nor write the results cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Plain ASCII in group and module names.
    #[arg(long, global = true)]
    pub ascii: bool,
    /// Cache file (default: $XDG_CACHE_HOME/hookext/results.json).
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one group Ext^i(Δ(a,1^b), M_k).
    Ext(CellArgs),
    /// Compare computed groups with the closed forms and run the structural checks.
    Verify(VerifyArgs),
    /// Print the differential e^(i) into M_k with its block structure.
    DumpMatrix(CellArgs),
    /// One row per cell of the sweep.
    Table(RangeArgs),
    /// Manage the results cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// Delete the cache file.
    Clear,
}

#[derive(Debug, Args)]
pub struct CellArgs {
    #[arg(long)]
    pub a: usize,
    #[arg(long)]
    pub b: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub i: usize,
    /// D_{a+k} ⊗ ∧^{b-k} or Δ(a+k, 1^{b-k}).
    #[arg(long, value_enum, default_value_t = Family::Hook)]
    pub target: Family,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long)]
    pub max_a: Option<usize>,
    #[arg(long)]
    pub max_b: Option<usize>,
    /// Bound on a + b (default 9).
    #[arg(long)]
    pub max_sum: Option<usize>,
    /// Restrict to one value of a.
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub i: Option<usize>,
    /// Restrict the computed groups to one target family.
    #[arg(long, value_enum)]
    pub target: Option<Family>,
    /// Primes for the modular checks.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    /// Run only these checks (repeatable).
    #[arg(long = "theorem", value_enum)]
    pub theorems: Vec<CheckKind>,
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Mismatch,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Mismatch => 1,
        }
    }
}

/// Settings after merging flags, the config file and defaults.
struct Settings {
    format: Format,
    jobs: usize,
    ascii: bool,
    cache_path: Option<PathBuf>,
}

impl Settings {
    fn new(cli: &Cli, file: &FileConfig) -> Self {
        let no_cache = cli.no_cache || file.no_cache.unwrap_or(false);
        let cache_path = (!no_cache).then(|| pick(cli.cache.clone(), file.cache_path.clone(), cache::default_path()));
        Settings {
            format: cli.format,
            jobs: pick(cli.jobs, file.jobs, 0),
            ascii: cli.ascii || file.ascii.unwrap_or(false),
            cache_path,
        }
    }

    fn cache(&self) -> ResultCache {
        match &self.cache_path {
            Some(p) => ResultCache::load(p),
            None => ResultCache::disabled(),
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        Ok(rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build()?)
    }
}

fn save(cache: &mut ResultCache) {
    if let Err(e) = cache.save() {
        eprintln!("warning: could not write the results cache: {e}");
    }
}

fn sweep_spec(r: &RangeArgs, file: &FileConfig, jobs: usize) -> SweepSpec {
    SweepSpec {
        max_a: pick(r.max_a, file.max_a, config::DEFAULT_MAX_A),
        max_b: pick(r.max_b, file.max_b, config::DEFAULT_MAX_B),
        max_sum: pick(r.max_sum, file.max_sum, config::DEFAULT_MAX_SUM),
        a: r.a,
        b: r.b,
        k: r.k,
        i: r.i,
        family: r.target,
        primes: pick(r.primes.clone(), file.primes.clone(), config::DEFAULT_PRIMES.to_vec()),
        jobs,
    }
}

fn validate_cell(c: &CellArgs) -> Result<()> {
    HookShape::new(c.a, c.b)?;
    if c.k > c.b {
        bail!("k = {} exceeds b = {}", c.k, c.b);
    }
    if c.i == 0 || c.i > c.b {
        bail!("i = {} is outside 1..={}", c.i, c.b);
    }
    Ok(())
}

/// Runs a parsed command line, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    let file = FileConfig::from_env()?;
    let settings = Settings::new(cli, &file);
    match &cli.command {
        Command::Ext(c) => cmd_ext(c, &settings, out),
        Command::Verify(v) => cmd_verify(v, &file, &settings, out),
        Command::DumpMatrix(c) => cmd_dump(c, &settings, out),
        Command::Table(r) => cmd_table(r, &file, &settings, out),
        Command::Cache { action: CacheAction::Clear } => {
            let path = pick(cli.cache.clone(), file.cache_path.clone(), cache::default_path());
            if cache::clear(&path).with_context(|| format!("removing {}", path.display()))? {
                writeln!(out, "removed {}", path.display())?;
            } else {
                writeln!(out, "no cache at {}", path.display())?;
            }
            Ok(Status::Ok)
        }
    }
}

#[derive(Serialize)]
struct ExtOutput<'a> {
    #[serde(flatten)]
    row: &'a RecordRow,
    wall_ms: u64,
}

fn write_csv(rows: &[RecordRow], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

fn ext_line(r: &ResultRecord, ascii: bool) -> Result<String> {
    let source = format!("Δ{}", HookShape::new(r.a, r.b)?);
    let target = r.target.target(r.a, r.b, r.k)?;
    let mut line = format!("Ext^{}({source}, {target}) = {}", r.i, r.group(ascii));
    match r.expected_group(ascii) {
        Some(e) if r.matches() == Some(true) => line += &format!("  (expected {e})"),
        Some(e) => line += &format!("  (MISMATCH: expected {e})"),
        None => {}
    }
    Ok(asciify(&line, ascii))
}

fn cmd_ext(c: &CellArgs, s: &Settings, out: &mut dyn Write) -> Result<Status> {
    validate_cell(c)?;
    let mut cache = s.cache();
    let key = (c.a, c.b, c.k, c.i, c.target);
    let record = match cache.get(key) {
        Some(r) => r.clone(),
        None => {
            let r = compute_record(c.a, c.b, c.k, c.i, c.target)?;
            cache.insert(r.clone());
            save(&mut cache);
            r
        }
    };
    let row = record.row(s.ascii);
    match s.format {
        Format::Text => writeln!(out, "{}", ext_line(&record, s.ascii)?)?,
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&ExtOutput { row: &row, wall_ms: record.wall_ms })?)?
        }
        Format::Csv => write_csv(&[row], out)?,
    }
    Ok(Status::Ok)
}

fn cmd_table(r: &RangeArgs, file: &FileConfig, s: &Settings, out: &mut dyn Write) -> Result<Status> {
    let spec = sweep_spec(r, file, s.jobs);
    spec.validate()?;
    let mut cache = s.cache();
    let records = s.pool()?.install(|| checks::records(&spec.cells(), &mut cache))?;
    save(&mut cache);
    let rows: Vec<RecordRow> = records.iter().map(|r| r.row(s.ascii)).collect();
    match s.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
        Format::Csv => write_csv(&rows, out)?,
        Format::Text => {
            let cells: Vec<[String; 8]> = rows.iter().map(|r| r.csv_fields()).collect();
            let mut widths: Vec<usize> = CSV_HEADER.iter().map(|h| h.chars().count()).collect();
            for c in &cells {
                for (w, f) in widths.iter_mut().zip(c) {
                    *w = (*w).max(f.chars().count());
                }
            }
            let line = |fields: Vec<&str>| -> String {
                let padded: Vec<String> = fields
                    .iter()
                    .zip(&widths)
                    .map(|(f, w)| format!("{f}{}", " ".repeat(w - f.chars().count())))
                    .collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(CSV_HEADER.to_vec()))?;
            for c in &cells {
                writeln!(out, "{}", line(c.iter().map(String::as_str).collect()))?;
            }
        }
    }
    Ok(Status::Ok)
}

fn cmd_verify(v: &VerifyArgs, file: &FileConfig, s: &Settings, out: &mut dyn Write) -> Result<Status> {
    let spec = sweep_spec(&v.range, file, s.jobs);
    spec.validate()?;
    let kinds = if v.theorems.is_empty() { CheckKind::all() } else { v.theorems.clone() };
    let mut cache = s.cache();
    let report = s.pool()?.install(|| checks::verify(&spec, &kinds, &mut cache))?;
    save(&mut cache);
    if report.checks == 0 {
        bail!("no checks apply to the selected range");
    }
    match s.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["check", "a", "b", "k", "i", "p", "passed", "detail"])?;
            let opt = |x: Option<String>| x.unwrap_or_default();
            for o in &report.outcomes {
                w.write_record([
                    o.kind.name(),
                    o.a.to_string(),
                    o.b.to_string(),
                    opt(o.k.map(|x| x.to_string())),
                    opt(o.i.map(|x| x.to_string())),
                    opt(o.p.map(|x| x.to_string())),
                    o.passed.to_string(),
                    o.detail.clone(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => write_verify_text(&report, s.ascii, out)?,
    }
    Ok(if report.all_passed() { Status::Ok } else { Status::Mismatch })
}

fn write_verify_text(report: &VerifyReport, ascii: bool, out: &mut dyn Write) -> Result<()> {
    let width = report.by_kind.keys().map(String::len).max().unwrap_or(0);
    for (name, k) in &report.by_kind {
        writeln!(out, "{name:<width$}  {:>5} checks  {:>3} failed", k.checks, k.failed)?;
    }
    match &report.first_failure {
        None => writeln!(out, "all {} checks passed", report.checks)?,
        Some(f) => {
            writeln!(out, "{} of {} checks failed", report.failed, report.checks)?;
            writeln!(out, "first counterexample: {} at {}: {}", f.kind.name(), f.location(), asciify(&f.detail, ascii))?;
            writeln!(out, "{}", serde_json::to_string_pretty(f)?)?;
        }
    }
    Ok(())
}

fn cmd_dump(c: &CellArgs, s: &Settings, out: &mut dyn Write) -> Result<Status> {
    validate_cell(c)?;
    let d = differential_matrix(c.a, c.b, c.i, &c.target.target(c.a, c.b, c.k)?)?;
    let dump = MatrixDump::new(&d, c.k, c.target);
    match s.format {
        Format::Text => write!(out, "{}", dump.to_text(s.ascii)?)?,
        Format::Json => writeln!(out, "{}", dump.to_json())?,
        Format::Csv => write!(out, "{}", dump.to_csv()?)?,
    }
    Ok(Status::Ok)
}
