//! Command-line front end. `run` returns the process exit code: 0 for a clean
//! run, 1 when `check` reports warnings, 2 on any operational error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::checker::{check_program, CheckContext, Thresholds, Warning};
use crate::config::Config;
use crate::corpus::{load_corpus, scan_targets};
use crate::error::{Error, Result};
use crate::filters::{Filter, FilterConfig};
use crate::frontend::{read_records, write_records, ProjectRecord};
use crate::naming::{build_frequency_table, FrequencyTable, Splitter, StopList};
use crate::sarif::{emit_sarif, ToolMeta};
use crate::similarity::SynonymTable;
use crate::statsdb::{build_db, morphology_report, SizeHistogram, StatsDb};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_WARNINGS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "swapcheck", version, about = "Finds call sites whose arguments look swapped")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

// Parsed once per process, so the size gap between variants does not matter.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the statistics database and frequency table from a corpus.
    BuildDb(BuildDbArgs),
    /// Check sources and write a SARIF report.
    Check(CheckArgs),
    /// Print morpheme-set size histograms for a corpus.
    CorpusStats(CorpusStatsArgs),
}

#[derive(Debug, Args)]
pub struct CorpusInput {
    /// Corpus root; each first-level subdirectory is one project.
    #[arg(required_unless_present = "records", conflicts_with = "records")]
    pub corpus_root: Option<PathBuf>,
    /// Read call and declaration records instead of scanning sources.
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Worker threads; 0 picks the number of CPUs.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Stop-morpheme list replacing the built-in one.
    #[arg(long)]
    pub stoplist: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildDbArgs {
    #[command(flatten)]
    pub input: CorpusInput,
    /// Database output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Frequency table output path [default: --out with extension `.freq`].
    #[arg(long)]
    pub freq_out: Option<PathBuf>,
    /// Also write the scanned call and declaration records here.
    #[arg(long)]
    pub records_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorpusStatsArgs {
    #[command(flatten)]
    pub input: CorpusInput,
    /// Frequency table to split with [default: built from the corpus].
    #[arg(long)]
    pub freq_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckerName {
    Cover,
    Statistical,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Source files or directories, checked together as one program.
    #[arg(required_unless_present = "records", conflicts_with = "records")]
    pub targets: Vec<PathBuf>,
    /// Read call and declaration records instead of scanning sources.
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Statistics database; without it only the cover checker runs.
    #[arg(long)]
    pub db: Option<PathBuf>,
    /// Frequency table [default: the database path with extension `.freq`
    /// if present, else built from the checked sources].
    #[arg(long)]
    pub freq_table: Option<PathBuf>,
    /// SARIF output path [default: standard output].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 picks the number of CPUs.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// TOML settings file; command-line flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Cover of the written arrangement must fall below this [default: 0.5]
    #[arg(long)]
    pub alpha1: Option<f64>,
    /// Cover of the swapped arrangement must exceed this [default: 0.75]
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Vetting ratio for cover candidates [default: 1]
    #[arg(long)]
    pub beta: Option<f64>,
    /// Ratio the statistical checker requires [default: 5]
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Similarity that counts as a match in the statistical checker [default: 0.75]
    #[arg(long)]
    pub sim_threshold: Option<f64>,
    /// File of `token,token` lines treated as synonyms.
    #[arg(long)]
    pub synonyms: Option<PathBuf>,
    /// Stop-morpheme list replacing the built-in one.
    #[arg(long)]
    pub stoplist: Option<PathBuf>,
    /// Turn off a false-positive filter (repeatable).
    #[arg(long, value_name = "NAME")]
    pub disable_filter: Vec<String>,
    /// Comma-separated words that mark an intentional swap.
    #[arg(long, value_delimiter = ',', value_name = "CSV")]
    pub whitelist_words: Option<Vec<String>>,
    /// Largest position gap checked while swap-distance is on [default: 2]
    #[arg(long)]
    pub max_swap_distance: Option<usize>,
    /// Calls in one caller flagged at the same positions that mark a swap as deliberate [default: 3]
    #[arg(long)]
    pub not_rare_count: Option<usize>,
    /// Turn off a checker (repeatable).
    #[arg(long, value_enum)]
    pub disable_checker: Vec<CheckerName>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_CLEAN };
        }
    };
    let result = match cli.command {
        Command::BuildDb(a) => cmd_build_db(&a),
        Command::Check(a) => cmd_check(&a),
        Command::CorpusStats(a) => cmd_corpus_stats(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("swapcheck: error: {e}");
            EXIT_ERROR
        }
    }
}

fn configure_threads(jobs: usize) {
    if jobs > 0 {
        // Fails only if a pool already exists, which is fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
}

fn load_stoplist(path: Option<&Path>) -> Result<StopList> {
    path.map_or_else(|| Ok(StopList::default()), StopList::load)
}

fn load_input(input: &CorpusInput) -> Result<Vec<ProjectRecord>> {
    match (&input.records, &input.corpus_root) {
        (Some(records), _) => read_records(records),
        (None, Some(root)) => load_corpus(root, input.jobs),
        (None, None) => Err(Error::Config("a corpus root or --records is required".into())),
    }
}

fn build_timestamp() -> String {
    let time = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(chrono::Utc::now);
    time.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

pub fn cmd_build_db(args: &BuildDbArgs) -> Result<i32> {
    configure_threads(args.input.jobs);
    let stop = load_stoplist(args.input.stoplist.as_deref())?;
    let projects = load_input(&args.input)?;
    let freq = build_frequency_table(&projects);
    let mut db = build_db(&projects, &Splitter::new(&freq, &stop));
    db.meta.build_timestamp = build_timestamp();

    let freq_out = args
        .freq_out
        .clone()
        .unwrap_or_else(|| args.out.with_extension("freq"));
    db.save(&args.out)?;
    freq.save(&freq_out)?;
    if let Some(path) = &args.records_out {
        write_records(path, &projects)?;
    }

    let calls: usize = projects.iter().map(|p| p.call_sites.len()).sum();
    let decls: usize = projects.iter().map(|p| p.declarations.len()).sum();
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "projects\t{}", projects.len());
    let _ = writeln!(out, "calls\t{calls}");
    let _ = writeln!(out, "declarations\t{decls}");
    let _ = writeln!(out, "db-entries\t{}", db.len());
    let _ = writeln!(out, "freq-tokens\t{}", freq.len());
    Ok(EXIT_CLEAN)
}

fn histogram_row(name: &str, h: &SizeHistogram) -> String {
    let pct = |n: u64| {
        if h.total() == 0 {
            0.0
        } else {
            100.0 * n as f64 / h.total() as f64
        }
    };
    format!(
        "{name:<11}{:>10} ({:>5.1}%){:>10} ({:>5.1}%){:>10} ({:>5.1}%){:>10}",
        h.one,
        pct(h.one),
        h.two,
        pct(h.two),
        h.three_plus,
        pct(h.three_plus),
        h.total()
    )
}

pub fn cmd_corpus_stats(args: &CorpusStatsArgs) -> Result<i32> {
    configure_threads(args.input.jobs);
    let stop = load_stoplist(args.input.stoplist.as_deref())?;
    let projects = load_input(&args.input)?;
    let freq = match &args.freq_table {
        Some(p) => FrequencyTable::load(p)?,
        None => build_frequency_table(&projects),
    };
    let report = morphology_report(&projects, &Splitter::new(&freq, &stop));

    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "{:<11}{:>19}{:>19}{:>19}{:>10}",
        "names", "size 1", "size 2", "size 3+", "total"
    );
    let _ = writeln!(out, "{}", histogram_row("arguments", &report.arguments));
    let _ = writeln!(out, "{}", histogram_row("parameters", &report.parameters));
    let _ = writeln!(out);
    for (name, h) in [("arguments", &report.arguments), ("parameters", &report.parameters)] {
        for (bucket, n) in [("1", h.one), ("2", h.two), ("3+", h.three_plus)] {
            let _ = writeln!(out, "morpheme-set-size\t{name}\t{bucket}\t{n}");
        }
    }
    Ok(EXIT_CLEAN)
}

/// Effective settings after merging defaults, config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub thresholds: Thresholds,
    pub filters: FilterConfig,
    pub cover_enabled: bool,
    pub statistical_enabled: bool,
    pub synonyms: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
}

pub fn resolve_settings(args: &CheckArgs) -> Result<Settings> {
    let cfg = match &args.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let mut thresholds = Thresholds::default();
    cfg.apply_thresholds(&mut thresholds);
    for (slot, v) in [
        (&mut thresholds.alpha1, args.alpha1),
        (&mut thresholds.alpha2, args.alpha2),
        (&mut thresholds.beta, args.beta),
        (&mut thresholds.gamma, args.gamma),
        (&mut thresholds.sim_threshold, args.sim_threshold),
    ] {
        if let Some(v) = v {
            *slot = v;
        }
    }
    thresholds.validate()?;

    let mut filters = FilterConfig::default();
    cfg.apply_filters(&mut filters)?;
    for name in &args.disable_filter {
        filters.disabled.insert(name.parse::<Filter>()?);
    }
    if let Some(words) = &args.whitelist_words {
        filters.whitelist_words = words
            .iter()
            .map(|w| w.trim().to_owned())
            .filter(|w| !w.is_empty())
            .collect();
    }
    if let Some(d) = args.max_swap_distance {
        filters.max_swap_distance = d;
    }
    if let Some(n) = args.not_rare_count {
        filters.not_rare_count = n;
    }
    filters.validate()?;

    let disabled = |c| args.disable_checker.contains(&c);
    Ok(Settings {
        thresholds,
        filters,
        cover_enabled: cfg.checkers.cover.unwrap_or(true) && !disabled(CheckerName::Cover),
        statistical_enabled: cfg.checkers.statistical.unwrap_or(true) && !disabled(CheckerName::Statistical),
        synonyms: args.synonyms.clone().or(cfg.synonyms),
        stoplist: args.stoplist.clone().or(cfg.stoplist),
    })
}

/// Settings echoed into the report so a run can be reproduced.
pub fn settings_properties(s: &Settings, have_db: bool) -> Map<String, Value> {
    let th = &s.thresholds;
    let f = &s.filters;
    let enabled: Vec<&str> = Filter::ALL
        .into_iter()
        .filter(|x| f.is_enabled(*x))
        .map(Filter::name)
        .collect();
    let value = json!({
        "thresholds": {
            "alpha1": th.alpha1,
            "alpha2": th.alpha2,
            "beta": th.beta,
            "gamma": th.gamma,
            "simThreshold": th.sim_threshold,
        },
        "checkers": {
            "cover": s.cover_enabled,
            "statistical": s.statistical_enabled,
            "statisticsDatabase": have_db,
        },
        "filters": {
            "enabled": enabled,
            "whitelistWords": f.whitelist_words,
            "maxSwapDistance": f.max_swap_distance,
            "notRareCount": f.not_rare_count,
        },
    });
    match value {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

pub fn cmd_check(args: &CheckArgs) -> Result<i32> {
    configure_threads(args.jobs);
    let settings = resolve_settings(args)?;
    let stop = load_stoplist(settings.stoplist.as_deref())?;
    let synonyms = settings.synonyms.as_ref().map(SynonymTable::load).transpose()?;
    let db = args.db.as_ref().map(StatsDb::load).transpose()?;
    if db.is_none() {
        eprintln!("swapcheck: note: no statistics database given; vetting and the statistical checker are skipped");
    }

    let projects = match &args.records {
        Some(p) => read_records(p)?,
        None => {
            let scanned = scan_targets(&args.targets, args.jobs)?;
            vec![ProjectRecord {
                project_id: String::new(),
                call_sites: scanned.calls,
                declarations: scanned.declarations,
            }]
        }
    };

    let freq = match (&args.freq_table, &args.db) {
        (Some(p), _) => FrequencyTable::load(p)?,
        (None, Some(db_path)) if db_path.with_extension("freq").is_file() => {
            FrequencyTable::load(db_path.with_extension("freq"))?
        }
        _ => build_frequency_table(&projects),
    };

    let mut ctx = CheckContext::new(Splitter::new(&freq, &stop));
    ctx.thresholds = settings.thresholds;
    ctx.synonyms = synonyms.as_ref();
    ctx.db = db.as_ref();
    ctx.cover_enabled = settings.cover_enabled;
    ctx.statistical_enabled = settings.statistical_enabled;

    let parallel = args.jobs != 1;
    let mut warnings: Vec<Warning> = Vec::new();
    for p in &projects {
        let report = check_program(&p.call_sites, &p.declarations, &ctx, &settings.filters, parallel);
        for s in &report.suppressed {
            log::info!(
                "{}:{}: suppressed by {}: {}",
                s.warning.location.file_path,
                s.warning.location.line,
                s.filter,
                s.warning.message
            );
        }
        warnings.extend(report.warnings);
    }
    warnings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));

    let meta = ToolMeta {
        properties: settings_properties(&settings, db.is_some()),
        ..ToolMeta::default()
    };
    let sarif = emit_sarif(&warnings, &meta);
    match &args.out {
        Some(path) => std::fs::write(path, &sarif).map_err(|e| Error::io(path, e))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(sarif.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))?;
        }
    }
    Ok(if warnings.is_empty() { EXIT_CLEAN } else { EXIT_WARNINGS })
}
