//! The `hcf` command-line tool.
//!
//! Exit codes: 0 success, 1 i/o failure, 2 invalid input, 3 search limit
//! reached, 4 table verification mismatch.

pub mod output;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hcf_core::analytic::{self, BoundReport, LValueReport};
use hcf_core::cache::{self, ClassNumberCache, CACHE_ENV};
use hcf_core::fixture;
use hcf_core::search::{self, DiscSource, SearchConfig, SearchError};
use hcf_core::{FundamentalDiscriminant, SplitPrimeRecord};

use crate::output::{OutputFormat, RecordFormat};

/// Absolute tolerance when comparing ratios with the four-decimal table.
pub const RATIO_TOLERANCE: f64 = 5e-5;

#[derive(Debug, Parser)]
#[command(
    name = "hcf",
    version,
    about = "Least primes splitting completely in Hilbert class fields of imaginary quadratic fields"
)]
pub struct Cli {
    /// Worker threads for scans (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Class-number cache file (flat "d,h" CSV).
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Fixture,
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanMode {
    /// Running minima of x_d = L(1, chi_d) log log d.
    MinX,
    /// Largest discriminant for each class number.
    MaxDisc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the class number h(-d).
    Classnum { d: u64 },
    /// Least prime splitting completely in the Hilbert class field.
    SplitPrime {
        d: u64,
        /// Also check that no prime below d/4 splits completely.
        #[arg(long)]
        paranoid: bool,
        #[arg(long, value_enum, default_value_t = RecordFormat::Text)]
        format: RecordFormat,
    },
    /// Recompute the table of least split primes.
    Table {
        #[arg(long, default_value_t = 99)]
        hmax: u64,
        #[arg(long, value_enum, default_value_t = Source::Fixture)]
        source: Source,
        /// Discriminant bound for `--source scan`.
        #[arg(long, default_value_t = 20_000)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare against the embedded table; exit 4 on any mismatch.
        #[arg(long)]
        verify: bool,
    },
    /// Scan discriminants for extreme values.
    ScanExtreme {
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long, value_enum, default_value_t = ScanMode::MinX)]
        kind: ScanMode,
        /// Largest class number reported by `--kind max-disc`.
        #[arg(long, default_value_t = 100)]
        hmax: u64,
    },
    /// log|D|, the split-prime lower bound and optionally the ratio p / bound.
    Bound {
        #[arg(long)]
        d: u64,
        /// Class number; computed when omitted.
        #[arg(long)]
        h: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
    },
    /// L(1, chi_d) from the class number formula and from the series.
    Lvalue {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = LValueReport::DEFAULT_TERMS)]
        terms: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    SearchLimit(String),
    Mismatch(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::SearchLimit(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m)
            | CliError::SearchLimit(m)
            | CliError::Mismatch(m)
            | CliError::Io(m) => m,
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::SearchLimit { .. } => CliError::SearchLimit(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Invalid(e.to_string())
}

fn discriminant(d: u64) -> Result<FundamentalDiscriminant, CliError> {
    FundamentalDiscriminant::new(d).map_err(invalid)
}

/// Runs a parsed command line and maps failures to exit codes.
pub fn run(cli: Cli) -> ExitCode {
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("warning: {e}");
    }
    let cache = match &cli.cache {
        Some(path) => match ClassNumberCache::load(path) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => None,
    };

    let result = execute(&cli.command, cache.as_ref());

    if let (Some(c), Some(path)) = (&cache, &cli.cache) {
        if let Err(e) = c.save(path) {
            eprintln!("warning: could not write cache: {e}");
        }
    }

    match result {
        Ok(stdout) => {
            let mut out = io::stdout().lock();
            if out
                .write_all(stdout.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Runs one command, returning what it prints on stdout.
pub fn execute(cmd: &Command, cache: Option<&ClassNumberCache>) -> Result<String, CliError> {
    match cmd {
        Command::Classnum { d } => {
            let d = discriminant(*d)?;
            Ok(format!("{}\n", cache::class_number(cache, d)))
        }
        Command::SplitPrime {
            d,
            paranoid,
            format,
        } => {
            let d = discriminant(*d)?;
            let cfg = SearchConfig {
                paranoid: *paranoid,
                ..SearchConfig::default()
            };
            let rec = search::smallest_split_prime_cached(d, &cfg, cache)?;
            Ok(output::format_record(&rec, *format))
        }
        Command::Table {
            hmax,
            source,
            bound,
            format,
            out,
            verify,
        } => {
            if *hmax == 0 {
                return Err(invalid("--hmax must be at least 1"));
            }
            let src = match source {
                Source::Fixture => DiscSource::Fixture,
                Source::Scan => DiscSource::Scan { bound: *bound },
            };
            let records = search::build_table(*hmax, src, &SearchConfig::default(), cache)?;
            let text = output::format_records(&records, *format);
            let stdout = match out {
                Some(path) => {
                    fs::write(path, &text)?;
                    String::new()
                }
                None => text,
            };
            if *verify {
                let diffs = verify_against_fixture(&records);
                if !diffs.is_empty() {
                    let mut msg = String::from("table verification failed:");
                    for line in diffs {
                        let _ = write!(msg, "\n  {line}");
                    }
                    // Keep the table on stdout so the mismatch can be inspected.
                    print!("{stdout}");
                    return Err(CliError::Mismatch(msg));
                }
                eprintln!("verified {} rows against the embedded table", records.len());
            }
            Ok(stdout)
        }
        Command::ScanExtreme {
            bound,
            format,
            kind,
            hmax,
        } => {
            let cfg = SearchConfig::default();
            let records = match kind {
                ScanMode::MinX => search::scan_min_x(*bound, &cfg, cache)?,
                ScanMode::MaxDisc => {
                    if *bound < 16 {
                        return Err(SearchError::BoundTooSmall(*bound).into());
                    }
                    search::scan_max_disc(*hmax, *bound, &cfg, cache)?
                }
            };
            Ok(output::format_scan(
                &records,
                analytic::chowla_threshold(),
                *format,
            ))
        }
        Command::Bound { d, h, p } => {
            let d = discriminant(*d)?;
            let h = h.unwrap_or_else(|| cache::class_number(cache, d));
            let report = BoundReport::compute(d, h, *p).map_err(invalid)?;
            let mut s = format!(
                "d={}\nh={}\nlogD={:.12}\nbound={:.12}\n",
                report.d, report.h, report.log_disc, report.bound
            );
            if let (Some(p), Some(r)) = (report.p, report.ratio) {
                let _ = write!(s, "p={p}\nratio={}\n", output::format_ratio(r));
            }
            Ok(s)
        }
        Command::Lvalue { d, terms } => {
            let d = discriminant(*d)?;
            if d.get() <= 4 {
                return Err(invalid(format!("lvalue needs d > 4, got {d}")));
            }
            let h = cache::class_number(cache, d);
            let r = LValueReport::compute(d, h, *terms).map_err(invalid)?;
            let mut s = format!(
                "d={}\nh={}\nl_exact={:.12}\nl_series={:.12}\n",
                r.d, r.h, r.l_exact, r.l_series
            );
            match r.x_d {
                Some(x) => {
                    let _ = writeln!(s, "x_d={x:.12}");
                }
                None => s.push_str("x_d=n/a\n"),
            }
            let _ = writeln!(s, "chowla_threshold={:.12}", analytic::chowla_threshold());
            Ok(s)
        }
    }
}

/// Row-by-row differences between computed records and the embedded table.
/// Integers must match exactly, ratios within [`RATIO_TOLERANCE`].
pub fn verify_against_fixture(records: &[SplitPrimeRecord]) -> Vec<String> {
    let mut diffs = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let want_h = i as u64 + 1;
        let Some(row) = fixture::table1_row(want_h) else {
            diffs.push(format!("row {want_h}: not in the embedded table"));
            continue;
        };
        if r.h != row.h {
            diffs.push(format!("row {want_h}: h expected {} got {}", row.h, r.h));
        }
        if r.d.get() != row.d {
            diffs.push(format!("row {want_h}: d expected {} got {}", row.d, r.d));
        }
        if r.p != row.p {
            diffs.push(format!("row {want_h}: p expected {} got {}", row.p, r.p));
        }
        if (r.ratio - row.ratio()).abs() > RATIO_TOLERANCE {
            diffs.push(format!(
                "row {want_h}: ratio expected {} got {:.6}",
                row.ratio_4dp, r.ratio
            ));
        }
    }
    diffs
}
