//! Command-line front end behind the `bh` binary.
//!
//! Exit codes: 0 when everything passes, 1 on a check failure, 2 on a usage
//! error. Every output carries the tool version, the full configuration and
//! the seed.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::constants::{
    bh_multilinear_constant, hypercontractive_bound, rho, s_k, scalar_bh_best, scalar_bh_bound,
    subexp_envelope,
};
use crate::polynomials::serialize;
use crate::verification::{
    csv_row, lower_bound_search, run_suite, CheckOptions, Suite, SuiteConfig, CSV_HEADER,
    DEFAULT_SEED,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const TOOL: &str = "bh";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "bh", version, about = "Bohnenblust-Hille constants and numerical checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Random seed; always echoed in the output.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of constants, one row per degree.
    Constants {
        /// Degree range such as `1..10`, `2..=5`, `3-8` or `4` (inclusive).
        #[arg(long, value_parser = parse_range)]
        m: RangeInclusive<usize>,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Fixed split index instead of the optimal one.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a randomized verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        /// Number of instances (suite default when absent).
        #[arg(long)]
        trials: Option<usize>,
        /// Monte Carlo samples (sign draws for the kahane suite).
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        /// Sup-norm ascent starts.
        #[arg(long, default_value_t = 4)]
        budget: usize,
        /// Phase grid per axis for sup-norm upper bounds.
        #[arg(long)]
        grid: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Subexponential envelope `max_m scalar_bh_best(m) / (1+eps)^m`.
    Envelope {
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        /// Largest degree scanned.
        #[arg(long = "m", default_value_t = 500)]
        m_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized search for polynomials with a large constant ratio.
    Search {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        budget: usize,
        /// Where to write the witness polynomial.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `a..b`, `a..=b`, `a-b` (all inclusive) or a single `a`.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let text = text.trim();
    let bad = || format!("bad range `{text}`; expected e.g. 1..10, 2..=5, 3-8 or 4");
    let (lo, hi) = if let Some((a, b)) = text.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = text.split_once("..") {
        (a, b)
    } else if let Some((a, b)) = text.split_once('-') {
        (a, b)
    } else {
        (text, text)
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    Ok(lo..=hi)
}

fn parse_suite(text: &str) -> Result<Suite, String> {
    text.parse::<Suite>().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{text}`; expected one of {}", names.join(", "))
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(stderr, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            EXIT_USAGE
        }
        Err(CliError::Io(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            EXIT_FAILURE
        }
    }
}

enum CliError {
    Usage(String),
    Io(String),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn metadata(command: &str, config: Value, seed: Option<u64>) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "config": config,
        "seed": seed,
    })
}

fn csv_preamble(meta: &Value) -> String {
    format!(
        "# tool={} version={} command={} seed={}\n# config={}\n",
        meta["tool"].as_str().unwrap_or_default(),
        meta["version"].as_str().unwrap_or_default(),
        meta["command"].as_str().unwrap_or_default(),
        meta["seed"],
        meta["config"]
    )
}

fn emit(common: &Common, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn format_name(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn execute(command: &Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Constants { m, r, t, k, common } => {
            let config = json!({"m": format!("{}..={}", m.start(), m.end()), "r": r, "t": t, "k": k,
                                "format": format_name(common.format)});
            let meta = metadata("constants", config, Some(common.seed));
            let rows = constants_rows(m.clone(), *r, *t, *k)?;
            let text = match common.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({"metadata": meta, "rows": rows})).expect("json") + "\n"
                }
                Format::Csv => {
                    let mut text = csv_preamble(&meta);
                    text.push_str("m,hypercontractive,scalar_bh_best,k_star,scalar_bh_at_k,multilinear,rho,k,s_k\n");
                    for row in &rows {
                        text.push_str(&format!(
                            "{},{},{},{},{},{},{},{},{}\n",
                            row["m"],
                            opt(row["hypercontractive"].as_f64()),
                            opt(row["scalar_bh_best"].as_f64()),
                            row["k_star"].as_u64().map(|x| x.to_string()).unwrap_or_default(),
                            opt(row["scalar_bh_at_k"].as_f64()),
                            opt(row["multilinear"].as_f64()),
                            opt(row["rho"].as_f64()),
                            row["k"],
                            opt(row["s_k"].as_f64()),
                        ));
                    }
                    text
                }
            };
            emit(common, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            suite,
            trials,
            samples,
            budget,
            grid,
            common,
        } => {
            let config = SuiteConfig {
                count: *trials,
                checks: CheckOptions {
                    seed: common.seed,
                    samples: *samples,
                    budget: *budget,
                    grid: *grid,
                    ..CheckOptions::default()
                },
            };
            let outcome = run_suite(*suite, &config)?;
            let meta = metadata(
                "verify",
                json!({"suite": suite.name(), "trials": config.count.unwrap_or(suite.default_count()),
                       "samples": samples, "budget": budget, "grid": grid,
                       "format": format_name(common.format)}),
                Some(common.seed),
            );
            let failures: Vec<usize> = outcome.failures().map(|(i, _)| i).collect();
            let text = match common.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({
                        "metadata": meta,
                        "summary": {"reports": outcome.reports.len(), "failures": failures.len(),
                                    "declined": outcome.declined.len()},
                        "reports": outcome.reports,
                        "declined": outcome.declined,
                    }))
                    .expect("json")
                        + "\n"
                }
                Format::Csv => {
                    let mut text = csv_preamble(&meta);
                    text.push_str(CSV_HEADER);
                    text.push('\n');
                    for (i, report) in outcome.reports.iter().enumerate() {
                        text.push_str(&csv_row(i, report));
                        text.push('\n');
                    }
                    text
                }
            };
            emit(common, &text, stdout)?;
            if failures.is_empty() {
                return Ok(EXIT_OK);
            }
            let dir = common
                .out
                .as_deref()
                .and_then(Path::parent)
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("."));
            for (index, report) in outcome.failures() {
                if let Some(witness) = &report.witness {
                    for (name, contents) in &witness.files {
                        let file = dir.join(format!("{}-witness-{index}-{name}", suite.name()));
                        fs::write(file, contents)?;
                    }
                }
            }
            Ok(EXIT_FAILURE)
        }
        Command::Envelope { eps, m_max, common } => {
            let envelope = subexp_envelope(*eps, *m_max)?;
            let meta = metadata(
                "envelope",
                json!({"eps": eps, "m_max": m_max, "format": format_name(common.format)}),
                Some(common.seed),
            );
            let text = match common.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({"metadata": meta, "envelope": envelope})).expect("json")
                        + "\n"
                }
                Format::Csv => {
                    let mut text = csv_preamble(&meta);
                    text.push_str(&format!(
                        "# kappa={} m_star={} tail_decreasing={}\nm,k_star,scalar_bh_best,ratio\n",
                        envelope.kappa, envelope.m_star, envelope.tail_decreasing
                    ));
                    for p in &envelope.series {
                        text.push_str(&format!("{},{},{},{}\n", p.m, p.k_star, p.best, p.ratio));
                    }
                    text
                }
            };
            emit(common, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Search {
            m,
            n,
            budget,
            witness,
            common,
        } => {
            let result = lower_bound_search(*m, *n, *budget, common.seed)?;
            let witness_path = witness.clone().unwrap_or_else(|| {
                let name = format!("search-witness-m{m}-n{n}-seed{}.json", common.seed);
                match common.out.as_deref().and_then(Path::parent) {
                    Some(dir) => dir.join(name),
                    None => PathBuf::from(name),
                }
            });
            fs::write(&witness_path, serialize(&result.witness))?;
            let meta = metadata(
                "search",
                json!({"m": m, "n": n, "budget": budget, "format": format_name(common.format)}),
                Some(common.seed),
            );
            let body = json!({
                "best_ratio": result.best_ratio,
                "upper_bound": result.upper_bound,
                "gap": result.gap(),
                "consistent": result.consistent(),
                "evaluations": result.evaluations,
                "witness_file": witness_path.display().to_string(),
            });
            let text = match common.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({"metadata": meta, "result": body})).expect("json") + "\n"
                }
                Format::Csv => {
                    let mut text = csv_preamble(&meta);
                    text.push_str("m,n,budget,best_ratio,upper_bound,gap,witness_file\n");
                    text.push_str(&format!(
                        "{m},{n},{budget},{},{},{},{}\n",
                        result.best_ratio,
                        result.upper_bound,
                        result.gap(),
                        witness_path.display()
                    ));
                    text
                }
            };
            emit(common, &text, stdout)?;
            Ok(if result.consistent() { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

/// Rows of the `constants` table as JSON objects. Entries that do not apply
/// (the polynomial bound at `m = 1`, `s_k` with `k` out of range) are null.
pub fn constants_rows(
    m: RangeInclusive<usize>,
    r: f64,
    t: f64,
    k: Option<usize>,
) -> crate::Result<Vec<Value>> {
    let mut rows = Vec::new();
    for m in m {
        if m == 0 {
            return Err(crate::error::invalid("m", "degrees start at 1"));
        }
        let (k_star, best) = if m >= 2 {
            let (k_star, report) = scalar_bh_best(m)?;
            (Some(k_star), Some(report.value))
        } else {
            (None, None)
        };
        let k_used = k.or(k_star).unwrap_or(1);
        let at_k = match k {
            Some(k) if m >= 2 && k >= 1 && k < m => Some(scalar_bh_bound(m, k)?.value),
            _ => best,
        };
        rows.push(json!({
            "m": m,
            "hypercontractive": hypercontractive_bound(m)?,
            "scalar_bh_best": best,
            "k_star": k_star,
            "scalar_bh_at_k": at_k,
            "multilinear": bh_multilinear_constant(m, t)?,
            "rho": rho(m, r, 2.0)?,
            "k": k_used,
            "s_k": s_k(k_used, r).ok(),
        }));
    }
    Ok(rows)
}
