//! Command-line front end: verifiers, generators, rules on profile files and
//! data emission for plots.
//!
//! [`run`] parses arguments and returns the exit code with everything that
//! would be printed, so the binary is a thin wrapper and tests call it
//! directly.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod checks;
mod commands;
pub mod report;
pub mod show;

use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "elicit",
    version,
    about = "Voting with size-limited preference queries"
)]
pub struct Cli {
    /// Print one JSON object per report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add wall time to every report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the verifier for one construction or for all of them.
    Verify(VerifyArgs),
    /// Decide whether a scoring vector is computable from t-queries.
    Span(SpanArgs),
    /// List the basis vectors for query size t, raw and normalized.
    Basis {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
    },
    /// CSV of simplex grid points with their minimal query size.
    Simplex {
        #[arg(long)]
        m: usize,
        /// Grid resolution: weights are multiples of 1/N.
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV of the success-probability bound over a grid of delta values.
    BoundCurve {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        tstar: usize,
        #[arg(long, default_value_t = 12)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covering numbers as CSV; with both --t and --tstar also the covers.
    Cover {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        tstar: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a construction, verify it and write its profiles to a directory.
    Generate(GenerateArgs),
    /// Fibonacci parameters consistent with observed scaled margins.
    Consistent {
        #[arg(long, default_value_t = 8)]
        n: u64,
        #[arg(long)]
        p1: Option<u64>,
        #[arg(long)]
        p2: Option<u64>,
        #[arg(long)]
        p3: Option<u64>,
        /// Condition on a known Fibonacci index.
        #[arg(long)]
        i: Option<u64>,
    },
    /// Plurality scores and winners.
    Plurality {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Scores and winners under a scoring vector, optionally via t-queries.
    Score {
        #[arg(long)]
        profile: PathBuf,
        /// Comma separated weights or a preset name.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        t: Option<usize>,
        /// Write the query transcript as JSON.
        #[arg(long, requires = "t")]
        transcript: Option<PathBuf>,
    },
    /// STV winner set with every elimination sequence.
    Stv {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Condorcet winner by a knockout over pairwise queries.
    Condorcet {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Answer one query with sampled voters instead of exact shares.
    Sample {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        t: usize,
        /// Comma separated candidate labels.
        #[arg(long)]
        subset: String,
        /// Number of sampled voters.
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare two profiles on every query of size at most t.
    Indist {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        t: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    ParityPair,
    QueryScoring,
    Span,
    WinnerFamily,
    Separation,
    StvFamily,
    HardInstance,
    Fibonacci,
    Condorcet,
    Covering,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Verify a single candidate count.
    #[arg(long)]
    pub m: Option<usize>,
    /// Largest candidate count when --m is not given.
    #[arg(long, default_value_t = 5)]
    pub max_m: usize,
    #[arg(long)]
    pub t: Option<usize>,
    /// Comma separated weights or a preset name.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Fibonacci scale.
    #[arg(long, default_value_t = 8)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random profiles per parameter setting.
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    ParityPair,
    WinnerFamily,
    Separation,
    StvFamily,
    HardInstance,
    Fibonacci,
    Random,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub target: Generator,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub alpha: Option<String>,
    /// Noise weight of the STV family, as p/q.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Comma separated labels of the fixed block of the hard instance.
    #[arg(long)]
    pub c1: Option<String>,
    #[arg(long, default_value_t = 8)]
    pub n: u64,
    #[arg(long)]
    pub i: Option<u64>,
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long)]
    pub r: Option<u8>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Support size bound for random profiles.
    #[arg(long, default_value_t = 6)]
    pub support: usize,
    /// Directory receiving one JSON profile file per built profile.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpanArgs {
    /// Comma separated weights or a preset name.
    #[arg(long)]
    pub alpha: String,
    /// Candidate count, needed for presets.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code 0 when every check passed, 1 when some check failed and 2 for
/// usage or input errors.
pub fn run<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Execution {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Execution {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut clock = Clock {
        enabled: cli.timing,
        start: Instant::now(),
    };
    match commands::execute(&cli.command, &mut clock) {
        Ok(reports) => {
            let passed = reports.iter().all(Report::passed);
            let stdout = reports
                .iter()
                .map(|r| {
                    if cli.json {
                        r.render_json() + "\n"
                    } else {
                        match &r.data {
                            Some(data) => data.clone(),
                            None => r.render_text(),
                        }
                    }
                })
                .collect();
            Execution {
                code: if passed { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Execution {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}

/// Stamps reports with the time since the previous stamp, when enabled.
pub(crate) struct Clock {
    enabled: bool,
    start: Instant,
}

impl Clock {
    pub(crate) fn stamp(&mut self, report: &mut Report) {
        let now = Instant::now();
        report.timed(self.enabled.then(|| now - self.start));
        self.start = now;
    }
}
