//! Command-line front end: parameter scans and figure pipelines emitting CSV
//! or JSON tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

pub mod output;
pub mod pipelines;

pub use output::{Metadata, Table};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1_618_033_988;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "PHASELOCK_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "phaselock", version, about = "Phase-locking scans and figure pipelines")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output file; defaults to `$PHASELOCK_OUTPUT_DIR/<command>.<ext>`, else stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArithFn {
    Totient,
    Moebius,
    Mangoldt,
    MangoldtModified,
    Ramanujan,
    /// Error term ε(t) of the modified Mangoldt average.
    ErrorModified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// ε(t) of the modified Mangoldt average.
    ErrorModified,
    /// ε(t) of the plain Mangoldt average.
    ErrorMangoldt,
    White,
    /// Synthetic 1/f^α noise.
    PowerLaw,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Arithmetic functions: a single value with --n, or a table up to --upto.
    Arith {
        #[arg(long = "fn", value_enum)]
        function: ArithFn,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        upto: Option<u64>,
        /// Modulus for the Ramanujan sum.
        #[arg(long)]
        q: Option<u64>,
    },
    /// Locking-basin edges of every Farey fraction of the given order.
    Basins {
        #[arg(long, default_value_t = 8)]
        order: i64,
        #[arg(long, default_value_t = 6)]
        a_cut: i64,
    },
    /// Devil's staircase of the Arnold map, or its plateaus with --plateaus.
    Staircase {
        #[arg(long, default_value_t = 0.9)]
        c: f64,
        #[arg(long, default_value_t = -0.2, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.2)]
        hi: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 4000)]
        transient: usize,
        #[arg(long, default_value_t = 6000)]
        iterations: usize,
        #[arg(long)]
        plateaus: bool,
    },
    /// Adler phase trajectory.
    Adler {
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi0: f64,
        #[arg(long, default_value_t = 100.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Maximum number of rows written.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Allan deviations of a jittered locking experiment.
    PllNoise {
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        /// Nominal beat ω̃ in units of K.
        #[arg(long, default_value_t = 1.0 / 3.0)]
        beat_ratio: f64,
        #[arg(long, default_value_t = 1e-3)]
        jitter: f64,
        #[arg(long, default_value_t = 10_000)]
        counts: usize,
        #[arg(long, default_value_t = 1.0)]
        gate: f64,
    },
    /// Scattering coefficient on the critical line.
    Scatter {
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        kmin: f64,
        #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
        kmax: f64,
        #[arg(long, default_value_t = 300)]
        points: usize,
    },
    /// Partial sums of the Eisenstein series for Q = 1..=qmax.
    Eisenstein {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        s_re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s_im: f64,
        #[arg(long, default_value_t = 50)]
        qmax: u64,
    },
    /// Locked-phase expectation values by both routes.
    Qphase {
        #[arg(long, default_value_t = 50)]
        qmax: u64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,
    },
    /// KMS values against the low-temperature limit μ(q)/φ(q).
    Kms {
        #[arg(long, default_value_t = 3.0)]
        beta: f64,
        #[arg(long, default_value_t = 50)]
        qmax: u64,
    },
    /// Averaged periodogram and log-log slope.
    Spectrum {
        #[arg(long, value_enum, default_value_t = Source::ErrorModified)]
        source: Source,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 16_384)]
        segment: usize,
        #[arg(long, default_value_t = 1e-3)]
        f_lo: f64,
        #[arg(long, default_value_t = 1e-1)]
        f_hi: f64,
    },
    /// Scattering phase κ(k), κ′(k) and the contribution of A(k).
    Fig2 {
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        kmin: f64,
        #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
        kmax: f64,
        #[arg(long, default_value_t = 600)]
        points: usize,
    },
    /// Locked-phase expectation at β = 0 and 1 (or one β) against πΛ(q)/ln q.
    Fig3 {
        #[arg(long, default_value_t = 50)]
        qmax: u64,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
    },
    /// KMS values at β = 3 against μ(q)/φ(q).
    Fig4 {
        #[arg(long, default_value_t = 3.0)]
        beta: f64,
        #[arg(long, default_value_t = 50)]
        qmax: u64,
    },
    /// KMS values at β = 1 + ε against −Λ(q)ε/q.
    Fig5 {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 50)]
        qmax: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Arith { .. } => "arith",
            Command::Basins { .. } => "basins",
            Command::Staircase { .. } => "staircase",
            Command::Adler { .. } => "adler",
            Command::PllNoise { .. } => "pll-noise",
            Command::Scatter { .. } => "scatter",
            Command::Eisenstein { .. } => "eisenstein",
            Command::Qphase { .. } => "qphase",
            Command::Kms { .. } => "kms",
            Command::Spectrum { .. } => "spectrum",
            Command::Fig2 { .. } => "fig2",
            Command::Fig3 { .. } => "fig3",
            Command::Fig4 { .. } => "fig4",
            Command::Fig5 { .. } => "fig5",
        }
    }

    /// Canonical parameters of the subcommand, without its name.
    pub fn params(&self) -> serde_json::Value {
        match serde_json::to_value(self).expect("serializable") {
            serde_json::Value::Object(mut m) if m.len() == 1 => m.remove(self.name()).unwrap_or_default(),
            other => other,
        }
    }

    pub fn metadata(&self, seed: u64) -> Metadata {
        Metadata::new(self.name(), &self.params(), seed)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: phaselock::Error,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core { source, .. } if source.is_numerical() => 3,
            _ => 2,
        }
    }
}

/// Attaches context to library errors.
pub(crate) trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError>;
}

impl<T> Context<T> for phaselock::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { context: what(), source })
    }
}

pub fn render(table: &Table, meta: &Metadata, format: Format) -> String {
    match format {
        Format::Csv => output::render_csv(table, meta),
        Format::Json => output::render_json(table, meta),
    }
}

/// Where the output goes: the explicit path, the environment directory, or stdout.
pub fn output_path(cli: &Cli, env_dir: Option<PathBuf>) -> Option<PathBuf> {
    cli.common.output.clone().or_else(|| {
        env_dir.map(|d| d.join(format!("{}.{}", cli.command.name(), cli.common.format.extension())))
    })
}

/// Runs a parsed invocation and writes its output.
pub fn execute(cli: &Cli, env_dir: Option<PathBuf>) -> Result<Option<PathBuf>, CliError> {
    let table = pipelines::run(&cli.command, cli.common.seed)?;
    let text = render(&table, &cli.command.metadata(cli.common.seed), cli.common.format);
    match output_path(cli, env_dir) {
        Some(path) => {
            let io = |source| CliError::Io {
                path: path.display().to_string(),
                source,
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(io)?;
            }
            std::fs::write(&path, text).map_err(io)?;
            Ok(Some(path))
        }
        None => {
            std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            })?;
            Ok(None)
        }
    }
}

/// Full entry point: parse, run, report. Returns the process exit code.
pub fn run<I, S>(argv: I) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    match execute(&cli, env_dir) {
        Ok(Some(path)) => {
            eprintln!("wrote {}", path.display());
            0
        }
        Ok(None) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
