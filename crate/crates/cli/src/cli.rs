use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "tsdiag", version, about = "Stationarity diagnostics for time series in CSV files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full test battery on a CSV file and print a summary.
    Analyze(AnalyzeArgs),
    /// Write a synthetic series as `datetime,value` CSV.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// CSV file with a header row.
    pub input: PathBuf,

    /// Datetime column, by header name or 0-based index.
    #[arg(long, default_value = "0")]
    pub datetime_column: String,

    /// Value column, by header name or 0-based index.
    #[arg(long, default_value = "1")]
    pub value_column: String,

    /// chrono format string for the datetime column; ISO-8601 when omitted.
    #[arg(long)]
    pub datetime_format: Option<String>,

    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Number of equal segments for Levene and Bartlett (2-6).
    #[arg(long, default_value_t = 2)]
    pub variance_segments: usize,

    /// ARCH LM lag order; min(10, n/20) when omitted.
    #[arg(long)]
    pub arch_lags: Option<usize>,

    #[arg(long, default_value_t = 0.6)]
    pub seasonal_threshold: f64,

    /// Use robust STL (10 outer iterations).
    #[arg(long)]
    pub robust_stl: bool,

    /// Write the markdown report here.
    #[arg(long)]
    pub markdown: Option<PathBuf>,

    /// Write the per-test table here.
    #[arg(long)]
    pub table: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub table_format: TableFormat,

    /// Exit with status 3 when any test flags non-stationarity.
    #[arg(long)]
    pub fail_on_detection: bool,

    /// Print run metadata to standard error.
    #[arg(short, long)]
    pub verbose: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Freq {
    Hourly,
    Daily,
    Weekly,
    Monthly,
    Quarterly,
    Yearly,
    Unknown,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    #[arg(long, default_value_t = 1000)]
    pub n: usize,

    #[arg(long, value_enum, default_value_t = Freq::Daily)]
    pub freq: Freq,

    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub baseline: f64,

    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub trend_slope: f64,

    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub seasonal_amplitude: f64,

    #[arg(long, default_value_t = 7)]
    pub seasonal_period: usize,

    #[arg(long, default_value_t = 1.0)]
    pub noise_sigma: f64,

    /// Accumulate the noise into a random walk.
    #[arg(long)]
    pub unit_root: bool,

    /// AR(1) coefficient of the noise.
    #[arg(long, allow_negative_numbers = true)]
    pub ar: Option<f64>,

    /// Variance break as `FRACTION:MULTIPLIER`, e.g. `0.5:2`.
    #[arg(long)]
    pub variance_break: Option<String>,

    /// Level break as `FRACTION:SHIFT`, e.g. `0.5:3`.
    #[arg(long, allow_hyphen_values = true)]
    pub level_break: Option<String>,

    /// ARCH(1) noise as `OMEGA:ALPHA1`, e.g. `0.2:0.7`.
    #[arg(long)]
    pub arch: Option<String>,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}
