use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Required transmit power of SISO, DF relaying and IRS-aided links under
/// 5G UMi channel models.
#[derive(Debug, Parser)]
#[command(name = "irs5g", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON document with `scenario`, `radio` and `experiment` sections.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output file, or `-` for stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// How channel-model validity violations are handled.
    #[arg(long, global = true, value_enum, default_value_t = Validation::Strict)]
    pub validation: Validation,

    /// Directory for sweep tables when `--output` is not given.
    #[arg(long, global = true, env = "IRS5G_OUTPUT_DIR", value_name = "DIR")]
    pub output_dir: Option<PathBuf>,

    /// Evaluate grid points on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Validation {
    /// Violations abort with exit status 2.
    Strict,
    /// Violations are reported on stderr.
    Warn,
    /// Violations are ignored.
    Off,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-link distances, path loss and channel gain for one placement.
    Gain(PointArgs),
    /// Required transmit powers for one placement.
    Power(PointArgs),
    /// Required powers as the destination moves (d1 sweep).
    #[command(name = "sweep-d1")]
    SweepD1(SweepD1Args),
    /// Minimum IRS element count against relay distance.
    #[command(name = "nmin-sweep")]
    NminSweep(NminArgs),
    /// Farthest IRS placement that beats SISO and DF, per frequency and rate.
    #[command(name = "max-dsr")]
    MaxDsr(MaxDsrArgs),
}

/// Scenario and radio overrides shared by all commands.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    /// Carrier frequency in GHz (max-dsr accepts a list).
    #[arg(long = "fc", value_delimiter = ',', num_args = 1..)]
    pub fc: Vec<f64>,
    /// Source to relay/IRS distance in m.
    #[arg(long)]
    pub dsr: Option<f64>,
    /// Destination travel distance in m.
    #[arg(long)]
    pub d1: Option<f64>,
    /// Separation between the two lines in m.
    #[arg(long)]
    pub lateral: Option<f64>,
    /// Bandwidth in Hz.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Noise figure in dB.
    #[arg(long)]
    pub noise_figure: Option<f64>,
    /// Noise power in dBm, replacing the thermal-noise computation.
    #[arg(long)]
    pub noise_dbm: Option<f64>,
    /// Target rate in bits/sec/Hz (max-dsr accepts a list).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub rate: Vec<f64>,
    /// IRS amplitude reflection coefficient.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub overrides: Overrides,
    /// IRS element counts.
    #[arg(long = "n", value_delimiter = ',', num_args = 1..)]
    pub n: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct SweepD1Args {
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(long = "n", value_delimiter = ',', num_args = 1..)]
    pub n: Vec<u64>,
    #[arg(long)]
    pub d1_start: Option<f64>,
    #[arg(long)]
    pub d1_stop: Option<f64>,
    #[arg(long)]
    pub d1_step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Df,
    Siso,
    Both,
}

#[derive(Debug, Args)]
pub struct NminArgs {
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(long)]
    pub dsr_start: Option<f64>,
    #[arg(long)]
    pub dsr_stop: Option<f64>,
    #[arg(long)]
    pub dsr_step: Option<f64>,
    /// Destination positions as fractions of d_sr.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub ratios: Vec<f64>,
    #[arg(long, value_enum)]
    pub target: Option<TargetArg>,
    /// Upper bound of the element-count search.
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MaxDsrArgs {
    #[command(flatten)]
    pub overrides: Overrides,
    /// IRS element count.
    #[arg(long = "n")]
    pub n: Option<u64>,
    #[arg(long)]
    pub dsr_start: Option<f64>,
    #[arg(long)]
    pub dsr_stop: Option<f64>,
    #[arg(long)]
    pub dsr_step: Option<f64>,
    #[arg(long)]
    pub d1_step: Option<f64>,
}
