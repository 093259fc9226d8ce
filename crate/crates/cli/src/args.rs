use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kanae", version, about = "Train and evaluate KAN autoencoders on image datasets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one autoencoder and write checkpoint, metrics and summary.
    Train(TrainArgs),
    /// Train one model per bottleneck size (hidden = bottleneck).
    Sweep(SweepArgs),
    /// Write original and reconstructed test images side by side.
    Reconstruct(ReconstructArgs),
    /// KNN-classify test latents against train latents of a checkpoint.
    Classify(ClassifyArgs),
    /// Print parameter counts for a model shape.
    CountParams(CountParamsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    F32,
    F64,
}

impl Precision {
    pub fn as_str(self) -> &'static str {
        match self {
            Precision::F32 => "f32",
            Precision::F64 => "f64",
        }
    }
}

/// Flags shared by every dataset-backed command. All are optional here so a
/// `--config` file can fill the gaps; resolution happens in `config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// `key=value` file; explicit flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Dataset format: mnist, cifar10 or raw.
    #[arg(long)]
    pub dataset: Option<String>,
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long)]
    pub bottleneck: Option<usize>,
    /// Spline grid intervals G.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Spline degree K.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub weight_decay: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// L1 penalty weight on spline coefficients.
    #[arg(long)]
    pub l1: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Drop the silu residual path from KAN layers.
    #[arg(long)]
    pub no_base: bool,
    /// Neighbours for KNN evaluation.
    #[arg(long)]
    pub k: Option<usize>,
    /// Use only the first N training samples.
    #[arg(long)]
    pub train_limit: Option<usize>,
    /// Use only the first N test samples.
    #[arg(long)]
    pub test_limit: Option<usize>,
    #[arg(long, value_enum)]
    pub precision: Option<Precision>,
    /// Write 0 instead of measured seconds, making outputs byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated bottleneck sizes, e.g. 10,50,150.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub bottlenecks: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub common: Common,
    /// Checkpoint written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Number of leading test samples to render.
    #[arg(long, default_value_t = 8)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct CountParamsArgs {
    pub input: usize,
    pub hidden: usize,
    pub bottleneck: usize,
    #[arg(long, default_value_t = 5)]
    pub grid: usize,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[arg(long)]
    pub no_base: bool,
}
