use std::path::PathBuf;

use binarep_core::corrupt::{CorruptionKind, CorruptionSpec};
use binarep_core::event::{SensorGeometry, WindowPolicy};
use binarep_core::repr::{BitOrder, ReprConfig, ReprKind};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "binarep", version, about = "Event-stream frame conversion, corruption and evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert event files into `.ert` tensors plus a manifest.
    Convert(ConvertArgs),
    /// Write corrupted copies of event files as CSV.
    Corrupt(CorruptArgs),
    /// Sparsity statistics per sample and representation.
    Stats(StatsArgs),
    /// Relative Accuracy Drop table from clean and corrupted accuracies.
    Rad(RadArgs),
    /// Render representation frames as PNG images.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Nmnist,
    Csv,
}

impl InputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            InputFormat::Nmnist => "bin",
            InputFormat::Csv => "csv",
        }
    }

    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "bin" => Some(InputFormat::Nmnist),
            "csv" => Some(InputFormat::Csv),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input file or dataset directory (`root/<label>/<sample>`).
    pub input: PathBuf,
    /// Event file format; inferred from the extension (.bin / .csv) when omitted.
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
    #[arg(long, default_value_t = 34, value_parser = clap::value_parser!(u16).range(1..))]
    pub width: u16,
    #[arg(long, default_value_t = 34, value_parser = clap::value_parser!(u16).range(1..))]
    pub height: u16,
}

impl InputArgs {
    pub fn geometry(&self) -> SensorGeometry {
        SensorGeometry::new(self.width, self.height).expect("clap enforces non-zero dims")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReprArg {
    Voxel,
    Binary,
    Histogram,
    Binarep,
}

impl From<ReprArg> for ReprKind {
    fn from(r: ReprArg) -> Self {
        match r {
            ReprArg::Voxel => ReprKind::VoxelGrid,
            ReprArg::Binary => ReprKind::BinaryImages,
            ReprArg::Histogram => ReprKind::Histogram,
            ReprArg::Binarep => ReprKind::BinaRep,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BitOrderArg {
    EarlyMsb,
    EarlyLsb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    EqualDuration,
    EqualCount,
}

#[derive(Debug, Clone, Args)]
pub struct ReprArgs {
    #[arg(long, value_enum, default_value = "binarep")]
    pub repr: ReprArg,
    /// Frames T (bins for the voxel grid).
    #[arg(long = "T", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4096))]
    pub frames: u32,
    /// Bits per Bina-Rep value.
    #[arg(long = "N", default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=32))]
    pub bit_depth: u32,
    #[arg(long, value_enum, default_value = "early-msb")]
    pub bit_order: BitOrderArg,
    /// Scale Bina-Rep values by 1 / (2^N - 1).
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, value_enum, default_value = "equal-duration")]
    pub window: WindowArg,
}

impl ReprArgs {
    pub fn config(&self) -> ReprConfig {
        let mut config = ReprConfig::new(self.repr.into(), self.frames as usize, self.bit_depth);
        config.bit_order = match self.bit_order {
            BitOrderArg::EarlyMsb => BitOrder::EarlyMsb,
            BitOrderArg::EarlyLsb => BitOrder::EarlyLsb,
        };
        config.normalize = self.normalize;
        config.policy = match self.window {
            WindowArg::EqualDuration => WindowPolicy::EqualDuration,
            WindowArg::EqualCount => WindowPolicy::EqualCount,
        };
        config
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DtypeArg {
    U8,
    U16,
    U32,
    F32,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output directory for tensors, `manifest.csv` and `run.json`.
    pub output: PathBuf,
    #[command(flatten)]
    pub repr: ReprArgs,
    /// Tensor dtype; by default the narrowest lossless one for the representation.
    #[arg(long, value_enum)]
    pub dtype: Option<DtypeArg>,
    /// Corrupt each stream before conversion, as `kind:severity:seed`.
    #[arg(long, value_parser = parse_corruption)]
    pub corrupt: Option<CorruptionSpec>,
    /// Skip unreadable samples instead of aborting.
    #[arg(long)]
    pub keep_going: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorruptionArg {
    Ba,
    Occlusion,
}

impl From<CorruptionArg> for CorruptionKind {
    fn from(c: CorruptionArg) -> Self {
        match c {
            CorruptionArg::Ba => CorruptionKind::BackgroundActivity,
            CorruptionArg::Occlusion => CorruptionKind::Occlusion,
        }
    }
}

#[derive(Debug, Args)]
pub struct CorruptArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output directory for corrupted CSV streams and `manifest.csv`.
    pub output: PathBuf,
    #[arg(long = "type", value_enum)]
    pub kind: CorruptionArg,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub severity: u8,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub keep_going: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output CSV; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Use the representation flags instead of the five evaluation configurations.
    #[arg(long)]
    pub single: bool,
    #[command(flatten)]
    pub repr: ReprArgs,
}

#[derive(Debug, Args)]
pub struct RadArgs {
    /// Accuracy CSV with header `corruption,severity,accuracy`; severity 0 rows are clean.
    #[arg(long, conflicts_with_all = ["clean", "acc"])]
    pub input: Option<PathBuf>,
    /// Clean accuracy in percent.
    #[arg(long, requires = "acc")]
    pub clean: Option<f64>,
    /// Corrupted accuracies for severities 1, 2, ... (comma separated).
    #[arg(long, value_delimiter = ',', num_args = 1..=5, requires = "clean")]
    pub acc: Vec<f64>,
    #[arg(long = "type", value_enum, default_value = "ba")]
    pub kind: CorruptionArg,
    /// Output CSV; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output directory for PNG files.
    pub output: PathBuf,
    #[command(flatten)]
    pub repr: ReprArgs,
    /// Render one tensor channel as grayscale instead of per-frame composites.
    #[arg(long)]
    pub channel: Option<usize>,
}

fn parse_corruption(s: &str) -> Result<CorruptionSpec, String> {
    s.parse().map_err(|e: binarep_core::Error| e.to_string())
}
