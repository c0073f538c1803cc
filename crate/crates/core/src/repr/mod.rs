//! Frame representations of event streams and channel-concatenated tensors.
//!
//! | representation      | frames `T` | channels |
//! |---------------------|-----------:|---------:|
//! | voxel grid          | 10         | `T`      |
//! | binary event images | 10         | `2T`     |
//! | event histogram     | 1          | 2        |
//! | Bina-Rep            | 1 or 3     | `2T`     |
//!
//! Frame sequences are laid out frame-major: channel `t * 2 + c`, with
//! `c = 0` for Off and `c = 1` for On. Tensors stay at sensor resolution.

mod binarep;
mod binary;
mod histogram;
mod voxel;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use self::binarep::{bina_rep, bina_rep_with_plan, BinaRepFrame, BitOrder, MAX_BIT_DEPTH};
pub use self::binary::{binary_event_images, binary_event_images_with_plan, BinaryFrameStack};
pub use self::histogram::event_histogram;
pub use self::voxel::{triangular_weights, voxel_grid};

use crate::error::{Error, Result};
use crate::event::{plan_windows_with, EventStream, WindowPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReprKind {
    VoxelGrid,
    BinaryImages,
    Histogram,
    BinaRep,
}

impl ReprKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReprKind::VoxelGrid => "voxel",
            ReprKind::BinaryImages => "binary",
            ReprKind::Histogram => "histogram",
            ReprKind::BinaRep => "binarep",
        }
    }
}

impl fmt::Display for ReprKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReprKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "voxel" | "voxel-grid" => Ok(ReprKind::VoxelGrid),
            "binary" | "binary-images" => Ok(ReprKind::BinaryImages),
            "histogram" | "hist" => Ok(ReprKind::Histogram),
            "binarep" | "bina-rep" => Ok(ReprKind::BinaRep),
            other => Err(Error::InvalidArgument(format!(
                "unknown representation {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelOrder {
    /// Channel `t * 2 + c`.
    FrameMajor,
    /// One channel per temporal bin.
    Bins,
    /// Read back from a container with no layout metadata.
    Unknown,
}

/// Describes how a tensor's channels were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layout {
    pub kind: Option<ReprKind>,
    pub frames: usize,
    pub bit_depth: Option<u32>,
    pub normalized: bool,
    pub channel_order: ChannelOrder,
}

impl Layout {
    pub fn frames(kind: ReprKind, frames: usize) -> Self {
        Self {
            kind: Some(kind),
            frames,
            bit_depth: None,
            normalized: false,
            channel_order: ChannelOrder::FrameMajor,
        }
    }

    pub fn bins(bins: usize) -> Self {
        Self {
            kind: Some(ReprKind::VoxelGrid),
            frames: bins,
            bit_depth: None,
            normalized: false,
            channel_order: ChannelOrder::Bins,
        }
    }

    pub fn unknown() -> Self {
        Self {
            kind: None,
            frames: 0,
            bit_depth: None,
            normalized: false,
            channel_order: ChannelOrder::Unknown,
        }
    }
}

/// Dense `C x H x W` grid of `f32`, row-major with the last dimension fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct RepTensor {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<f32>,
    layout: Layout,
}

impl RepTensor {
    pub fn zeros(channels: usize, height: usize, width: usize, layout: Layout) -> Self {
        Self {
            channels,
            height,
            width,
            data: vec![0.0; channels * height * width],
            layout,
        }
    }

    pub fn from_vec(
        channels: usize,
        height: usize,
        width: usize,
        data: Vec<f32>,
        layout: Layout,
    ) -> Result<Self> {
        if data.len() != channels * height * width {
            return Err(Error::InvalidArgument(format!(
                "{} values do not fill a {channels}x{height}x{width} tensor",
                data.len()
            )));
        }
        Ok(Self {
            channels,
            height,
            width,
            data,
            layout,
        })
    }

    /// `(channels, height, width)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn with_layout(mut self, layout: Layout) -> Self {
        self.layout = layout;
        self
    }

    pub fn at(&self, c: usize, y: usize, x: usize) -> f32 {
        self.data[(c * self.height + y) * self.width + x]
    }

    pub fn at_mut(&mut self, c: usize, y: usize, x: usize) -> &mut f32 {
        &mut self.data[(c * self.height + y) * self.width + x]
    }

    pub fn channel(&self, c: usize) -> &[f32] {
        let plane = self.height * self.width;
        &self.data[c * plane..(c + 1) * plane]
    }

    /// Copies channels `start..start + count` into a new tensor.
    pub fn select_channels(&self, start: usize, count: usize) -> Result<RepTensor> {
        if count == 0 || start + count > self.channels {
            return Err(Error::InvalidArgument(format!(
                "channels {start}..{} out of range for {} channels",
                start + count,
                self.channels
            )));
        }
        let plane = self.height * self.width;
        let data = self.data[start * plane..(start + count) * plane].to_vec();
        RepTensor::from_vec(count, self.height, self.width, data, Layout::unknown())
    }
}

impl BinaryFrameStack {
    /// `2F x H x W` tensor of 0/1 values.
    pub fn to_tensor(&self) -> RepTensor {
        let g = self.geometry();
        let data = self.bits().iter().map(|b| if *b { 1.0 } else { 0.0 }).collect();
        RepTensor {
            channels: self.frame_count() * Self::CHANNELS,
            height: g.height() as usize,
            width: g.width() as usize,
            data,
            layout: Layout::frames(ReprKind::BinaryImages, self.frame_count()),
        }
    }
}

impl BinaRepFrame {
    /// `2 x H x W` tensor of raw values, or values divided by `2^N - 1`.
    pub fn to_tensor(&self, normalize: bool) -> RepTensor {
        frames_to_tensor(std::slice::from_ref(self), normalize)
    }
}

/// Output of one of the four converters, before channel assembly.
#[derive(Debug, Clone)]
pub enum RepOutput {
    Binary(BinaryFrameStack),
    BinaRep(Vec<BinaRepFrame>),
    Histogram(RepTensor),
    Voxel(RepTensor),
}

/// Concatenates a representation's frames along the channel axis.
/// `normalize` only affects Bina-Rep, scaling values by `1 / (2^N - 1)`.
pub fn assemble_tensor(output: RepOutput, normalize: bool) -> RepTensor {
    match output {
        RepOutput::Binary(stack) => stack.to_tensor(),
        RepOutput::BinaRep(frames) => frames_to_tensor(&frames, normalize),
        RepOutput::Histogram(t) | RepOutput::Voxel(t) => t,
    }
}

fn frames_to_tensor(frames: &[BinaRepFrame], normalize: bool) -> RepTensor {
    let Some(first) = frames.first() else {
        return RepTensor::zeros(0, 0, 0, Layout::frames(ReprKind::BinaRep, 0));
    };
    let g = first.geometry();
    let bit_depth = first.bit_depth();
    let scale = if normalize {
        1.0 / first.max_value() as f64
    } else {
        1.0
    };
    let data = frames
        .iter()
        .flat_map(|f| f.values().iter())
        .map(|&v| (v as f64 * scale) as f32)
        .collect();
    RepTensor {
        channels: frames.len() * BinaRepFrame::CHANNELS,
        height: g.height() as usize,
        width: g.width() as usize,
        data,
        layout: Layout {
            bit_depth: Some(bit_depth),
            normalized: normalize,
            ..Layout::frames(ReprKind::BinaRep, frames.len())
        },
    }
}

/// Full description of one representation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReprConfig {
    pub kind: ReprKind,
    /// `T`: frames, or bins for the voxel grid. Ignored by the histogram.
    pub frames: usize,
    /// `N`: bits per Bina-Rep value. Ignored by other kinds.
    pub bit_depth: u32,
    pub bit_order: BitOrder,
    pub normalize: bool,
    pub policy: WindowPolicy,
}

impl ReprConfig {
    pub fn new(kind: ReprKind, frames: usize, bit_depth: u32) -> Self {
        Self {
            kind,
            frames,
            bit_depth,
            bit_order: BitOrder::EarlyMsb,
            normalize: false,
            policy: WindowPolicy::EqualDuration,
        }
    }

    pub fn voxel_grid(bins: usize) -> Self {
        Self::new(ReprKind::VoxelGrid, bins, 8)
    }

    pub fn binary_images(frames: usize) -> Self {
        Self::new(ReprKind::BinaryImages, frames, 8)
    }

    pub fn histogram() -> Self {
        Self::new(ReprKind::Histogram, 1, 8)
    }

    pub fn bina_rep(frames: usize, bit_depth: u32) -> Self {
        Self::new(ReprKind::BinaRep, frames, bit_depth)
    }

    /// The five configurations compared in the evaluation: voxel grid T=10,
    /// binary images T=10, histogram, Bina-Rep T=1 and T=3 (N=8).
    pub fn evaluation_set() -> [ReprConfig; 5] {
        [
            Self::voxel_grid(10),
            Self::binary_images(10),
            Self::histogram(),
            Self::bina_rep(1, 8),
            Self::bina_rep(3, 8),
        ]
    }

    /// Channel count of the assembled tensor.
    pub fn channel_count(&self) -> usize {
        match self.kind {
            ReprKind::VoxelGrid => self.frames,
            ReprKind::Histogram => 2,
            ReprKind::BinaryImages | ReprKind::BinaRep => 2 * self.frames,
        }
    }

    /// Frames `T` as reported in manifests (1 for the histogram).
    pub fn effective_frames(&self) -> usize {
        match self.kind {
            ReprKind::Histogram => 1,
            _ => self.frames,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.frames == 0 && self.kind != ReprKind::Histogram {
            return Err(Error::InvalidArgument("T must be >= 1".into()));
        }
        if self.kind == ReprKind::BinaRep && !(1..=MAX_BIT_DEPTH).contains(&self.bit_depth) {
            return Err(Error::InvalidArgument(format!(
                "N must be in 1..={MAX_BIT_DEPTH}, got {}",
                self.bit_depth
            )));
        }
        Ok(())
    }

    /// Runs the converter without assembling the tensor.
    pub fn represent(&self, stream: &EventStream) -> Result<RepOutput> {
        self.validate()?;
        Ok(match self.kind {
            ReprKind::VoxelGrid => RepOutput::Voxel(voxel_grid(stream, self.frames)?),
            ReprKind::Histogram => RepOutput::Histogram(event_histogram(stream)),
            ReprKind::BinaryImages => {
                let plan = plan_windows_with(stream, self.frames, self.policy)?;
                RepOutput::Binary(binary_event_images_with_plan(stream, plan)?)
            }
            ReprKind::BinaRep => {
                let plan =
                    plan_windows_with(stream, self.frames * self.bit_depth as usize, self.policy)?;
                RepOutput::BinaRep(bina_rep_with_plan(
                    stream,
                    &plan,
                    self.bit_depth,
                    self.bit_order,
                )?)
            }
        })
    }

    pub fn convert(&self, stream: &EventStream) -> Result<RepTensor> {
        Ok(assemble_tensor(self.represent(stream)?, self.normalize))
    }
}

impl fmt::Display for ReprConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ReprKind::Histogram => write!(f, "histogram"),
            ReprKind::BinaRep => write!(f, "binarep(T={},N={})", self.frames, self.bit_depth),
            kind => write!(f, "{kind}(T={})", self.frames),
        }
    }
}
