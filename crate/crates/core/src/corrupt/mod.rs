//! Background-activity and occlusion corruptions at five severity levels.
//!
//! | severity                  | 1    | 2    | 3    | 4    | 5    |
//! |---------------------------|------|------|------|------|------|
//! | background events added   | 0.5% | 0.8% | 1.0% | 2.0% | 3.0% |
//! | occlusion box side        | 35%  | 45%  | 50%  | 60%  | 70%  |
//!
//! The occlusion percentage applies to each image dimension separately, so a
//! severity-5 box covers 49% of the pixels. Both corruptions act on raw
//! streams; representations are computed afterwards.

mod rng;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use self::rng::{CorruptionRng, STREAM};

use crate::error::{Error, Result};
use crate::event::{Event, EventStream, Polarity, SensorGeometry};

/// Background ratio per severity, in tenths of a percent.
const BACKGROUND_PER_MILLE: [u64; 5] = [5, 8, 10, 20, 30];
/// Occlusion box side per severity, in percent.
const OCCLUSION_PERCENT: [u64; 5] = [35, 45, 50, 60, 70];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorruptionKind {
    BackgroundActivity,
    Occlusion,
}

impl CorruptionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CorruptionKind::BackgroundActivity => "ba",
            CorruptionKind::Occlusion => "occlusion",
        }
    }
}

impl fmt::Display for CorruptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorruptionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ba" | "background-activity" | "background" => Ok(CorruptionKind::BackgroundActivity),
            "occlusion" | "occ" => Ok(CorruptionKind::Occlusion),
            other => Err(Error::InvalidArgument(format!(
                "unknown corruption {other:?}"
            ))),
        }
    }
}

/// Severity level in `1..=5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Severity(u8);

impl Severity {
    pub const ALL: [Severity; 5] = [Severity(1), Severity(2), Severity(3), Severity(4), Severity(5)];

    pub fn new(level: i64) -> Result<Self> {
        if (1..=5).contains(&level) {
            Ok(Severity(level as u8))
        } else {
            Err(Error::SeverityOutOfRange(level))
        }
    }

    pub fn level(self) -> u8 {
        self.0
    }

    fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl TryFrom<u8> for Severity {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        Severity::new(v as i64)
    }
}

impl From<Severity> for u8 {
    fn from(s: Severity) -> u8 {
        s.0
    }
}

/// Parameter for `kind` at `severity`, in percent.
pub fn severity_param(kind: CorruptionKind, severity: i64) -> Result<f64> {
    let s = Severity::new(severity)?;
    Ok(match kind {
        CorruptionKind::BackgroundActivity => BACKGROUND_PER_MILLE[s.index()] as f64 / 10.0,
        CorruptionKind::Occlusion => OCCLUSION_PERCENT[s.index()] as f64,
    })
}

/// A corruption, serializable as `kind:severity:seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorruptionSpec {
    pub kind: CorruptionKind,
    pub severity: Severity,
    pub seed: u64,
}

impl CorruptionSpec {
    pub fn new(kind: CorruptionKind, severity: i64, seed: u64) -> Result<Self> {
        Ok(Self {
            kind,
            severity: Severity::new(severity)?,
            seed,
        })
    }

    pub fn apply(&self, stream: &EventStream) -> Result<EventStream> {
        match self.kind {
            CorruptionKind::BackgroundActivity => background_activity(stream, self),
            CorruptionKind::Occlusion => occlusion(stream, self),
        }
    }
}

impl fmt::Display for CorruptionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.kind, self.severity.0, self.seed)
    }
}

impl FromStr for CorruptionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [kind, severity, seed] = parts.as_slice() else {
            return Err(Error::InvalidArgument(format!(
                "corruption spec must be kind:severity:seed, got {s:?}"
            )));
        };
        let severity: i64 = severity
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad severity {severity:?}")))?;
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad seed {seed:?}")))?;
        CorruptionSpec::new(kind.parse()?, severity, seed)
    }
}

/// `round(ratio * original_count)` with half-away-from-zero rounding, in exact
/// integer arithmetic.
pub fn background_event_count(severity: Severity, original_count: usize) -> usize {
    let per_mille = BACKGROUND_PER_MILLE[severity.index()] as u128;
    ((2 * per_mille * original_count as u128 + 1000) / 2000) as usize
}

/// Adds uniformly distributed noise events to a copy of `stream`.
///
/// Each added event draws, in order, `x` in `[0, W)`, `y` in `[0, H)`, `t` in
/// `[t_first, t_last]` and a polarity (`below(2) == 1` is On). The result is
/// stably re-sorted by time, so original events precede added ones at equal
/// timestamps.
pub fn background_activity(stream: &EventStream, spec: &CorruptionSpec) -> Result<EventStream> {
    if spec.kind != CorruptionKind::BackgroundActivity {
        return Err(Error::WrongCorruptionKind {
            expected: CorruptionKind::BackgroundActivity.as_str(),
            found: spec.kind.as_str(),
        });
    }
    let (t_first, t_last) = stream.time_span().ok_or(Error::EmptyStream)?;
    let g = stream.geometry();
    let added = background_event_count(spec.severity, stream.len());
    let mut rng = CorruptionRng::new(spec.seed);
    let mut events = Vec::with_capacity(stream.len() + added);
    events.extend_from_slice(stream.events());
    for _ in 0..added {
        let x = rng.below(g.width() as u64) as u16;
        let y = rng.below(g.height() as u64) as u16;
        let t = rng.inclusive(t_first, t_last);
        let p = if rng.below(2) == 1 {
            Polarity::On
        } else {
            Polarity::Off
        };
        events.push(Event::new(x, y, t, p));
    }
    EventStream::new(g, events)
}

/// Half-open pixel box `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OcclusionBox {
    pub x0: u16,
    pub x1: u16,
    pub y0: u16,
    pub y1: u16,
}

impl OcclusionBox {
    pub fn contains(&self, x: u16, y: u16) -> bool {
        (self.x0..self.x1).contains(&x) && (self.y0..self.y1).contains(&y)
    }

    pub fn area(&self) -> usize {
        (self.x1 - self.x0) as usize * (self.y1 - self.y0) as usize
    }
}

/// Centred box whose sides are `p%` of each dimension, rounded half away from
/// zero; the origin is floored.
pub fn occlusion_box(geometry: SensorGeometry, severity: Severity) -> OcclusionBox {
    let percent = OCCLUSION_PERCENT[severity.index()];
    let span = |dim: u16| {
        let side = ((2 * percent * dim as u64 + 100) / 200) as u16;
        let origin = (dim - side) / 2;
        (origin, origin + side)
    };
    let (x0, x1) = span(geometry.width());
    let (y0, y1) = span(geometry.height());
    OcclusionBox { x0, x1, y0, y1 }
}

/// Drops every event inside the centred occlusion box. The seed is unused.
pub fn occlusion(stream: &EventStream, spec: &CorruptionSpec) -> Result<EventStream> {
    if spec.kind != CorruptionKind::Occlusion {
        return Err(Error::WrongCorruptionKind {
            expected: CorruptionKind::Occlusion.as_str(),
            found: spec.kind.as_str(),
        });
    }
    let area = occlusion_box(stream.geometry(), spec.severity);
    Ok(stream.filtered(|e| !area.contains(e.x, e.y)))
}
