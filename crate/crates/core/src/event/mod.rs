//! Event data model and stream codecs.
//!
//! An [`EventStream`] is always time-sorted and bounds-checked against its
//! [`SensorGeometry`]; every constructor enforces that, so downstream code can
//! rely on it without re-validating.

mod csv;
mod nmnist;
mod window;

pub use self::csv::{parse_csv, write_csv};
pub use self::nmnist::{encode_nmnist, parse_nmnist, NMNIST_EVENT_BYTES};
pub use self::window::{plan_windows, plan_windows_with, slice, WindowPlan, WindowPolicy};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign of a brightness change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Off,
    On,
}

impl Polarity {
    /// `-1` for Off, `+1` for On.
    pub fn sign(self) -> i8 {
        match self {
            Polarity::Off => -1,
            Polarity::On => 1,
        }
    }

    /// Channel index in two-channel frames: Off = 0, On = 1.
    pub fn channel(self) -> usize {
        match self {
            Polarity::Off => 0,
            Polarity::On => 1,
        }
    }

    pub fn from_channel(channel: usize) -> Option<Self> {
        match channel {
            0 => Some(Polarity::Off),
            1 => Some(Polarity::On),
            _ => None,
        }
    }
}

/// One polarity change at a pixel. `t` is in microseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub x: u16,
    pub y: u16,
    pub t: u64,
    pub p: Polarity,
}

impl Event {
    pub fn new(x: u16, y: u16, t: u64, p: Polarity) -> Self {
        Self { x, y, t, p }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SensorGeometry {
    width: u16,
    height: u16,
}

impl SensorGeometry {
    pub fn new(width: u16, height: u16) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!(
                "sensor geometry must be at least 1x1, got {width}x{height}"
            )));
        }
        Ok(Self { width, height })
    }

    /// The 34x34 N-MNIST sensor.
    pub const NMNIST: SensorGeometry = SensorGeometry {
        width: 34,
        height: 34,
    };

    pub fn width(&self) -> u16 {
        self.width
    }

    pub fn height(&self) -> u16 {
        self.height
    }

    pub fn pixels(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        x < self.width as u32 && y < self.height as u32
    }
}

/// Time-sorted events from one sensor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventStream {
    geometry: SensorGeometry,
    events: Vec<Event>,
}

impl EventStream {
    /// Validates bounds and stably sorts by timestamp, so events sharing a
    /// timestamp keep their input order.
    pub fn new(geometry: SensorGeometry, mut events: Vec<Event>) -> Result<Self> {
        if let Some((index, e)) = events
            .iter()
            .enumerate()
            .find(|(_, e)| !geometry.contains(e.x as u32, e.y as u32))
        {
            return Err(Error::OutOfBounds {
                index,
                x: e.x as u32,
                y: e.y as u32,
                width: geometry.width,
                height: geometry.height,
            });
        }
        if !events.windows(2).all(|w| w[0].t <= w[1].t) {
            events.sort_by_key(|e| e.t);
        }
        Ok(Self { geometry, events })
    }

    pub fn empty(geometry: SensorGeometry) -> Self {
        Self {
            geometry,
            events: Vec::new(),
        }
    }

    /// Keeps the events matching `keep`; order and geometry are preserved.
    pub fn filtered(&self, mut keep: impl FnMut(&Event) -> bool) -> Self {
        Self {
            geometry: self.geometry,
            events: self.events.iter().copied().filter(|e| keep(e)).collect(),
        }
    }

    pub fn geometry(&self) -> SensorGeometry {
        self.geometry
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// `(t_first, t_last)`, or `None` for an empty stream.
    pub fn time_span(&self) -> Option<(u64, u64)> {
        Some((self.events.first()?.t, self.events.last()?.t))
    }

    /// Σ p_i over the stream.
    pub fn polarity_sum(&self) -> i64 {
        self.events.iter().map(|e| e.p.sign() as i64).sum()
    }
}
