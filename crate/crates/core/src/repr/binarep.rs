//! Bina-Rep frames: N consecutive binary event images packed into one N-bit
//! integer per pixel and polarity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{plan_windows, EventStream, Polarity, SensorGeometry, WindowPlan};

pub const MAX_BIT_DEPTH: u32 = 32;

/// Which sub-window feeds the most significant bit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BitOrder {
    /// Sub-window `i` of `N` sets bit `N - 1 - i`.
    #[default]
    EarlyMsb,
    /// Sub-window `i` of `N` sets bit `i`.
    EarlyLsb,
}

impl BitOrder {
    pub fn shift(self, sub_window: u32, bit_depth: u32) -> u32 {
        match self {
            BitOrder::EarlyMsb => bit_depth - 1 - sub_window,
            BitOrder::EarlyLsb => sub_window,
        }
    }
}

/// One `2 x H x W` frame of N-bit values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaRepFrame {
    geometry: SensorGeometry,
    bit_depth: u32,
    values: Vec<u32>,
}

impl BinaRepFrame {
    pub const CHANNELS: usize = 2;

    pub fn geometry(&self) -> SensorGeometry {
        self.geometry
    }

    pub fn bit_depth(&self) -> u32 {
        self.bit_depth
    }

    /// `2^N - 1`.
    pub fn max_value(&self) -> u32 {
        max_value(self.bit_depth)
    }

    pub fn get(&self, p: Polarity, x: u16, y: u16) -> u32 {
        self.values[self.index(p.channel(), x, y)]
    }

    /// Values in channel, row, column order.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    fn index(&self, channel: usize, x: u16, y: u16) -> usize {
        let (w, h) = (self.geometry.width() as usize, self.geometry.height() as usize);
        (channel * h + y as usize) * w + x as usize
    }
}

pub(crate) fn max_value(bit_depth: u32) -> u32 {
    u32::MAX >> (32 - bit_depth)
}

fn check_bit_depth(bit_depth: u32) -> Result<()> {
    if !(1..=MAX_BIT_DEPTH).contains(&bit_depth) {
        return Err(Error::InvalidArgument(format!(
            "bit depth must be in 1..={MAX_BIT_DEPTH}, got {bit_depth}"
        )));
    }
    Ok(())
}

/// `frames` Bina-Rep frames of `bit_depth` bits each, built from
/// `frames * bit_depth` equal-duration sub-windows.
pub fn bina_rep(
    stream: &EventStream,
    frames: usize,
    bit_depth: u32,
    order: BitOrder,
) -> Result<Vec<BinaRepFrame>> {
    check_bit_depth(bit_depth)?;
    let sub_windows = frames
        .checked_mul(bit_depth as usize)
        .ok_or_else(|| Error::InvalidArgument("frames * bit depth overflows".into()))?;
    let plan = plan_windows(stream, sub_windows)?;
    bina_rep_with_plan(stream, &plan, bit_depth, order)
}

/// Packs events using an explicit sub-window plan, whose window count must be
/// a multiple of `bit_depth`.
pub fn bina_rep_with_plan(
    stream: &EventStream,
    plan: &WindowPlan,
    bit_depth: u32,
    order: BitOrder,
) -> Result<Vec<BinaRepFrame>> {
    check_bit_depth(bit_depth)?;
    if stream.is_empty() {
        return Err(Error::EmptyStream);
    }
    let depth = bit_depth as usize;
    if plan.num_windows() == 0 || !plan.num_windows().is_multiple_of(depth) {
        return Err(Error::InvalidArgument(format!(
            "{} sub-windows cannot be grouped into {bit_depth}-bit frames",
            plan.num_windows()
        )));
    }
    let geometry = stream.geometry();
    let blank = BinaRepFrame {
        geometry,
        bit_depth,
        values: vec![0; BinaRepFrame::CHANNELS * geometry.pixels()],
    };
    let mut frames = vec![blank; plan.num_windows() / depth];
    for e in stream.events() {
        let sub = plan.window_of(e.t);
        let frame = &mut frames[sub / depth];
        let idx = frame.index(e.p.channel(), e.x, e.y);
        frame.values[idx] |= 1 << order.shift((sub % depth) as u32, bit_depth);
    }
    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::Event;

    fn geometry() -> SensorGeometry {
        SensorGeometry::new(4, 4).unwrap()
    }

    /// Stream spanning t = 0..=80 so eight sub-windows are [0,10), ..., [70,80].
    /// An anchor event at another pixel pins the span.
    fn stream_with_bits(pattern: [bool; 8]) -> EventStream {
        let mut events = vec![
            Event::new(3, 3, 0, Polarity::Off),
            Event::new(3, 3, 80, Polarity::Off),
        ];
        for (i, on) in pattern.iter().enumerate() {
            if *on {
                events.push(Event::new(1, 2, i as u64 * 10 + 5, Polarity::On));
            }
        }
        EventStream::new(geometry(), events).unwrap()
    }

    #[test]
    fn first_sub_window_is_msb() {
        let s = stream_with_bits([true, false, false, false, false, false, false, false]);
        let f = bina_rep(&s, 1, 8, BitOrder::EarlyMsb).unwrap();
        assert_eq!(f[0].get(Polarity::On, 1, 2), 128);
    }

    #[test]
    fn saturated_and_empty_pixels() {
        let s = stream_with_bits([true; 8]);
        let f = bina_rep(&s, 1, 8, BitOrder::EarlyMsb).unwrap();
        assert_eq!(f[0].get(Polarity::On, 1, 2), 255);
        assert_eq!(f[0].get(Polarity::On, 0, 0), 0);
        assert_eq!(f[0].get(Polarity::Off, 1, 2), 0);
    }

    #[test]
    fn pattern_10110001() {
        let s = stream_with_bits([true, false, true, true, false, false, false, true]);
        let f = bina_rep(&s, 1, 8, BitOrder::EarlyMsb).unwrap();
        // 128 + 32 + 16 + 1
        assert_eq!(f[0].get(Polarity::On, 1, 2), 177);
        let lsb = bina_rep(&s, 1, 8, BitOrder::EarlyLsb).unwrap();
        // bit-reversed 10001101
        assert_eq!(lsb[0].get(Polarity::On, 1, 2), 0b1000_1101);
    }

    #[test]
    fn anchors_fill_first_and_last_bits() {
        let s = stream_with_bits([false; 8]);
        let f = bina_rep(&s, 1, 8, BitOrder::EarlyMsb).unwrap();
        assert_eq!(f[0].get(Polarity::Off, 3, 3), 0b1000_0001);
    }

    #[test]
    fn bit_depth_bounds() {
        let s = stream_with_bits([true; 8]);
        assert!(bina_rep(&s, 1, 0, BitOrder::EarlyMsb).is_err());
        assert!(bina_rep(&s, 1, 33, BitOrder::EarlyMsb).is_err());
        let f = bina_rep(&s, 1, 32, BitOrder::EarlyMsb).unwrap();
        assert_eq!(f[0].max_value(), u32::MAX);
        assert_eq!(max_value(1), 1);
        assert_eq!(max_value(8), 255);
    }

    #[test]
    fn empty_stream_rejected() {
        assert_eq!(
            bina_rep(&EventStream::empty(geometry()), 1, 8, BitOrder::EarlyMsb).unwrap_err(),
            Error::EmptyStream
        );
    }

    #[test]
    fn multiple_frames() {
        let s = stream_with_bits([true, true, false, false, true, false, false, true]);
        let f = bina_rep(&s, 2, 4, BitOrder::EarlyMsb).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].get(Polarity::On, 1, 2), 0b1100);
        assert_eq!(f[1].get(Polarity::On, 1, 2), 0b1001);
    }
}
