use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::event::{plan_windows, EventStream, Polarity, SensorGeometry, WindowPlan};

/// `F x 2 x H x W` presence bits, one frame per window of `plan`.
///
/// Channel 0 holds Off events, channel 1 On events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryFrameStack {
    geometry: SensorGeometry,
    plan: WindowPlan,
    bits: BitVec<u64, Lsb0>,
}

impl BinaryFrameStack {
    pub const CHANNELS: usize = 2;

    pub fn frame_count(&self) -> usize {
        self.plan.num_windows()
    }

    pub fn geometry(&self) -> SensorGeometry {
        self.geometry
    }

    pub fn plan(&self) -> &WindowPlan {
        &self.plan
    }

    fn index(&self, frame: usize, p: Polarity, x: u16, y: u16) -> usize {
        let (w, h) = (self.geometry.width() as usize, self.geometry.height() as usize);
        ((frame * Self::CHANNELS + p.channel()) * h + y as usize) * w + x as usize
    }

    pub fn get(&self, frame: usize, p: Polarity, x: u16, y: u16) -> bool {
        self.bits[self.index(frame, p, x, y)]
    }

    /// Number of set bits across all frames and channels.
    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }

    /// All bits in frame-major, channel, row, column order.
    pub fn bits(&self) -> &BitSlice<u64, Lsb0> {
        &self.bits
    }
}

/// Binary event images over `frames` equal-duration windows.
pub fn binary_event_images(stream: &EventStream, frames: usize) -> Result<BinaryFrameStack> {
    let plan = plan_windows(stream, frames)?;
    binary_event_images_with_plan(stream, plan)
}

pub fn binary_event_images_with_plan(
    stream: &EventStream,
    plan: WindowPlan,
) -> Result<BinaryFrameStack> {
    if stream.is_empty() {
        return Err(Error::EmptyStream);
    }
    let geometry = stream.geometry();
    let len = plan.num_windows() * BinaryFrameStack::CHANNELS * geometry.pixels();
    let mut stack = BinaryFrameStack {
        geometry,
        plan,
        bits: bitvec![u64, Lsb0; 0; len],
    };
    for e in stream.events() {
        let idx = stack.index(stack.plan.window_of(e.t), e.p, e.x, e.y);
        stack.bits.set(idx, true);
    }
    Ok(stack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::Event;

    fn geometry() -> SensorGeometry {
        SensorGeometry::new(8, 6).unwrap()
    }

    #[test]
    fn single_event_sets_one_bit() {
        let s = EventStream::new(geometry(), vec![Event::new(3, 4, 10, Polarity::On)]).unwrap();
        let stack = binary_event_images(&s, 1).unwrap();
        assert_eq!(stack.frame_count(), 1);
        assert_eq!(stack.count_ones(), 1);
        assert!(stack.get(0, Polarity::On, 3, 4));
        assert!(!stack.get(0, Polarity::Off, 3, 4));
        // [frame 0, channel 1, row 4, col 3]
        assert!(stack.bits()[(6 + 4) * 8 + 3]);
    }

    #[test]
    fn duplicates_saturate() {
        let one = EventStream::new(geometry(), vec![Event::new(2, 2, 5, Polarity::Off)]).unwrap();
        let many =
            EventStream::new(geometry(), vec![Event::new(2, 2, 5, Polarity::Off); 100]).unwrap();
        assert_eq!(
            binary_event_images(&one, 3).unwrap(),
            binary_event_images(&many, 3).unwrap()
        );
    }

    #[test]
    fn empty_stream_rejected() {
        assert_eq!(
            binary_event_images(&EventStream::empty(geometry()), 2).unwrap_err(),
            Error::EmptyStream
        );
    }

    #[test]
    fn events_split_across_frames() {
        let s = EventStream::new(
            geometry(),
            vec![
                Event::new(0, 0, 0, Polarity::On),
                Event::new(1, 0, 99, Polarity::On),
                Event::new(2, 0, 100, Polarity::Off),
            ],
        )
        .unwrap();
        let stack = binary_event_images(&s, 2).unwrap();
        assert!(stack.get(0, Polarity::On, 0, 0));
        assert!(stack.get(1, Polarity::On, 1, 0));
        assert!(stack.get(1, Polarity::Off, 2, 0));
        assert_eq!(stack.count_ones(), 3);
    }
}
