use super::{Layout, RepTensor, ReprKind};
use crate::event::EventStream;

/// Per-pixel, per-polarity event counts over the whole stream (`2 x H x W`).
/// An empty stream yields an all-zero tensor.
pub fn event_histogram(stream: &EventStream) -> RepTensor {
    let g = stream.geometry();
    let mut tensor = RepTensor::zeros(2, g.height() as usize, g.width() as usize, Layout::frames(ReprKind::Histogram, 1));
    for e in stream.events() {
        *tensor.at_mut(e.p.channel(), e.y as usize, e.x as usize) += 1.0;
    }
    tensor
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{Event, Polarity, SensorGeometry};

    #[test]
    fn empty_stream_is_zero() {
        let g = SensorGeometry::new(3, 2).unwrap();
        let h = event_histogram(&EventStream::empty(g));
        assert_eq!(h.shape(), (2, 2, 3));
        assert!(h.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn counts_per_polarity() {
        let g = SensorGeometry::new(3, 3).unwrap();
        let mut events = vec![Event::new(1, 1, 0, Polarity::On); 3];
        events.extend(vec![Event::new(1, 1, 1, Polarity::Off); 2]);
        let h = event_histogram(&EventStream::new(g, events).unwrap());
        assert_eq!(h.at(1, 1, 1), 3.0);
        assert_eq!(h.at(0, 1, 1), 2.0);
        assert_eq!(h.data().iter().sum::<f32>(), 5.0);
    }
}
