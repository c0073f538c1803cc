//! Voxel grid with bilinear-in-time (triangular kernel) interpolation of
//! signed polarities.
//!
//! Timestamps are normalized to `t* = (B - 1)(t - t_first) / (t_last - t_first)`
//! and each event adds `p * max(0, 1 - |b - t*|)` to every bin `b`. Polarity is
//! folded into the sign, so the grid has `B` channels and no polarity split.

use super::{Layout, RepTensor, ReprKind};
use crate::error::{Error, Result};
use crate::event::EventStream;

/// Nonzero kernel weights for an event at normalized time `t_star`:
/// at most two `(bin, weight)` pairs summing to 1 when `t_star` lies in
/// `[0, bins - 1]`.
pub fn triangular_weights(t_star: f64, bins: usize) -> impl Iterator<Item = (usize, f64)> {
    let lower = t_star.floor();
    let frac = t_star - lower;
    let lower = lower as i64;
    [(lower, 1.0 - frac), (lower + 1, frac)]
        .into_iter()
        .filter(move |&(b, w)| w > 0.0 && b >= 0 && (b as usize) < bins)
        .map(|(b, w)| (b as usize, w))
}

pub fn voxel_grid(stream: &EventStream, bins: usize) -> Result<RepTensor> {
    if bins == 0 {
        return Err(Error::InvalidArgument("voxel grid needs >= 1 bin".into()));
    }
    let (t_first, t_last) = stream.time_span().ok_or(Error::EmptyStream)?;
    let g = stream.geometry();
    let (h, w) = (g.height() as usize, g.width() as usize);
    let duration = (t_last - t_first) as f64;
    let scale = if duration > 0.0 {
        (bins - 1) as f64 / duration
    } else {
        0.0
    };

    // Accumulate in f64, narrow once at the end.
    let mut acc = vec![0f64; bins * h * w];
    for e in stream.events() {
        let t_star = (e.t - t_first) as f64 * scale;
        let pixel = e.y as usize * w + e.x as usize;
        let sign = e.p.sign() as f64;
        for (b, weight) in triangular_weights(t_star, bins) {
            acc[b * h * w + pixel] += sign * weight;
        }
    }
    let mut tensor = RepTensor::zeros(bins, h, w, Layout::bins(bins));
    for (dst, src) in tensor.data_mut().iter_mut().zip(acc) {
        *dst = src as f32;
    }
    debug_assert_eq!(tensor.layout().kind, Some(ReprKind::VoxelGrid));
    Ok(tensor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{Event, Polarity, SensorGeometry};

    #[test]
    fn single_event_lands_in_bin_zero() {
        let g = SensorGeometry::new(4, 4).unwrap();
        let s = EventStream::new(g, vec![Event::new(2, 1, 77, Polarity::On)]).unwrap();
        let v = voxel_grid(&s, 10).unwrap();
        assert_eq!(v.shape(), (10, 4, 4));
        assert_eq!(v.at(0, 1, 2), 1.0);
        assert_eq!(v.data().iter().sum::<f32>(), 1.0);
    }

    #[test]
    fn half_way_between_bins() {
        // t* = 9 * 25 / 90 = 2.5
        let g = SensorGeometry::new(4, 4).unwrap();
        let s = EventStream::new(
            g,
            vec![
                Event::new(0, 0, 0, Polarity::Off),
                Event::new(3, 3, 25, Polarity::On),
                Event::new(0, 0, 90, Polarity::Off),
            ],
        )
        .unwrap();
        let v = voxel_grid(&s, 10).unwrap();
        assert_eq!(v.at(2, 3, 3), 0.5);
        assert_eq!(v.at(3, 3, 3), 0.5);
        assert_eq!(v.at(0, 0, 0), -1.0);
        assert_eq!(v.at(9, 0, 0), -1.0);
    }

    #[test]
    fn kernel_weights() {
        let w: Vec<_> = triangular_weights(2.5, 10).collect();
        assert_eq!(w, [(2, 0.5), (3, 0.5)]);
        let w: Vec<_> = triangular_weights(9.0, 10).collect();
        assert_eq!(w, [(9, 1.0)]);
        let w: Vec<_> = triangular_weights(0.0, 1).collect();
        assert_eq!(w, [(0, 1.0)]);
    }

    #[test]
    fn rejects_empty_and_zero_bins() {
        let g = SensorGeometry::new(2, 2).unwrap();
        assert_eq!(voxel_grid(&EventStream::empty(g), 3).unwrap_err(), Error::EmptyStream);
        let s = EventStream::new(g, vec![Event::new(0, 0, 0, Polarity::On)]).unwrap();
        assert!(voxel_grid(&s, 0).is_err());
    }
}
