//! Relative Accuracy Drop and frame sparsity statistics.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::corrupt::{CorruptionKind, Severity};
use crate::error::{Error, Result};
use crate::event::EventStream;
use crate::repr::{RepTensor, ReprConfig, ReprKind};

/// `(acc_clean - acc_corrupt) / acc_clean * 100`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadScore {
    pub acc_clean: f64,
    pub acc_corrupt: f64,
    pub score: f64,
}

/// Relative Accuracy Drop in percent. Negative when the corruption helped.
pub fn relative_accuracy_drop(acc_clean: f64, acc_corrupt: f64) -> Result<RadScore> {
    if !(acc_clean > 0.0 && acc_clean.is_finite()) {
        return Err(Error::InvalidAccuracy(acc_clean));
    }
    if !(acc_corrupt >= 0.0 && acc_corrupt.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "corrupted accuracy must be finite and >= 0, got {acc_corrupt}"
        )));
    }
    Ok(RadScore {
        acc_clean,
        acc_corrupt,
        score: (acc_clean - acc_corrupt) / acc_clean * 100.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadRow {
    pub corruption: CorruptionKind,
    pub severity: Severity,
    pub rad: RadScore,
}

pub const RAD_CSV_HEADER: &str = "corruption,severity,acc_clean,acc_corrupt,score";

pub fn write_rad_csv(rows: &[RadRow]) -> String {
    let mut out = String::from(RAD_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.corruption,
            r.severity.level(),
            r.rad.acc_clean,
            r.rad.acc_corrupt,
            r.rad.score
        );
    }
    out
}

/// Sparsity and saturation of a tensor, counted over every channel and pixel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameStats {
    /// Fraction of nonzero entries.
    pub density: f64,
    /// Fraction of entries whose magnitude reaches the representable maximum.
    pub saturation: f64,
    /// Mean popcount of `round(|v|)` over nonzero entries; 0 when all are zero.
    pub mean_bits: f64,
}

pub fn frame_stats(tensor: &RepTensor, representable_max: f32) -> Result<FrameStats> {
    if representable_max.is_nan() || representable_max <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "representable maximum must be > 0, got {representable_max}"
        )));
    }
    let total = tensor.data().len();
    if total == 0 {
        return Ok(FrameStats {
            density: 0.0,
            saturation: 0.0,
            mean_bits: 0.0,
        });
    }
    let (mut nonzero, mut saturated, mut bits) = (0usize, 0usize, 0u64);
    for &v in tensor.data() {
        if v != 0.0 {
            nonzero += 1;
            bits += (v.abs().round() as u64).count_ones() as u64;
            if v.abs() >= representable_max {
                saturated += 1;
            }
        }
    }
    Ok(FrameStats {
        density: nonzero as f64 / total as f64,
        saturation: saturated as f64 / total as f64,
        mean_bits: if nonzero == 0 {
            0.0
        } else {
            bits as f64 / nonzero as f64
        },
    })
}

/// Largest value `config` can produce: 1 for binary images, `2^N - 1` for
/// Bina-Rep (1 when normalized). Histograms and voxel grids are unbounded, so
/// their observed peak magnitude is used (at least 1).
pub fn representable_max(config: &ReprConfig, tensor: &RepTensor) -> f32 {
    match config.kind {
        ReprKind::BinaryImages => 1.0,
        ReprKind::BinaRep if config.normalize => 1.0,
        ReprKind::BinaRep => (u32::MAX >> (32 - config.bit_depth)) as f32,
        ReprKind::Histogram | ReprKind::VoxelGrid => tensor
            .data()
            .iter()
            .fold(0f32, |m, v| m.max(v.abs()))
            .max(1.0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub config: ReprConfig,
    pub channels: usize,
    pub stats: FrameStats,
}

/// One row per configuration, in the order given.
pub fn compare_representations(
    stream: &EventStream,
    configs: &[ReprConfig],
) -> Result<Vec<StatsRow>> {
    configs
        .iter()
        .map(|config| {
            let tensor = config.convert(stream)?;
            let stats = frame_stats(&tensor, representable_max(config, &tensor))?;
            Ok(StatsRow {
                config: *config,
                channels: tensor.channels(),
                stats,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corrupt::{occlusion, CorruptionSpec};
    use crate::event::{Event, Polarity, SensorGeometry};
    use crate::repr::{bina_rep, binary_event_images, BitOrder, Layout};
    use proptest::prelude::*;

    #[test]
    fn rad_examples() {
        assert_eq!(relative_accuracy_drop(92.04, 92.04).unwrap().score, 0.0);
        let s = relative_accuracy_drop(92.04, 82.836).unwrap().score;
        assert!((s - 10.0).abs() < 1e-9, "{s}");
        assert_eq!(relative_accuracy_drop(50.0, 75.0).unwrap().score, -50.0);
    }

    #[test]
    fn rad_rejects_bad_clean() {
        assert_eq!(
            relative_accuracy_drop(0.0, 10.0),
            Err(Error::InvalidAccuracy(0.0))
        );
        assert!(relative_accuracy_drop(-1.0, 10.0).is_err());
        assert!(relative_accuracy_drop(f64::NAN, 10.0).is_err());
        assert!(relative_accuracy_drop(90.0, -1.0).is_err());
    }

    #[test]
    fn rad_csv_layout() {
        let rows = [RadRow {
            corruption: CorruptionKind::Occlusion,
            severity: Severity::new(2).unwrap(),
            rad: relative_accuracy_drop(80.0, 60.0).unwrap(),
        }];
        assert_eq!(
            write_rad_csv(&rows),
            "corruption,severity,acc_clean,acc_corrupt,score\nocclusion,2,80,60,25\n"
        );
    }

    proptest! {
        #[test]
        fn rad_scale_invariant(a in 1.0f64..100.0, b in 0.0f64..100.0, k in 0.01f64..100.0) {
            let base = relative_accuracy_drop(a, b).unwrap().score;
            let scaled = relative_accuracy_drop(k * a, k * b).unwrap().score;
            prop_assert!((base - scaled).abs() <= 1e-9 * base.abs().max(1.0));
        }

        #[test]
        fn rad_clean_vs_clean_is_zero(a in 1e-6f64..100.0) {
            prop_assert_eq!(relative_accuracy_drop(a, a).unwrap().score, 0.0);
        }
    }

    fn tensor(values: Vec<f32>) -> RepTensor {
        let n = values.len();
        RepTensor::from_vec(1, 1, n, values, Layout::unknown()).unwrap()
    }

    #[test]
    fn stats_extremes() {
        let zero = frame_stats(&tensor(vec![0.0; 8]), 255.0).unwrap();
        assert_eq!((zero.density, zero.saturation, zero.mean_bits), (0.0, 0.0, 0.0));
        let full = frame_stats(&tensor(vec![255.0; 8]), 255.0).unwrap();
        assert_eq!((full.density, full.saturation, full.mean_bits), (1.0, 1.0, 8.0));
        let mixed = frame_stats(&tensor(vec![0.0, 1.0, 3.0, 255.0]), 255.0).unwrap();
        assert_eq!(mixed.density, 0.75);
        assert_eq!(mixed.saturation, 0.25);
        assert_eq!(mixed.mean_bits, (1.0 + 2.0 + 8.0) / 3.0);
        assert!(frame_stats(&tensor(vec![1.0]), 0.0).is_err());
    }

    fn single_event_stream() -> EventStream {
        let g = SensorGeometry::new(6, 5).unwrap();
        EventStream::new(g, vec![Event::new(2, 3, 40, Polarity::On)]).unwrap()
    }

    #[test]
    fn single_event_density_per_representation() {
        let s = single_event_stream();
        let configs = ReprConfig::evaluation_set();
        let rows = compare_representations(&s, &configs).unwrap();
        assert_eq!(rows.len(), configs.len());
        for row in rows {
            let expected = 1.0 / (30 * row.channels) as f64;
            assert_eq!(row.stats.density, expected, "{}", row.config);
        }
    }

    #[test]
    fn occluded_histogram_is_empty() {
        let g = SensorGeometry::new(10, 10).unwrap();
        let s = EventStream::new(g, vec![Event::new(5, 5, 0, Polarity::On)]).unwrap();
        let occluded = occlusion(&s, &"occlusion:5:0".parse::<CorruptionSpec>().unwrap()).unwrap();
        assert!(occluded.is_empty());
        let rows = compare_representations(&occluded, &[ReprConfig::histogram()]).unwrap();
        assert_eq!(rows[0].stats.density, 0.0);
        assert!(compare_representations(&occluded, &[ReprConfig::bina_rep(1, 8)]).is_err());
    }

    #[test]
    fn packing_preserves_support() {
        let g = SensorGeometry::new(7, 7).unwrap();
        let events = (0..60u64)
            .map(|i| {
                let p = if i % 3 == 0 { Polarity::Off } else { Polarity::On };
                Event::new((i * 5 % 7) as u16, (i * 3 % 7) as u16, i * i, p)
            })
            .collect();
        let s = EventStream::new(g, events).unwrap();
        let packed = bina_rep(&s, 2, 8, BitOrder::EarlyMsb).unwrap();
        let stack = binary_event_images(&s, 16).unwrap();
        let packed_tensor = crate::repr::assemble_tensor(crate::repr::RepOutput::BinaRep(packed), false);
        // Logical OR of each group of 8 source frames.
        let plane = 2 * 49;
        let mut or = vec![0f32; 2 * plane];
        for f in 0..16 {
            for i in 0..plane {
                if stack.bits()[f * plane + i] {
                    or[(f / 8) * plane + i] = 1.0;
                }
            }
        }
        let or = RepTensor::from_vec(4, 7, 7, or, Layout::unknown()).unwrap();
        assert_eq!(
            frame_stats(&packed_tensor, 255.0).unwrap().density,
            frame_stats(&or, 1.0).unwrap().density
        );
    }
}
