//! PNG rendering of one- and two-channel frames.
//!
//! One channel renders as grayscale with `255 / max` scaling. Two channels
//! render as RGB on black, Off (channel 0) in red and On (channel 1) in green.
//! Values are clamped to `[0, max]` first.

use crate::error::{Error, Result};
use crate::repr::RepTensor;

/// `round(clamp(v, 0, max) * 255 / max)`.
pub fn intensity(value: f32, max: f32) -> u8 {
    let v = (value as f64).clamp(0.0, max as f64);
    (v * 255.0 / max as f64).round() as u8
}

pub fn render_png(tensor: &RepTensor, representable_max: f32) -> Result<Vec<u8>> {
    if representable_max.is_nan() || representable_max <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "representable maximum must be > 0, got {representable_max}"
        )));
    }
    let (channels, h, w) = tensor.shape();
    let (color, pixels) = match channels {
        1 => (
            png::ColorType::Grayscale,
            tensor
                .channel(0)
                .iter()
                .map(|&v| intensity(v, representable_max))
                .collect::<Vec<u8>>(),
        ),
        2 => {
            let (off, on) = (tensor.channel(0), tensor.channel(1));
            let rgb = off
                .iter()
                .zip(on)
                .flat_map(|(&r, &g)| {
                    [intensity(r, representable_max), intensity(g, representable_max), 0]
                })
                .collect();
            (png::ColorType::Rgb, rgb)
        }
        n => return Err(Error::TooManyChannels(n)),
    };
    let (width, height) = (
        u32::try_from(w).map_err(|_| Error::Png("image too wide".into()))?,
        u32::try_from(h).map_err(|_| Error::Png("image too tall".into()))?,
    );
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, width, height);
        encoder.set_color(color);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::Png(e.to_string()))?;
        writer
            .write_image_data(&pixels)
            .map_err(|e| Error::Png(e.to_string()))?;
    }
    Ok(out)
}
