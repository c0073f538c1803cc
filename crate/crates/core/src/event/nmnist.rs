//! N-MNIST `.bin` codec.
//!
//! Each event is 5 bytes:
//!
//! ```text
//! byte 0      x
//! byte 1      y
//! byte 2      bit 7: polarity (1 = On, 0 = Off), bits 6..0: timestamp bits 22..16
//! bytes 3..4  timestamp bits 15..0, big-endian
//! ```

use super::{Event, EventStream, Polarity, SensorGeometry};
use crate::error::{Error, Result};

pub const NMNIST_EVENT_BYTES: usize = 5;

const MAX_TIMESTAMP: u64 = (1 << 23) - 1;

pub fn parse_nmnist(bytes: &[u8], geometry: SensorGeometry) -> Result<EventStream> {
    if !bytes.len().is_multiple_of(NMNIST_EVENT_BYTES) {
        return Err(Error::MalformedFile(format!(
            "length {} is not a multiple of {NMNIST_EVENT_BYTES}",
            bytes.len()
        )));
    }
    let mut events = Vec::with_capacity(bytes.len() / NMNIST_EVENT_BYTES);
    for (index, rec) in bytes.chunks_exact(NMNIST_EVENT_BYTES).enumerate() {
        let (x, y) = (rec[0] as u32, rec[1] as u32);
        if !geometry.contains(x, y) {
            return Err(Error::OutOfBounds {
                index,
                x,
                y,
                width: geometry.width(),
                height: geometry.height(),
            });
        }
        let p = if rec[2] & 0x80 != 0 {
            Polarity::On
        } else {
            Polarity::Off
        };
        let t = ((rec[2] & 0x7f) as u64) << 16 | (rec[3] as u64) << 8 | rec[4] as u64;
        events.push(Event::new(x as u16, y as u16, t, p));
    }
    EventStream::new(geometry, events)
}

/// Inverse of [`parse_nmnist`]. Fails on coordinates above 255 or timestamps
/// that do not fit the 23-bit field.
pub fn encode_nmnist(stream: &EventStream) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(stream.len() * NMNIST_EVENT_BYTES);
    for (i, e) in stream.events().iter().enumerate() {
        if e.x > 0xff || e.y > 0xff || e.t > MAX_TIMESTAMP {
            return Err(Error::InvalidArgument(format!(
                "event {i} ({}, {}, t={}) does not fit the N-MNIST layout",
                e.x, e.y, e.t
            )));
        }
        let pol = if e.p == Polarity::On { 0x80 } else { 0 };
        out.extend_from_slice(&[
            e.x as u8,
            e.y as u8,
            pol | (e.t >> 16) as u8,
            (e.t >> 8) as u8,
            e.t as u8,
        ]);
    }
    Ok(out)
}
