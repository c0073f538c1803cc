//! Plain-text `x,y,t,p` event format.
//!
//! Lines starting with `#` and blank lines are ignored; LF and CRLF are both
//! accepted. Polarity may be `-1`, `0` or `1`, with `0` read as Off.

use std::fmt::Write;

use super::{Event, EventStream, Polarity, SensorGeometry};
use crate::error::{Error, LineError, Result};

pub const CSV_HEADER: &str = "# x,y,t,p";

pub fn parse_csv(text: &str, geometry: SensorGeometry) -> Result<EventStream> {
    let mut events = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let event = parse_line(line, geometry).map_err(|source| Error::Parse {
            line: i + 1,
            source,
        })?;
        events.push(event);
    }
    EventStream::new(geometry, events)
}

fn parse_line(line: &str, geometry: SensorGeometry) -> Result<Event, LineError> {
    const NAMES: [&str; 4] = ["x", "y", "t", "p"];
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != 4 {
        return Err(LineError::Arity(fields.len()));
    }
    let mut values = [0i128; 4];
    for ((slot, raw), field) in values.iter_mut().zip(&fields).zip(NAMES) {
        *slot = raw.parse().map_err(|_| LineError::NotInteger {
            field,
            value: raw.to_string(),
        })?;
    }
    let [x, y, t, p] = values;
    let p = match p {
        1 => Polarity::On,
        0 | -1 => Polarity::Off,
        other => return Err(LineError::Polarity(other)),
    };
    if !(0..=u64::MAX as i128).contains(&t) {
        return Err(LineError::FieldRange {
            field: "t",
            value: t,
        });
    }
    let in_bounds = (0..geometry.width() as i128).contains(&x)
        && (0..geometry.height() as i128).contains(&y);
    if !in_bounds {
        return Err(LineError::OutOfBounds {
            x,
            y,
            width: geometry.width(),
            height: geometry.height(),
        });
    }
    Ok(Event::new(x as u16, y as u16, t as u64, p))
}

/// Serializes with a header comment and LF line endings.
pub fn write_csv(stream: &EventStream) -> String {
    let mut out = String::with_capacity(16 * (stream.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for e in stream.events() {
        // Writing to a String cannot fail.
        let _ = writeln!(out, "{},{},{},{}", e.x, e.y, e.t, e.p.sign());
    }
    out
}
