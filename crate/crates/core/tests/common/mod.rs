//! Test-only generators and brute-force oracles. Nothing here calls the
//! windowing or packing code under test.
#![allow(dead_code)]

use binarep_core::event::{Event, EventStream, Polarity, SensorGeometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random stream on a sensor of at most `max_side` x `max_side` with
/// `1..=max_events` events. Timestamps mix wide spans, narrow spans (many
/// ties) and the occasional zero-duration stream.
pub fn random_stream(rng: &mut ChaCha8Rng, max_side: u16, max_events: usize) -> EventStream {
    let g = SensorGeometry::new(rng.random_range(1..=max_side), rng.random_range(1..=max_side))
        .unwrap();
    let n = rng.random_range(1..=max_events);
    let span: u64 = match rng.random_range(0..10) {
        0 => 0,
        1 => rng.random_range(1..20),
        _ => rng.random_range(20..2_000_000),
    };
    let base: u64 = rng.random_range(0..1_000_000);
    let events = (0..n)
        .map(|_| {
            Event::new(
                rng.random_range(0..g.width()),
                rng.random_range(0..g.height()),
                base + rng.random_range(0..=span),
                if rng.random_bool(0.5) { Polarity::On } else { Polarity::Off },
            )
        })
        .collect();
    EventStream::new(g, events).unwrap()
}

/// Window of `t` under equal-duration windowing, by scanning the rational
/// interval conditions `w * D <= (t - t0) * count < (w + 1) * D`.
pub fn oracle_window(t: u64, t0: u64, t1: u64, count: usize) -> usize {
    if t0 == t1 {
        return 0;
    }
    let d = (t1 - t0) as u128;
    let x = (t - t0) as u128 * count as u128;
    (0..count)
        .find(|&w| {
            let lo = w as u128 * d;
            let hi = (w as u128 + 1) * d;
            (lo <= x && x < hi) || (w == count - 1 && t == t1)
        })
        .expect("every in-span timestamp has a window")
}

/// `[frame][channel][y][x]` presence bits.
pub type Bits = Vec<Vec<Vec<Vec<bool>>>>;

pub fn oracle_binary(stream: &EventStream, frames: usize) -> Bits {
    let g = stream.geometry();
    let (w, h) = (g.width() as usize, g.height() as usize);
    let mut bits = vec![vec![vec![vec![false; w]; h]; 2]; frames];
    let (t0, t1) = (stream.events()[0].t, stream.events()[stream.len() - 1].t);
    for e in stream.events() {
        let f = oracle_window(e.t, t0, t1, frames);
        let c = if e.p == Polarity::On { 1 } else { 0 };
        bits[f][c][e.y as usize][e.x as usize] = true;
    }
    bits
}

/// Packs groups of `n` frames into positional binary numbers, earliest frame
/// most significant, using powers of two rather than shifts.
pub fn oracle_pack(bits: &Bits, n: usize) -> Vec<Vec<Vec<Vec<u64>>>> {
    let groups = bits.len() / n;
    let (c, h, w) = (bits[0].len(), bits[0][0].len(), bits[0][0][0].len());
    let mut out = vec![vec![vec![vec![0u64; w]; h]; c]; groups];
    for (k, frame) in out.iter_mut().enumerate() {
        for ch in 0..c {
            for y in 0..h {
                for x in 0..w {
                    frame[ch][y][x] = (0..n)
                        .map(|i| bits[k * n + i][ch][y][x] as u64 * 2u64.pow((n - 1 - i) as u32))
                        .sum();
                }
            }
        }
    }
    out
}

/// Voxel grid evaluated term by term: every event contributes
/// `p * max(0, 1 - |b - t*|)` to every bin.
pub fn oracle_voxel(stream: &EventStream, bins: usize) -> Vec<f64> {
    let g = stream.geometry();
    let (w, h) = (g.width() as usize, g.height() as usize);
    let (t0, t1) = (stream.events()[0].t, stream.events()[stream.len() - 1].t);
    let mut grid = vec![0f64; bins * h * w];
    for e in stream.events() {
        let t_star = if t1 == t0 {
            0.0
        } else {
            (bins - 1) as f64 * (e.t - t0) as f64 / (t1 - t0) as f64
        };
        for b in 0..bins {
            let weight = (1.0 - (b as f64 - t_star).abs()).max(0.0);
            grid[(b * h + e.y as usize) * w + e.x as usize] += e.p.sign() as f64 * weight;
        }
    }
    grid
}

/// Occlusion box computed in floating point: side `round(p / 100 * dim)`,
/// origin `floor((dim - side) / 2)`.
pub fn oracle_in_box(x: u16, y: u16, w: u16, h: u16, percent: f64) -> bool {
    let side = |dim: u16| (percent * dim as f64 / 100.0).round() as i64;
    let (bw, bh) = (side(w), side(h));
    let (x0, y0) = ((w as i64 - bw).div_euclid(2), (h as i64 - bh).div_euclid(2));
    (x0..x0 + bw).contains(&(x as i64)) && (y0..y0 + bh).contains(&(y as i64))
}
