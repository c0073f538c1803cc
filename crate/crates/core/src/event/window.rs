use serde::{Deserialize, Serialize};

use super::EventStream;
use crate::error::{Error, Result};

/// How window boundaries are placed over a stream.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowPolicy {
    /// Windows of equal duration over `[t_first, t_last]`.
    #[default]
    EqualDuration,
    /// Windows holding (as nearly as timestamp ties allow) equal event counts.
    EqualCount,
}

/// `num_windows + 1` boundaries. Window `i` is `[b[i], b[i+1])`, except the
/// last window, which is closed on the right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPlan {
    boundaries: Vec<u64>,
}

impl WindowPlan {
    pub fn from_boundaries(boundaries: Vec<u64>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidArgument(
                "a window plan needs at least two boundaries".into(),
            ));
        }
        if !boundaries.windows(2).all(|w| w[0] <= w[1]) {
            return Err(Error::InvalidArgument(
                "window boundaries must be non-decreasing".into(),
            ));
        }
        Ok(Self { boundaries })
    }

    pub fn num_windows(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn boundaries(&self) -> &[u64] {
        &self.boundaries
    }

    /// Index of the window holding `t`. Timestamps before the first boundary
    /// land in window 0 and timestamps after the last in the final window.
    pub fn window_of(&self, t: u64) -> usize {
        let interior = &self.boundaries[1..self.boundaries.len() - 1];
        interior.partition_point(|&b| b <= t)
    }
}

/// Equal-duration plan with `count` windows.
pub fn plan_windows(stream: &EventStream, count: usize) -> Result<WindowPlan> {
    plan_windows_with(stream, count, WindowPolicy::EqualDuration)
}

pub fn plan_windows_with(
    stream: &EventStream,
    count: usize,
    policy: WindowPolicy,
) -> Result<WindowPlan> {
    if count == 0 {
        return Err(Error::InvalidArgument("window count must be >= 1".into()));
    }
    let (t_first, t_last) = stream.time_span().ok_or(Error::EmptyStream)?;
    if t_first == t_last {
        // Zero duration: window 0 is [t, t+1), the rest are empty.
        let mut boundaries = vec![t_first.saturating_add(1); count + 1];
        boundaries[0] = t_first;
        return WindowPlan::from_boundaries(boundaries);
    }
    let boundaries = match policy {
        WindowPolicy::EqualDuration => {
            // b_i = t_first + ceil(i * D / count). For integer t this puts t in
            // window floor((t - t_first) * count / D), clamped to count - 1.
            let duration = (t_last - t_first) as u128;
            let count_wide = count as u128;
            (0..=count)
                .map(|i| t_first + (i as u128 * duration).div_ceil(count_wide) as u64)
                .collect()
        }
        WindowPolicy::EqualCount => {
            let events = stream.events();
            let n = events.len();
            let mut boundaries = Vec::with_capacity(count + 1);
            boundaries.push(t_first);
            for i in 1..count {
                let idx = (i * n).div_ceil(count);
                boundaries.push(events[idx.min(n - 1)].t);
            }
            boundaries.push(t_last);
            boundaries
        }
    };
    WindowPlan::from_boundaries(boundaries)
}

/// Splits `stream` by `plan`. Concatenating the slices yields the input.
pub fn slice(stream: &EventStream, plan: &WindowPlan) -> Vec<EventStream> {
    let mut buckets = vec![Vec::new(); plan.num_windows()];
    for e in stream.events() {
        buckets[plan.window_of(e.t)].push(*e);
    }
    buckets
        .into_iter()
        .map(|events| EventStream {
            geometry: stream.geometry(),
            events,
        })
        .collect()
}
