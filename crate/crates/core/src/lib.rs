//! Event-camera stream tooling built around Bina-Rep event frames.
//!
//! The crate turns asynchronous `(x, y, t, p)` event streams into dense
//! frame tensors and provides the surrounding machinery needed to evaluate
//! them:
//!
//! - [`event`]: the event data model, N-MNIST / CSV codecs and temporal
//!   windowing.
//! - [`repr`]: binary event images, Bina-Rep N-bit frames, event histograms,
//!   voxel grids and channel-concatenated tensor assembly.
//! - [`corrupt`]: seeded background-activity injection and centred
//!   occlusion at five severity levels.
//! - [`metrics`]: Relative Accuracy Drop and frame sparsity statistics.
//! - [`export`]: the `.ert` tensor container and PNG rendering.
//!
//! ```
//! use binarep_core::event::{Event, EventStream, Polarity, SensorGeometry};
//! use binarep_core::repr::{bina_rep, BitOrder};
//!
//! let geometry = SensorGeometry::new(4, 4).unwrap();
//! let stream = EventStream::new(
//!     geometry,
//!     vec![
//!         Event::new(1, 1, 0, Polarity::On),
//!         Event::new(1, 1, 70, Polarity::On),
//!     ],
//! )
//! .unwrap();
//! let frames = bina_rep(&stream, 1, 8, BitOrder::EarlyMsb).unwrap();
//! // First and last of eight sub-windows occupied: 0b1000_0001.
//! assert_eq!(frames[0].get(Polarity::On, 1, 1), 129);
//! ```

pub mod corrupt;
pub mod error;
pub mod event;
pub mod export;
pub mod metrics;
pub mod repr;

pub use error::{Error, Result};
