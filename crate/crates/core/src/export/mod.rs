//! Tensor persistence and visualization.

mod ert;
mod render;

pub use self::ert::{read_header, read_tensor, write_tensor, Dtype, ErtHeader, ERT_MAGIC, ERT_VERSION};
pub use self::render::{intensity, render_png};
