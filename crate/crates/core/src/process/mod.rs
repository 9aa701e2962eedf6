//! Sample paths of `X_t = B^H_{V(t)}` on a time grid.

mod bm;
mod fbm;
mod grid;
mod path;
mod rng;

pub use bm::sample_additive_bm;
pub use fbm::{fbm_covariance, sample_additive_fbm, FbmSampler, MAX_FBM_POINTS};
pub use grid::TimeGrid;
pub use path::SamplePath;
pub use rng::RngStream;

/// Increments with computed variance in `[-VARIANCE_FLOOR, 0)` are treated as 0.
pub const VARIANCE_FLOOR: f64 = 1e-12;
