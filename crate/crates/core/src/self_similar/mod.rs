//! Self-similar measures under the convex open set condition.

mod fourier;
mod ifs;
mod spectrum;
mod words;

pub use fourier::self_similar_ft;
pub use ifs::{golden_ratio_inverse, Ifs, IfsSpec};
pub use spectrum::{
    box_dimension, legendre_transform, lq_spectrum, predicted_graph_dim, LegendrePoint,
    SampledSpectrum,
};
pub use words::{child_counts, enumerate_lambda_n, measure_quadrature, Word, WordSet};
