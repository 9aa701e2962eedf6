//! Dimension, spectrum, energy and Fourier-decay estimators for sampled graphs.

mod boxes;
mod energy;
mod fourier;
mod measure;
mod regression;

pub use boxes::{box_count_graph, box_dim_fit, empirical_lq, oscillation, DimensionEstimate};
pub use energy::{energy_integral, energy_integral_detailed, EnergyEstimate};
pub use fourier::{
    cone_classify, empirical_ft, fourier_decay_fit, write_scan_csv, Cone, ConeSlopes, FourierFit,
    FourierScanSample,
};
pub use measure::BaseMeasure;
pub use regression::{ols, LinearFit};
