//! Named experiment presets, seeded ensembles, JSON reports and CSV dumps.

mod config;
mod report;
mod run;

pub use config::{
    BaseSpec, Check, Experiment, ExperimentConfig, HolderCase, IndexKind, Prediction,
};
pub use report::{CheckOutcome, EnsembleSummary, ExperimentReport, PathEstimate, SCHEMA_VERSION};
pub use run::{dump_paths, run_config, simulate_ensemble, RunOptions, Sampler};

use crate::error::{Error, Result};

const PRESETS: [(&str, &str); 12] = [
    ("lq-table", include_str!("../../presets/lq-table.toml")),
    ("bm-graph", include_str!("../../presets/bm-graph.toml")),
    (
        "staircase-dim",
        include_str!("../../presets/staircase-dim.toml"),
    ),
    ("power6", include_str!("../../presets/power6.toml")),
    (
        "fbm-multifractal",
        include_str!("../../presets/fbm-multifractal.toml"),
    ),
    (
        "holder-index",
        include_str!("../../presets/holder-index.toml"),
    ),
    ("fbm-law", include_str!("../../presets/fbm-law.toml")),
    ("bm-fourier", include_str!("../../presets/bm-fourier.toml")),
    (
        "staircase-fourier",
        include_str!("../../presets/staircase-fourier.toml"),
    ),
    (
        "inverse-wordsets",
        include_str!("../../presets/inverse-wordsets.toml"),
    ),
    (
        "energy-dichotomy",
        include_str!("../../presets/energy-dichotomy.toml"),
    ),
    (
        "conjecture-bernoulli",
        include_str!("../../presets/conjecture-bernoulli.toml"),
    ),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.0).collect()
}

/// TOML source of a built-in preset.
pub fn preset_source(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|p| p.0 == name)
        .map(|p| p.1)
        .ok_or_else(|| Error::Usage(format!("unknown preset '{name}'; try list-presets")))
}

pub fn preset_config(name: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::from_toml(preset_source(name)?)
}

/// Loads a preset, applies `key=value` overrides and runs it.
pub fn run_preset(name: &str, overrides: &[String]) -> Result<ExperimentReport> {
    let config = preset_config(name)?.with_overrides(overrides)?;
    Ok(run_config(&config, &RunOptions::default()))
}
