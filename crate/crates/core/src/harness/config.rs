//! Experiment configuration records, parsed from TOML.
//!
//! A configuration has a shared header (seed, ensemble size, grid, Hurst
//! index, variance function), an `[experiment]` table whose `kind` selects
//! the pipeline, and a list of `[[checks]]` bounding report metrics.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::self_similar::IfsSpec;
use crate::variance::VarianceSpec;

fn default_hurst() -> f64 {
    0.5
}

fn default_true() -> bool {
    true
}

fn default_one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub preset: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub root_seed: u64,
    #[serde(default = "default_one")]
    pub ensemble: usize,
    /// Number of grid points on `[0, S]`.
    #[serde(default)]
    pub grid_size: usize,
    #[serde(default = "default_hurst")]
    pub hurst: f64,
    #[serde(default)]
    pub variance: Option<VarianceSpec>,
    pub experiment: Experiment,
    #[serde(default)]
    pub prediction: Option<Prediction>,
    /// `false` for exploratory presets: metrics are reported, never asserted.
    #[serde(default = "default_true")]
    pub asserted: bool,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

/// Theoretical value the experiment is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prediction {
    #[serde(default)]
    pub value: Option<f64>,
    pub statement: String,
}

/// Inclusive bounds on one report metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub metric: String,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolderCase {
    pub name: String,
    pub variance: VarianceSpec,
    pub point: f64,
    pub index: IndexKind,
    /// Radii `delta_base^-k` for `k` in `delta_exponents[0]..=delta_exponents[1]`.
    pub delta_base: f64,
    pub delta_exponents: [i32; 2],
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_step: f64,
    pub pairs_per_window: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BaseSpec {
    Lebesgue,
    /// Midpoint quadrature of the IFS measure over the cut set `Λ_level`.
    Quadrature {
        ifs: IfsSpec,
        level: u32,
        base_scale: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    /// Exact `τ(q)` of a self-similar measure.
    LqTable {
        ifs: IfsSpec,
        q: Vec<f64>,
    },
    /// Ensemble box-dimension fit of simulated graphs.
    BoxDimension {
        levels: [u32; 2],
        #[serde(default)]
        lq_q: Vec<f64>,
    },
    /// Predicted graph dimensions `1 - τ(H)`, optionally with fBM estimates.
    Multifractal {
        ifs: IfsSpec,
        hurst_values: Vec<f64>,
        #[serde(default)]
        levels: Option<[u32; 2]>,
    },
    HolderIndex {
        cases: Vec<HolderCase>,
    },
    /// Empirical covariance of the fBM sampler against the closed form.
    FbmLaw {
        hurst_values: Vec<f64>,
    },
    FourierScan {
        base: BaseSpec,
        u_levels: Vec<f64>,
        angles_per_level: usize,
        rho: f64,
    },
    /// `|μ̂_G|` along the horizontal axis at `ξ1 = base^n` against the
    /// product formula of the base measure.
    AxisDecay {
        base: BaseSpec,
        axis_base: f64,
        exponents: [i32; 2],
        oracle_terms: usize,
        angles_per_level: usize,
        rho: f64,
    },
    /// Round trip `V(T(s)) = s` over a catalog, and cut-set properties.
    InverseWordsets {
        catalog: Vec<VarianceSpec>,
        samples: usize,
        tol: f64,
        ifs: Vec<IfsSpec>,
        max_level: u32,
    },
    /// s-energy of one path on a fine grid and its every-`stride`-th subgrid.
    EnergyDichotomy {
        stride: usize,
        s_values: Vec<f64>,
    },
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Validation(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.ensemble < 1 {
            return Err(Error::Validation("ensemble must be at least 1".into()));
        }
        let needs_paths = !matches!(
            self.experiment,
            Experiment::LqTable { .. }
                | Experiment::HolderIndex { .. }
                | Experiment::InverseWordsets { .. }
        );
        if needs_paths
            && self.variance.is_none()
            && !matches!(self.experiment, Experiment::Multifractal { .. })
        {
            return Err(Error::Validation(format!(
                "preset {} needs a [variance] table",
                self.preset
            )));
        }
        let needs_grid = matches!(
            self.experiment,
            Experiment::BoxDimension { .. }
                | Experiment::FbmLaw { .. }
                | Experiment::EnergyDichotomy { .. }
                | Experiment::Multifractal {
                    levels: Some(_),
                    ..
                }
        ) || matches!(
            &self.experiment,
            Experiment::FourierScan {
                base: BaseSpec::Lebesgue,
                ..
            }
        );
        if needs_grid && self.grid_size < 2 {
            return Err(Error::Validation("grid_size must be at least 2".into()));
        }
        Ok(())
    }

    /// Applies `key=value` overrides. Keys are dotted paths into the TOML
    /// document; values are parsed as TOML and fall back to plain strings.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self> {
        if overrides.is_empty() {
            return Ok(self.clone());
        }
        let mut doc = toml::Value::try_from(self).map_err(|e| Error::Internal(e.to_string()))?;
        for item in overrides {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("override '{item}' is not key=value")))?;
            let value = parse_value(raw.trim());
            set_path(&mut doc, key.trim(), value)?;
        }
        let config: Self = doc
            .try_into()
            .map_err(|e: toml::de::Error| Error::Validation(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }
}

fn parse_value(raw: &str) -> toml::Value {
    #[derive(Deserialize)]
    struct Wrap {
        v: toml::Value,
    }
    toml::from_str::<Wrap>(&format!("v = {raw}"))
        .map(|w| w.v)
        .unwrap_or_else(|_| toml::Value::String(raw.to_string()))
}

fn set_path(doc: &mut toml::Value, key: &str, value: toml::Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    let mut node = doc;
    for part in &parts[..parts.len() - 1] {
        let table = node
            .as_table_mut()
            .ok_or_else(|| Error::Usage(format!("override key '{key}' does not name a table")))?;
        node = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    let table = node
        .as_table_mut()
        .ok_or_else(|| Error::Usage(format!("override key '{key}' does not name a table")))?;
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}
