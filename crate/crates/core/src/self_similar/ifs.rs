//! Iterated function systems of similarities `S_i(x) = r_i x + d_i` on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WEIGHT_TOL: f64 = 1e-12;

/// Inverse of the golden ratio, `(sqrt 5 - 1) / 2`.
pub fn golden_ratio_inverse() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// An IFS together with a probability vector, defining a self-similar
/// measure on its attractor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ifs {
    ratios: Vec<f64>,
    translations: Vec<f64>,
    weights: Vec<f64>,
    convex_osc: bool,
}

impl Ifs {
    /// Validates and builds an IFS. Translations must start at 0, be sorted,
    /// and place the last image flush with 1.
    pub fn new(ratios: Vec<f64>, translations: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let m = ratios.len();
        if m < 2 || translations.len() != m || weights.len() != m {
            return Err(Error::Validation(format!(
                "ratios, translations and weights must have equal length >= 2 (got {}, {}, {})",
                ratios.len(),
                translations.len(),
                weights.len()
            )));
        }
        if let Some(r) = ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::Validation(format!(
                "contraction ratio {r} not in (0, 1)"
            )));
        }
        if let Some(p) = weights.iter().find(|p| !(**p > 0.0) || !p.is_finite()) {
            return Err(Error::Validation(format!("weight {p} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::Validation(format!("weights sum to {total}, not 1")));
        }
        if translations[0] != 0.0 {
            return Err(Error::Validation("first translation must be 0".into()));
        }
        if translations.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::Validation(
                "translations must be non-decreasing".into(),
            ));
        }
        if ((translations[m - 1] + ratios[m - 1]) - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::Validation(
                "last translation must equal 1 - last ratio".into(),
            ));
        }
        let convex_osc =
            (0..m - 1).all(|i| translations[i + 1] >= translations[i] + ratios[i] - 1e-15);
        Ok(Self {
            ratios,
            translations,
            weights,
            convex_osc,
        })
    }

    /// Middle-third Cantor measure.
    pub fn cantor3() -> Self {
        Self::new(vec![1.0 / 3.0; 2], vec![0.0, 2.0 / 3.0], vec![0.5, 0.5]).expect("valid preset")
    }

    /// Two maps with ratios 1/2 and 1/4 and equal weights.
    pub fn uneven_2_4() -> Self {
        Self::new(vec![0.5, 0.25], vec![0.0, 0.75], vec![0.5, 0.5]).expect("valid preset")
    }

    /// Bernoulli convolution with ratio the inverse golden ratio (overlapping).
    pub fn golden_bernoulli() -> Self {
        let rho = golden_ratio_inverse();
        Self::new(vec![rho, rho], vec![0.0, 1.0 - rho], vec![0.5, 0.5]).expect("valid preset")
    }

    pub const PRESET_NAMES: [&'static str; 3] = ["cantor3", "uneven-2-4", "golden-bernoulli"];

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "cantor3" => Ok(Self::cantor3()),
            "uneven-2-4" => Ok(Self::uneven_2_4()),
            "golden-bernoulli" => Ok(Self::golden_bernoulli()),
            other => Err(Error::Validation(format!("unknown IFS preset '{other}'"))),
        }
    }

    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn translations(&self) -> &[f64] {
        &self.translations
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Images of `(0, 1)` are pairwise disjoint.
    pub fn convex_osc(&self) -> bool {
        self.convex_osc
    }

    pub fn is_equicontractive(&self) -> bool {
        self.ratios.iter().all(|r| *r == self.ratios[0])
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn min_ratio(&self) -> f64 {
        self.ratios.iter().cloned().fold(f64::MAX, f64::min)
    }

    /// The images `S_i[0, 1]` cover `[0, 1]`, so the attractor is the whole
    /// interval and the measure has full support.
    pub fn images_cover_unit_interval(&self) -> bool {
        (0..self.len() - 1)
            .all(|i| self.translations[i + 1] <= self.translations[i] + self.ratios[i])
    }

    /// Same maps, new probability vector.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        Self::new(self.ratios.clone(), self.translations.clone(), weights)
    }

    /// Weights `p_i^q r_i^{-tau}` of the auxiliary measure used with the
    /// L^q spectrum; they sum to one exactly when `tau = tau(q)`.
    pub fn tilted_weights(&self, q: f64, tau: f64) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.ratios)
            .map(|(p, r)| p.powf(q) * r.powf(-tau))
            .collect()
    }
}

/// Configuration record for an IFS: a preset name or explicit parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IfsSpec {
    Preset {
        preset: String,
    },
    Explicit {
        ratios: Vec<f64>,
        translations: Vec<f64>,
        weights: Vec<f64>,
    },
}

impl IfsSpec {
    pub fn build(&self) -> Result<Ifs> {
        match self {
            IfsSpec::Preset { preset } => Ifs::preset(preset),
            IfsSpec::Explicit {
                ratios,
                translations,
                weights,
            } => Ifs::new(ratios.clone(), translations.clone(), weights.clone()),
        }
    }
}
