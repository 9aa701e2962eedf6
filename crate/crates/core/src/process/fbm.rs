use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::bm::{check_domain, variance_levels};
use super::{RngStream, SamplePath, TimeGrid};
use crate::error::{Error, Result};
use crate::variance::VarianceFunction;

/// Largest grid accepted by the dense Cholesky sampler.
pub const MAX_FBM_POINTS: usize = 4096;

const MAX_JITTER: f64 = 1e-10;

/// `C(a, b) = ½(s_a^{2H} + s_b^{2H} - |s_a - s_b|^{2H})` for clock values `s`.
pub fn fbm_covariance(levels: &[f64], hurst: f64) -> DMatrix<f64> {
    let h2 = 2.0 * hurst;
    let powered: Vec<f64> = levels.iter().map(|s| s.powf(h2)).collect();
    DMatrix::from_fn(levels.len(), levels.len(), |a, b| {
        0.5 * (powered[a] + powered[b] - (levels[a] - levels[b]).abs().powf(h2))
    })
}

/// Reusable Cholesky factor for one `(V, H, grid)` triple.
///
/// The factor is built over the distinct positive values of `V` on the
/// grid, so grid points on a plateau of `V` share one coordinate and come
/// out exactly equal.
#[derive(Debug, Clone)]
pub struct FbmSampler {
    grid: TimeGrid,
    hurst: f64,
    v_name: String,
    /// Index into the factor's coordinates for each grid point; `None` where `V = 0`.
    slots: Vec<Option<usize>>,
    factor: DMatrix<f64>,
    jitter: f64,
}

impl FbmSampler {
    pub fn new(v: &VarianceFunction, hurst: f64, grid: &TimeGrid) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::Domain(format!("Hurst index {hurst} not in (0, 1)")));
        }
        if grid.len() > MAX_FBM_POINTS {
            return Err(Error::Resource(format!(
                "{} grid points exceed the dense Cholesky limit {MAX_FBM_POINTS}",
                grid.len()
            )));
        }
        check_domain(v, grid)?;
        let values = variance_levels(v, grid)?;
        let mut levels: Vec<f64> = Vec::new();
        let mut slots = Vec::with_capacity(values.len());
        for &s in &values {
            if s <= 0.0 {
                slots.push(None);
                continue;
            }
            if levels.last() != Some(&s) {
                if levels.last().is_some_and(|&last| s < last) {
                    return Err(Error::Internal(format!(
                        "{} decreases on the grid",
                        v.name()
                    )));
                }
                levels.push(s);
            }
            slots.push(Some(levels.len() - 1));
        }
        let cov = fbm_covariance(&levels, hurst);
        let (factor, jitter) = cholesky_with_jitter(cov)?;
        Ok(Self {
            grid: grid.clone(),
            hurst,
            v_name: v.name(),
            slots,
            factor,
            jitter,
        })
    }

    /// Diagonal jitter that was needed for the factorization.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Number of distinct positive clock values.
    pub fn dimension(&self) -> usize {
        self.factor.nrows()
    }

    pub fn sample(&self, rng: RngStream) -> SamplePath {
        let mut gen = rng.generator();
        let z = DVector::from_fn(self.dimension(), |_, _| {
            gen.sample::<f64, _>(StandardNormal)
        });
        let y = &self.factor * z;
        let values = self
            .slots
            .iter()
            .map(|slot| slot.map_or(0.0, |k| y[k]))
            .collect();
        SamplePath {
            grid: self.grid.clone(),
            values,
            hurst: self.hurst,
            v_name: self.v_name.clone(),
            seed: rng.root_seed,
            stream_index: rng.stream_index,
        }
    }
}

fn cholesky_with_jitter(cov: DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    if cov.nrows() == 0 {
        return Ok((cov, 0.0));
    }
    for jitter in [0.0, 1e-14, 1e-13, 1e-12, 1e-11, MAX_JITTER] {
        let mut m = cov.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += jitter;
        }
        if let Some(chol) = m.cholesky() {
            return Ok((chol.unpack(), jitter));
        }
    }
    Err(Error::Numerical(format!(
        "covariance of size {} is not positive definite after jitter {MAX_JITTER:e}",
        cov.nrows()
    )))
}

/// Fractional Brownian motion run on the clock `V`, exact in law at the grid
/// points. Builds the factor on every call; use [`FbmSampler`] for ensembles.
pub fn sample_additive_fbm(
    v: &VarianceFunction,
    hurst: f64,
    grid: &TimeGrid,
    rng: RngStream,
) -> Result<SamplePath> {
    Ok(FbmSampler::new(v, hurst, grid)?.sample(rng))
}
