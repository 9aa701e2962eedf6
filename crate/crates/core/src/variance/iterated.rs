//! Distribution functions of (possibly overlapping) self-similar measures by
//! fixed-point iteration of `V(x) = Σ p_i V(S_i^{-1} x)` on a uniform grid.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::self_similar::Ifs;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IteratedCdf {
    ifs: Ifs,
    grid_size: usize,
    iterations: usize,
    values: Option<Vec<f64>>,
    /// Sup-norm distance between consecutive iterates.
    convergence: Vec<f64>,
}

/// Linear interpolation of grid values on `[0, 1]`, extended by 0 on the
/// left and 1 on the right.
fn interpolate(values: &[f64], x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let cells = (values.len() - 1) as f64;
    let pos = x * cells;
    let i = (pos.floor() as usize).min(values.len() - 2);
    let frac = pos - i as f64;
    values[i] + frac * (values[i + 1] - values[i])
}

impl IteratedCdf {
    /// An entry whose grid has not been computed yet.
    pub fn pending(ifs: Ifs, grid_size: usize, iterations: usize) -> Self {
        Self {
            ifs,
            grid_size,
            iterations,
            values: None,
            convergence: Vec::new(),
        }
    }

    pub fn build(ifs: Ifs, grid_size: usize, iterations: usize) -> Result<Self> {
        let mut cdf = Self::pending(ifs, grid_size, iterations);
        cdf.compute()?;
        Ok(cdf)
    }

    /// Runs the fixed-point iteration from `V_0(x) = x`.
    pub fn compute(&mut self) -> Result<()> {
        if self.grid_size < 2 {
            return Err(Error::Validation("grid_size must be at least 2".into()));
        }
        if self.iterations < 1 {
            return Err(Error::Validation("iterations must be at least 1".into()));
        }
        let cells = (self.grid_size - 1) as f64;
        let xs: Vec<f64> = (0..self.grid_size).map(|j| j as f64 / cells).collect();
        let mut current = xs.clone();
        let mut convergence = Vec::with_capacity(self.iterations);
        let maps: Vec<(f64, f64, f64)> = (0..self.ifs.len())
            .map(|i| {
                (
                    self.ifs.ratios()[i],
                    self.ifs.translations()[i],
                    self.ifs.weights()[i],
                )
            })
            .collect();
        for _ in 0..self.iterations {
            let next: Vec<f64> = xs
                .iter()
                .map(|&x| {
                    maps.iter()
                        .map(|&(r, d, p)| p * interpolate(&current, (x - d) / r).clamp(0.0, 1.0))
                        .sum::<f64>()
                        .clamp(0.0, 1.0)
                })
                .collect();
            let diff = next
                .iter()
                .zip(&current)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            convergence.push(diff);
            current = next;
        }
        self.values = Some(current);
        self.convergence = convergence;
        Ok(())
    }

    pub fn ifs(&self) -> &Ifs {
        &self.ifs
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn values(&self) -> Option<&[f64]> {
        self.values.as_deref()
    }

    pub fn convergence(&self) -> &[f64] {
        &self.convergence
    }

    /// Evaluates at `x ∈ [0, 1]`.
    pub fn eval_unit(&self, x: f64) -> Result<f64> {
        let values = self
            .values
            .as_deref()
            .ok_or_else(|| Error::State("iterated CDF grid has not been built".into()))?;
        Ok(interpolate(values, x))
    }
}
