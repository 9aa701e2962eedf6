use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::grid::TimeGrid;
use crate::error::Result;

/// One realization of `X_t = B^H_{V(t)}` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplePath {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub hurst: f64,
    pub v_name: String,
    pub seed: u64,
    pub stream_index: u64,
}

impl SamplePath {
    /// A deterministic path, e.g. `X_t = f(t)`, for estimator checks.
    pub fn from_fn(grid: TimeGrid, name: &str, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Self {
            grid,
            values,
            hurst: 0.5,
            v_name: name.to_string(),
            seed: 0,
            stream_index: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        self.grid.points()
    }

    /// Every `stride`-th grid point of the same realization.
    pub fn subsample(&self, stride: usize) -> Result<Self> {
        if stride == 0 || !(self.len() - 1).is_multiple_of(stride) {
            return Err(crate::Error::Validation(format!(
                "stride {stride} does not divide the {} grid cells",
                self.len() - 1
            )));
        }
        let pick = |v: &[f64]| -> Vec<f64> { v.iter().step_by(stride).copied().collect() };
        Ok(Self {
            grid: TimeGrid::new(pick(self.grid.points()))?,
            values: pick(&self.values),
            ..self.clone()
        })
    }

    /// Writes the `t,x` CSV dump with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,x")?;
        for (t, x) in self.grid.points().iter().zip(&self.values) {
            writeln!(out, "{t:.16e},{x:.16e}")?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)
            .map_err(|e| crate::Error::Io(format!("{}: {e}", path.display())))?;
        let mut out = std::io::BufWriter::new(file);
        self.write_csv(&mut out)?;
        out.flush()?;
        Ok(())
    }
}
