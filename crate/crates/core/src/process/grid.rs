use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing sample times covering `[0, S]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Validation(
                "a time grid needs at least two points".into(),
            ));
        }
        if points[0] != 0.0 {
            return Err(Error::Validation(format!(
                "time grid must start at 0, not {}",
                points[0]
            )));
        }
        if points.iter().any(|t| !t.is_finite()) || points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Validation(
                "time grid must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self { points })
    }

    /// `n` equally spaced points from 0 to `end`.
    pub fn uniform(n: usize, end: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Validation(
                "a time grid needs at least two points".into(),
            ));
        }
        if !(end > 0.0 && end.is_finite()) {
            return Err(Error::Domain(format!("grid end {end} must be positive")));
        }
        let cells = (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|k| end * (k as f64 / cells)).collect();
        points[n - 1] = end;
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Grid spacing if the points are equally spaced to within rounding.
    pub fn uniform_spacing(&self) -> Option<f64> {
        let h = self.end() / (self.len() - 1) as f64;
        let tol = 1e-9 * h;
        self.points
            .iter()
            .enumerate()
            .all(|(k, &t)| (t - k as f64 * h).abs() <= tol)
            .then_some(h)
    }

    /// Smallest gap between consecutive points.
    pub fn min_spacing(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

impl TryFrom<Vec<f64>> for TimeGrid {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<TimeGrid> for Vec<f64> {
    fn from(grid: TimeGrid) -> Self {
        grid.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid() {
        let g = TimeGrid::uniform(1025, 1.0).unwrap();
        assert_eq!(g.len(), 1025);
        assert_eq!(g.points()[512], 0.5);
        assert_eq!(g.end(), 1.0);
        assert_eq!(g.uniform_spacing(), Some(1.0 / 1024.0));
        let g = TimeGrid::uniform(11, 3.0).unwrap();
        assert!((g.uniform_spacing().unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TimeGrid::new(vec![0.0]).is_err());
        assert!(TimeGrid::new(vec![0.1, 1.0]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(TimeGrid::new(vec![0.0, f64::NAN]).is_err());
        assert!(TimeGrid::uniform(1, 1.0).is_err());
        assert!(TimeGrid::uniform(4, 0.0).is_err());
        let g = TimeGrid::new(vec![0.0, 0.1, 1.0]).unwrap();
        assert_eq!(g.uniform_spacing(), None);
        assert!((g.min_spacing() - 0.1).abs() < 1e-15);
    }
}
