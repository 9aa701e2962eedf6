use serde::Serialize;

use crate::error::{Error, Result};
use crate::process::{SamplePath, TimeGrid};

/// Measure on the time axis whose push-forward by the graph is analysed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BaseMeasure {
    /// Lebesgue measure on `[0, S]` discretized by the trapezoid rule on the path grid.
    LebesgueOnGrid,
    /// Probability measure with atoms at `points`, each of which must be a grid time.
    Quadrature { points: Vec<f64>, weights: Vec<f64> },
}

impl BaseMeasure {
    pub fn quadrature(nodes: Vec<(f64, f64)>) -> Result<Self> {
        let (points, weights): (Vec<f64>, Vec<f64>) = nodes.into_iter().unzip();
        if points.is_empty() {
            return Err(Error::Validation("quadrature has no nodes".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Validation(
                "quadrature weights must be positive".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "quadrature weights sum to {total}, not 1"
            )));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Validation(
                "quadrature points must be strictly increasing".into(),
            ));
        }
        Ok(Self::Quadrature { points, weights })
    }

    /// A grid containing every quadrature node, plus the endpoints `0` and `end`.
    pub fn quadrature_grid(&self, end: f64) -> Result<TimeGrid> {
        match self {
            Self::LebesgueOnGrid => Err(Error::Validation("Lebesgue base has no nodes".into())),
            Self::Quadrature { points, .. } => {
                if points[0] < 0.0 || points[points.len() - 1] > end {
                    return Err(Error::Domain(format!(
                        "quadrature nodes outside [0, {end}]"
                    )));
                }
                let mut grid = Vec::with_capacity(points.len() + 2);
                if points[0] > 0.0 {
                    grid.push(0.0);
                }
                grid.extend_from_slice(points);
                if points[points.len() - 1] < end {
                    grid.push(end);
                }
                TimeGrid::new(grid)
            }
        }
    }

    /// `(grid index, weight)` for every atom of the discretized measure.
    pub fn aligned_weights(&self, path: &SamplePath) -> Result<Vec<(usize, f64)>> {
        let times = path.times();
        match self {
            Self::LebesgueOnGrid => Ok(trapezoid_weights(times).into_iter().enumerate().collect()),
            Self::Quadrature { points, weights } => {
                let tol = 1e-12 * path.grid.end();
                points
                    .iter()
                    .zip(weights)
                    .map(|(&p, &w)| {
                        let k = times.partition_point(|&t| t < p - tol);
                        if k < times.len() && (times[k] - p).abs() <= tol {
                            Ok((k, w))
                        } else {
                            Err(Error::Validation(format!(
                                "quadrature node {p} is not a grid time"
                            )))
                        }
                    })
                    .collect()
            }
        }
    }
}

pub(crate) fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = 0.5 * (times[i + 1] - times[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::self_similar::{measure_quadrature, Ifs};

    #[test]
    fn trapezoid_mass() {
        let w = trapezoid_weights(&[0.0, 0.25, 0.5, 1.0]);
        assert_eq!(w, vec![0.125, 0.25, 0.375, 0.25]);
    }

    #[test]
    fn cantor_quadrature_aligns() {
        let base =
            BaseMeasure::quadrature(measure_quadrature(&Ifs::cantor3(), 4, 1.0 / 3.0).unwrap())
                .unwrap();
        let grid = base.quadrature_grid(1.0).unwrap();
        assert_eq!(grid.len(), 16 + 2);
        let path = SamplePath::from_fn(grid, "zero", |_| 0.0);
        let w = base.aligned_weights(&path).unwrap();
        assert_eq!(w.len(), 16);
        assert_eq!(w[0].0, 1);
        assert!((w.iter().map(|p| p.1).sum::<f64>() - 1.0).abs() < 1e-15);
        let other = SamplePath::from_fn(TimeGrid::uniform(9, 1.0).unwrap(), "zero", |_| 0.0);
        assert!(base.aligned_weights(&other).is_err());
    }

    #[test]
    fn rejects_bad_quadrature() {
        assert!(BaseMeasure::quadrature(vec![(0.2, 0.5), (0.4, 0.4)]).is_err());
        assert!(BaseMeasure::quadrature(vec![(0.2, 0.5), (0.1, 0.5)]).is_err());
        assert!(BaseMeasure::quadrature(vec![(0.2, 1.5), (0.4, -0.5)]).is_err());
    }
}
