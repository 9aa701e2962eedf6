//! Oscillations over dyadic intervals, vertical-column box counts and the
//! oscillation L^q spectrum.

use serde::Serialize;

use super::regression::ols;
use crate::error::{Error, Result};
use crate::process::SamplePath;

/// Minimum number of grid samples in every dyadic interval.
pub const MIN_SAMPLES_PER_BOX: usize = 4;

/// Inclusive grid-index range of each closed dyadic interval
/// `[kS/2^n, (k+1)S/2^n]` on a uniform grid with `cells` steps.
fn box_ranges(path: &SamplePath, level: u32) -> Result<Vec<(usize, usize)>> {
    if path.grid.uniform_spacing().is_none() {
        return Err(Error::Validation("oscillation needs a uniform grid".into()));
    }
    if level > 62 {
        return Err(Error::Resolution(format!(
            "level {level} is too fine for any grid"
        )));
    }
    let cells = (path.len() - 1) as u128;
    let boxes = 1u128 << level;
    let ranges: Vec<(usize, usize)> = (0..boxes)
        .map(|k| {
            let lo = (k * cells).div_ceil(boxes);
            let hi = ((k + 1) * cells) / boxes;
            (lo as usize, hi as usize)
        })
        .collect();
    let fewest = ranges
        .iter()
        .map(|&(lo, hi)| (hi + 1).saturating_sub(lo))
        .min()
        .unwrap_or(0);
    if fewest < MIN_SAMPLES_PER_BOX {
        return Err(Error::Resolution(format!(
            "level {level} leaves {fewest} samples in some box of a {}-point grid (need {MIN_SAMPLES_PER_BOX})",
            path.len()
        )));
    }
    Ok(ranges)
}

/// `max - min` of the path over each dyadic interval at `level`.
///
/// Intervals are closed, so neighbouring intervals share their boundary
/// grid point when it exists.
pub fn oscillation(path: &SamplePath, level: u32) -> Result<Vec<f64>> {
    let ranges = box_ranges(path, level)?;
    Ok(ranges
        .into_iter()
        .map(|(lo, hi)| {
            let slice = &path.values[lo..=hi];
            let max = slice.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = slice.iter().copied().fold(f64::INFINITY, f64::min);
            max - min
        })
        .collect())
}

fn count_from_osc(osc: &[f64], side: f64) -> u64 {
    osc.iter().map(|o| (o / side).floor() as u64 + 1).sum()
}

/// `Σ_k (⌊Osc(I_{n,k}) / δ_n⌋ + 1)` with `δ_n = S / 2^n`.
pub fn box_count_graph(path: &SamplePath, level: u32) -> Result<u64> {
    let osc = oscillation(path, level)?;
    Ok(count_from_osc(
        &osc,
        path.grid.end() / 2f64.powi(level as i32),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub value: f64,
    pub slope: f64,
    pub intercept: f64,
    pub scales_used: Vec<u32>,
    pub r_squared: f64,
    pub per_scale_counts: Vec<u64>,
}

/// Least-squares slope of `log2 count(n)` against `n` for `n_min..=n_max`.
pub fn box_dim_fit(path: &SamplePath, n_min: u32, n_max: u32) -> Result<DimensionEstimate> {
    if n_max < n_min || n_max - n_min < 2 {
        return Err(Error::Fit(format!(
            "levels {n_min}..={n_max} give fewer than 3 scales"
        )));
    }
    let scales: Vec<u32> = (n_min..=n_max).collect();
    let counts = scales
        .iter()
        .map(|&n| box_count_graph(path, n))
        .collect::<Result<Vec<u64>>>()?;
    let x: Vec<f64> = scales.iter().map(|&n| n as f64).collect();
    let y: Vec<f64> = counts.iter().map(|&c| (c as f64).log2()).collect();
    let fit = ols(&x, &y)?;
    Ok(DimensionEstimate {
        value: fit.slope,
        slope: fit.slope,
        intercept: fit.intercept,
        scales_used: scales,
        r_squared: fit.r_squared,
        per_scale_counts: counts,
    })
}

/// `log(Σ_k Osc(I_{n,k})^q) / (-n log 2)` for each level, skipping intervals
/// with zero oscillation.
pub fn empirical_lq(path: &SamplePath, q: f64, levels: &[u32]) -> Result<Vec<(u32, f64)>> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!("q = {q} must be positive")));
    }
    levels
        .iter()
        .map(|&n| {
            let osc = oscillation(path, n)?;
            let sum: f64 = osc.iter().filter(|&&o| o > 0.0).map(|o| o.powf(q)).sum();
            if sum == 0.0 {
                return Err(Error::Degenerate(format!(
                    "all oscillations vanish at level {n}"
                )));
            }
            Ok((n, sum.ln() / (-(n as f64) * 2f64.ln())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::TimeGrid;

    fn line(n: usize) -> SamplePath {
        SamplePath::from_fn(TimeGrid::uniform(n, 1.0).unwrap(), "line", |t| t)
    }

    #[test]
    fn line_oscillation_and_count() {
        let osc = oscillation(&line(1025), 3).unwrap();
        assert_eq!(osc, vec![0.125; 8]);
        assert_eq!(box_count_graph(&line(1025), 4).unwrap(), 32);
        let flat = SamplePath::from_fn(TimeGrid::uniform(1025, 1.0).unwrap(), "flat", |_| 0.3);
        assert_eq!(oscillation(&flat, 3).unwrap(), vec![0.0; 8]);
        assert_eq!(box_count_graph(&flat, 4).unwrap(), 16);
    }

    #[test]
    fn resolution_limit() {
        let p = line(1025);
        assert!(oscillation(&p, 8).is_ok());
        assert!(matches!(oscillation(&p, 9), Err(Error::Resolution(_))));
        assert!(matches!(
            box_dim_fit(&line(16), 4, 12),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn nearest_index_binning_for_power_of_two_grids() {
        let osc = oscillation(&line(1024), 3).unwrap();
        assert_eq!(osc.len(), 8);
        for o in osc {
            assert!((o - 0.125).abs() <= 1.0 / 1023.0);
        }
    }

    #[test]
    fn line_dimension_is_one() {
        let est = box_dim_fit(&line(4097), 3, 8).unwrap();
        assert!((est.value - 1.0).abs() < 0.05);
        assert_eq!(est.scales_used, vec![3, 4, 5, 6, 7, 8]);
        assert!(box_dim_fit(&line(4097), 3, 4).is_err());
    }

    #[test]
    fn line_lq_tends_to_one() {
        let est = empirical_lq(&line(4097), 2.0, &[2, 6, 10]).unwrap();
        for (n, tau) in est {
            assert!((tau - 1.0).abs() < 1e-12, "n = {n}: {tau}");
        }
        let flat = SamplePath::from_fn(TimeGrid::uniform(65, 1.0).unwrap(), "flat", |_| 0.0);
        assert!(matches!(
            empirical_lq(&flat, 1.0, &[2]),
            Err(Error::Degenerate(_))
        ));
        assert!(empirical_lq(&line(65), 0.0, &[2]).is_err());
    }
}
