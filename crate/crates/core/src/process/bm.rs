use rand::Rng;
use rand_distr::StandardNormal;

use super::{RngStream, SamplePath, TimeGrid, VARIANCE_FLOOR};
use crate::error::{Error, Result};
use crate::variance::VarianceFunction;

pub(crate) fn check_domain(v: &VarianceFunction, grid: &TimeGrid) -> Result<()> {
    if grid.end() > v.domain_end() {
        return Err(Error::Domain(format!(
            "grid ends at {} beyond the domain [0, {}] of {}",
            grid.end(),
            v.domain_end(),
            v.name()
        )));
    }
    Ok(())
}

/// `V` at every grid point.
pub(crate) fn variance_levels(v: &VarianceFunction, grid: &TimeGrid) -> Result<Vec<f64>> {
    grid.points().iter().map(|&t| v.eval(t)).collect()
}

/// Brownian motion run on the clock `V`: cumulative sums of independent
/// `N(0, V(t_{i+1}) - V(t_i))` increments. One standard normal is drawn per
/// increment, zero-variance ones included, so the stream position depends
/// only on the grid size.
pub fn sample_additive_bm(
    v: &VarianceFunction,
    grid: &TimeGrid,
    rng: RngStream,
) -> Result<SamplePath> {
    check_domain(v, grid)?;
    let levels = variance_levels(v, grid)?;
    let mut gen = rng.generator();
    let mut values = Vec::with_capacity(levels.len());
    let mut x = 0.0;
    values.push(x);
    for (i, w) in levels.windows(2).enumerate() {
        let mut var = w[1] - w[0];
        if var < 0.0 {
            if var < -VARIANCE_FLOOR {
                return Err(Error::Internal(format!(
                    "negative increment variance {var:e} at grid index {i} for {}",
                    v.name()
                )));
            }
            var = 0.0;
        }
        let z: f64 = gen.sample(StandardNormal);
        if var > 0.0 {
            x += var.sqrt() * z;
        }
        values.push(x);
    }
    Ok(SamplePath {
        grid: grid.clone(),
        values,
        hurst: 0.5,
        v_name: v.name(),
        seed: rng.root_seed,
        stream_index: rng.stream_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_plateau_is_flat() {
        let v = VarianceFunction::cantor_staircase();
        let grid = TimeGrid::uniform(11, 1.0).unwrap();
        let path = sample_additive_bm(&v, &grid, RngStream::new(5, 0)).unwrap();
        assert_eq!(path.values[0], 0.0);
        assert_eq!(path.values[4], path.values[5]);
        assert_eq!(path.values[5], path.values[6]);
    }

    #[test]
    fn seed_is_reproducible() {
        let v = VarianceFunction::identity();
        let grid = TimeGrid::uniform(257, 1.0).unwrap();
        let a = sample_additive_bm(&v, &grid, RngStream::new(42, 0)).unwrap();
        let b = sample_additive_bm(&v, &grid, RngStream::new(42, 0)).unwrap();
        let c = sample_additive_bm(&v, &grid, RngStream::new(42, 1)).unwrap();
        assert!(a
            .values
            .iter()
            .zip(&b.values)
            .all(|(x, y)| x.to_bits() == y.to_bits()));
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn grid_outside_domain() {
        let v = VarianceFunction::identity();
        let grid = TimeGrid::uniform(5, 2.0).unwrap();
        assert!(matches!(
            sample_additive_bm(&v, &grid, RngStream::new(0, 0)),
            Err(Error::Domain(_))
        ));
    }
}
