use rayon::prelude::*;
use serde::Serialize;

use super::measure::BaseMeasure;
use crate::error::{Error, Result};
use crate::process::SamplePath;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyEstimate {
    pub value: f64,
    /// Off-diagonal pairs that landed on the same graph point and were
    /// evaluated at the floor distance instead.
    pub coincident_pairs: u64,
    pub floor_distance: f64,
}

/// Discretized `s`-energy `Σ_{i≠j} w_i w_j |G_i - G_j|^{-s}` of the graph
/// measure, `G_i = (t_i, X_i)`.
pub fn energy_integral(path: &SamplePath, base: &BaseMeasure, s: f64) -> Result<f64> {
    Ok(energy_integral_detailed(path, base, s)?.value)
}

pub fn energy_integral_detailed(
    path: &SamplePath,
    base: &BaseMeasure,
    s: f64,
) -> Result<EnergyEstimate> {
    if !(s > 1.0 && s < 2.0) {
        return Err(Error::Domain(format!(
            "energy exponent s = {s} not in (1, 2)"
        )));
    }
    let atoms: Vec<(f64, f64, f64)> = base
        .aligned_weights(path)?
        .into_iter()
        .filter(|&(_, w)| w > 0.0)
        .map(|(i, w)| (path.times()[i], path.values[i], w))
        .collect();
    let floor = path.grid.min_spacing();
    let floor_sq = floor * floor;
    let half = 0.5 * s;
    // Row sums are computed in parallel and added in index order.
    let rows: Vec<(f64, u64)> = (0..atoms.len())
        .into_par_iter()
        .map(|i| {
            let (ti, xi, wi) = atoms[i];
            let mut acc = 0.0;
            let mut coincident = 0;
            for &(tj, xj, wj) in &atoms[i + 1..] {
                let mut d2 = (ti - tj) * (ti - tj) + (xi - xj) * (xi - xj);
                if d2 == 0.0 {
                    d2 = floor_sq;
                    coincident += 1;
                }
                acc += wj * d2.powf(-half);
            }
            (wi * acc, coincident)
        })
        .collect();
    let value = 2.0 * rows.iter().map(|r| r.0).sum::<f64>();
    let coincident_pairs = 2 * rows.iter().map(|r| r.1).sum::<u64>();
    Ok(EnergyEstimate {
        value,
        coincident_pairs,
        floor_distance: floor,
    })
}
