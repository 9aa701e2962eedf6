//! Fourier transform of the graph measure, the horizontal/vertical cone
//! split and decay-exponent fitting.

use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::measure::BaseMeasure;
use super::regression::ols;
use crate::error::{Error, Result};
use crate::process::SamplePath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cone {
    Horizontal,
    Vertical,
}

impl Cone {
    pub fn as_str(self) -> &'static str {
        match self {
            Cone::Horizontal => "horizontal",
            Cone::Vertical => "vertical",
        }
    }
}

/// `Σ w_i exp(-2πi(ξ1 t_i + ξ2 X_i))` over atoms `(t, x, w)`.
fn transform(atoms: &[(f64, f64, f64)], xi: (f64, f64)) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for &(t, x, w) in atoms {
        let phase = xi.0 * t + xi.1 * x;
        let (s, c) = (-TAU * (phase - phase.round())).sin_cos();
        re += w * c;
        im += w * s;
    }
    Complex64::new(re, im)
}

fn atoms(path: &SamplePath, base: &BaseMeasure) -> Result<Vec<(f64, f64, f64)>> {
    Ok(base
        .aligned_weights(path)?
        .into_iter()
        .map(|(i, w)| (path.times()[i], path.values[i], w))
        .collect())
}

/// Fourier transform of the push-forward of `base` by the graph map.
pub fn empirical_ft(path: &SamplePath, base: &BaseMeasure, xi: (f64, f64)) -> Result<Complex64> {
    Ok(transform(&atoms(path, base)?, xi))
}

/// Assigns `ξ` to the horizontal cone `H_u` or the vertical cone `V_u`.
pub fn cone_classify(xi: (f64, f64), rho: f64) -> Result<Cone> {
    if !(0.5..1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho = {rho} not in [1/2, 1)")));
    }
    let u = xi.0.hypot(xi.1);
    if !(u > 1.0) {
        return Err(Error::Domain(format!("|xi| = {u} must exceed 1")));
    }
    let theta_u = u.powf(-rho).min(FRAC_PI_4);
    let mut theta = xi.1.atan2(xi.0);
    if theta < 0.0 {
        theta += TAU;
    }
    let horizontal = theta <= theta_u || (theta - PI).abs() <= theta_u || theta >= TAU - theta_u;
    Ok(if horizontal {
        Cone::Horizontal
    } else {
        Cone::Vertical
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierScanSample {
    pub xi: (f64, f64),
    pub u: f64,
    pub theta: f64,
    pub cone: Cone,
    pub rho: f64,
    pub ft_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeSlopes {
    /// Decay exponents `-2·slope` of the per-level maximum within each cone.
    pub horizontal: Option<f64>,
    pub vertical: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierFit {
    /// `-2·slope` of `log max_θ |μ̂(u, θ)|` against `log u`, floored at 0.
    pub alpha_hat: f64,
    pub alpha_clamped: bool,
    pub slope: f64,
    pub r_squared: f64,
    pub per_level_max: Vec<f64>,
    pub per_cone: ConeSlopes,
    /// Smallest decay exponent fitted along a single direction `θ`, floored at 0.
    pub worst_direction_alpha: Option<f64>,
    pub worst_direction_theta: Option<f64>,
    /// Directions left out of the per-direction fit because some level sat
    /// at the numerical-zero floor.
    pub directions_at_floor: usize,
    pub samples: Vec<FourierScanSample>,
}

/// Magnitudes below this fraction of the total mass are treated as exact zeros.
const ZERO_FLOOR: f64 = 1e-12;

fn decay_alpha(u_levels: &[f64], magnitudes: &[f64]) -> Result<(f64, f64, f64)> {
    let x: Vec<f64> = u_levels.iter().map(|u| u.ln()).collect();
    let y: Vec<f64> = magnitudes.iter().map(|m| m.ln()).collect();
    let fit = ols(&x, &y)?;
    Ok((-2.0 * fit.slope, fit.slope, fit.r_squared))
}

/// Scans `|μ̂|` on the polar lattice `u ∈ u_levels`, `θ = πk/angles_per_level`
/// and fits decay exponents. Only the upper half plane is scanned because
/// `|μ̂(-ξ)| = |μ̂(ξ)|` for a real measure.
pub fn fourier_decay_fit(
    path: &SamplePath,
    base: &BaseMeasure,
    u_levels: &[f64],
    angles_per_level: usize,
    rho: f64,
) -> Result<FourierFit> {
    if angles_per_level < 64 {
        return Err(Error::Validation(format!(
            "angles_per_level = {angles_per_level} is below 64"
        )));
    }
    if u_levels.len() < 3 {
        return Err(Error::Validation(
            "need at least three magnitude levels".into(),
        ));
    }
    if u_levels.iter().any(|u| !(*u > 1.0)) || u_levels.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Validation(
            "magnitude levels must exceed 1 and increase".into(),
        ));
    }
    let atoms = atoms(path, base)?;
    let mass: f64 = atoms.iter().map(|a| a.2).sum();
    let lattice: Vec<(usize, usize)> = (0..u_levels.len())
        .flat_map(|l| (0..angles_per_level).map(move |k| (l, k)))
        .collect();
    let samples: Vec<FourierScanSample> = lattice
        .par_iter()
        .map(|&(l, k)| {
            let u = u_levels[l];
            let theta = PI * k as f64 / angles_per_level as f64;
            let xi = if k == 0 {
                (u, 0.0)
            } else {
                (u * theta.cos(), u * theta.sin())
            };
            let cone = cone_classify(xi, rho)?;
            Ok(FourierScanSample {
                xi,
                u,
                theta,
                cone,
                rho,
                ft_abs: transform(&atoms, xi).norm(),
            })
        })
        .collect::<Result<_>>()?;

    let level_rows = |l: usize| &samples[l * angles_per_level..(l + 1) * angles_per_level];
    let per_level_max: Vec<f64> = (0..u_levels.len())
        .map(|l| level_rows(l).iter().map(|s| s.ft_abs).fold(0.0, f64::max))
        .collect();
    if let Some(l) = per_level_max.iter().position(|&m| m <= ZERO_FLOOR * mass) {
        return Err(Error::Degenerate(format!(
            "transform vanishes at every angle for u = {}",
            u_levels[l]
        )));
    }
    let (alpha, slope, r_squared) = decay_alpha(u_levels, &per_level_max)?;

    let cone_alpha = |cone: Cone| -> Option<f64> {
        let maxima: Option<Vec<f64>> = (0..u_levels.len())
            .map(|l| {
                let m = level_rows(l)
                    .iter()
                    .filter(|s| s.cone == cone)
                    .map(|s| s.ft_abs)
                    .fold(f64::NEG_INFINITY, f64::max);
                (m > ZERO_FLOOR * mass).then_some(m)
            })
            .collect();
        maxima
            .and_then(|m| decay_alpha(u_levels, &m).ok())
            .map(|a| a.0)
    };
    let per_cone = ConeSlopes {
        horizontal: cone_alpha(Cone::Horizontal),
        vertical: cone_alpha(Cone::Vertical),
    };

    let mut directions_at_floor = 0;
    let mut worst: Option<(f64, f64)> = None;
    for k in 0..angles_per_level {
        let mags: Vec<f64> = (0..u_levels.len())
            .map(|l| level_rows(l)[k].ft_abs)
            .collect();
        if mags.iter().any(|&m| m <= ZERO_FLOOR * mass) {
            directions_at_floor += 1;
            continue;
        }
        let (a, _, _) = decay_alpha(u_levels, &mags)?;
        if worst.is_none_or(|(w, _)| a < w) {
            worst = Some((a, level_rows(0)[k].theta));
        }
    }

    Ok(FourierFit {
        alpha_hat: alpha.max(0.0),
        alpha_clamped: alpha < 0.0,
        slope,
        r_squared,
        per_level_max,
        per_cone,
        worst_direction_alpha: worst.map(|w| w.0.max(0.0)),
        worst_direction_theta: worst.map(|w| w.1),
        directions_at_floor,
        samples,
    })
}

/// Scan dump with header `xi1,xi2,u,cone,ft_abs`.
pub fn write_scan_csv<W: Write>(samples: &[FourierScanSample], mut out: W) -> Result<()> {
    writeln!(out, "xi1,xi2,u,cone,ft_abs")?;
    for s in samples {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{},{:.16e}",
            s.xi.0,
            s.xi.1,
            s.u,
            s.cone.as_str(),
            s.ft_abs
        )?;
    }
    Ok(())
}
