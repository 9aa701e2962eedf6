//! L^q spectra of self-similar measures, their Legendre transforms, and the
//! graph dimension they predict for time-changed fractional Brownian motion.

use serde::Serialize;

use super::ifs::Ifs;
use crate::error::{Error, Result};

const BRACKET: f64 = 64.0;

/// `tau ↦ Σ p_i^q r_i^{-tau}`, together with its derivative in `tau`.
fn moment_sum(ifs: &Ifs, q: f64, tau: f64) -> (f64, f64) {
    let mut value = 0.0;
    let mut slope = 0.0;
    for (p, r) in ifs.weights().iter().zip(ifs.ratios()) {
        let term = (q * p.ln() - tau * r.ln()).exp();
        value += term;
        slope -= r.ln() * term;
    }
    (value, slope)
}

/// Solves `Σ p_i^q r_i^{-tau} = 1` for `tau`.
///
/// The left side is strictly increasing in `tau`. The root is bracketed in
/// `[-64, 64]`, narrowed by bisection, then polished with safeguarded Newton
/// steps. Equicontractive systems are cross-checked against
/// `log(Σ p_i^q) / log r`.
pub fn lq_spectrum(ifs: &Ifs, q: f64, tol: f64) -> Result<f64> {
    if !ifs.convex_osc() {
        return Err(Error::Precondition(
            "L^q spectrum formula requires the convex open set condition".into(),
        ));
    }
    if !(tol > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("invalid q = {q} or tol = {tol}")));
    }
    let f = |tau: f64| moment_sum(ifs, q, tau).0 - 1.0;
    let (mut lo, mut hi) = (-BRACKET, BRACKET);
    if f(lo) > 0.0 || f(hi) < 0.0 {
        return Err(Error::Numerical(format!(
            "tau({q}) lies outside the bracket [-{BRACKET}, {BRACKET}]"
        )));
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut tau = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (value, slope) = moment_sum(ifs, q, tau);
        let residual = value - 1.0;
        if residual < 0.0 {
            lo = tau;
        } else {
            hi = tau;
        }
        let mut next = tau - residual / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - tau).abs();
        tau = next;
        if step <= tol * 1e-3 || hi - lo <= tol * 1e-3 {
            break;
        }
    }
    if ifs.is_equicontractive() {
        let sum: f64 = ifs.weights().iter().map(|p| p.powf(q)).sum();
        let closed = sum.ln() / ifs.ratios()[0].ln();
        if (closed - tau).abs() > tol.max(1e-12) {
            return Err(Error::Numerical(format!(
                "root finder ({tau}) disagrees with closed form ({closed})"
            )));
        }
    }
    Ok(tau)
}

/// Upper box dimension of the attractor, `-tau(0)`.
pub fn box_dimension(ifs: &Ifs, tol: f64) -> Result<f64> {
    Ok(-lq_spectrum(ifs, 0.0, tol)?)
}

/// Almost-sure Hausdorff dimension `1 - tau(H)` of the graph of `B^H_{V(t)}`
/// where `V` is the distribution function of the self-similar measure.
pub fn predicted_graph_dim(ifs: &Ifs, hurst: f64, tol: f64) -> Result<f64> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::Domain(format!("Hurst index {hurst} not in (0, 1)")));
    }
    Ok(1.0 - lq_spectrum(ifs, hurst, tol)?)
}

/// A function `q ↦ tau(q)` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledSpectrum {
    pub q: Vec<f64>,
    pub tau: Vec<f64>,
}

impl SampledSpectrum {
    pub fn from_fn(q_min: f64, q_max: f64, step: f64, f: impl Fn(f64) -> f64) -> Self {
        let n = ((q_max - q_min) / step).round() as usize;
        let q: Vec<f64> = (0..=n).map(|k| q_min + k as f64 * step).collect();
        let tau = q.iter().map(|&x| f(x)).collect();
        Self { q, tau }
    }

    /// Samples the exact spectrum of `ifs`.
    pub fn of_ifs(ifs: &Ifs, q_min: f64, q_max: f64, step: f64, tol: f64) -> Result<Self> {
        let n = ((q_max - q_min) / step).round() as usize;
        let q: Vec<f64> = (0..=n).map(|k| q_min + k as f64 * step).collect();
        let tau = q
            .iter()
            .map(|&x| lq_spectrum(ifs, x, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { q, tau })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegendrePoint {
    pub alpha: f64,
    pub value: f64,
    pub minimizing_q: f64,
    /// The minimum sits on the first or last grid point, so the infimum over
    /// all real q may be lower.
    pub at_boundary: bool,
}

/// `tau*(alpha) = min_q { q alpha - tau(q) }` over the sampled grid.
pub fn legendre_transform(spectrum: &SampledSpectrum, alpha: f64) -> Result<LegendrePoint> {
    let q = &spectrum.q;
    if q.len() != spectrum.tau.len() || q.len() < 2 {
        return Err(Error::Validation("spectrum grid is malformed".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    let first = q[0];
    let last = q[q.len() - 1];
    if first > -10.0 + 1e-9 || last < 10.0 - 1e-9 {
        return Err(Error::Precondition(format!(
            "q grid [{first}, {last}] must span at least [-10, 10]"
        )));
    }
    if q.windows(2)
        .any(|w| !(w[1] > w[0]) || w[1] - w[0] > 0.01 + 1e-12)
    {
        return Err(Error::Precondition(
            "q grid must be increasing with step <= 0.01".into(),
        ));
    }
    let (idx, value) = q
        .iter()
        .zip(&spectrum.tau)
        .map(|(q, t)| q * alpha - t)
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |best, (i, v)| if v < best.1 { (i, v) } else { best },
        );
    Ok(LegendrePoint {
        alpha,
        value,
        minimizing_q: q[idx],
        at_boundary: idx == 0 || idx == q.len() - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor_dim() -> f64 {
        2f64.ln() / 3f64.ln()
    }

    #[test]
    fn cantor_spectrum_is_linear() {
        let ifs = Ifs::cantor3();
        for q in [-3.0, 0.0, 0.5, 1.0, 2.0, 3.0, 7.5] {
            let tau = lq_spectrum(&ifs, q, 1e-13).unwrap();
            assert!(
                (tau - (q - 1.0) * cantor_dim()).abs() < 1e-12,
                "q={q} tau={tau}"
            );
        }
    }

    #[test]
    fn uneven_quadratic_root() {
        // x = 2^tau solves x^2 + x = 4.
        let expected = ((-1.0 + 17f64.sqrt()) / 2.0).log2();
        let tau = lq_spectrum(&Ifs::uneven_2_4(), 2.0, 1e-13).unwrap();
        assert!((tau - expected).abs() < 1e-12);
        assert!((tau - 0.642981).abs() < 1e-6);
    }

    #[test]
    fn q_one_is_zero() {
        for ifs in [Ifs::cantor3(), Ifs::uneven_2_4()] {
            assert!(lq_spectrum(&ifs, 1.0, 1e-12).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn overlapping_system_rejected() {
        let err = lq_spectrum(&Ifs::golden_bernoulli(), 2.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn staircase_prediction() {
        let d = predicted_graph_dim(&Ifs::cantor3(), 0.5, 1e-13).unwrap();
        assert!((d - (1.0 + 0.5 * cantor_dim())).abs() < 1e-12);
        assert!((d - 1.315465).abs() < 1e-6);
        let near_one = predicted_graph_dim(&Ifs::cantor3(), 1.0 - 1e-9, 1e-13).unwrap();
        assert!((near_one - 1.0).abs() < 1e-8);
        assert!(predicted_graph_dim(&Ifs::cantor3(), 1.0, 1e-12).is_err());
    }

    #[test]
    fn uneven_prediction_matches_dense_scan() {
        let ifs = Ifs::uneven_2_4();
        // Oracle: scan the monotone map on a fine grid, then refine by bisection
        // on the raw sum without Newton steps.
        let g = |tau: f64| 0.5f64.sqrt() * (0.5f64.powf(-tau) + 0.25f64.powf(-tau)) - 1.0;
        let mut k = -1000;
        while g(k as f64 * 1e-3) < 0.0 {
            k += 1;
        }
        let (mut lo, mut hi) = ((k - 1) as f64 * 1e-3, k as f64 * 1e-3);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let d = predicted_graph_dim(&ifs, 0.5, 1e-13).unwrap();
        assert!((d - (1.0 - 0.5 * (lo + hi))).abs() < 1e-10);
    }

    #[test]
    fn legendre_linear_spectrum() {
        let d = cantor_dim();
        let spectrum = SampledSpectrum::from_fn(-10.0, 10.0, 0.01, |q| (q - 1.0) * d);
        let point = legendre_transform(&spectrum, d).unwrap();
        assert!((point.value - d).abs() < 1e-12);
        let off = legendre_transform(&spectrum, d + 0.5).unwrap();
        assert!(off.at_boundary);
        assert_eq!(off.minimizing_q, -10.0);
    }

    #[test]
    fn legendre_rejects_short_grid() {
        let spectrum = SampledSpectrum::from_fn(-5.0, 5.0, 0.01, |q| q - 1.0);
        assert!(matches!(
            legendre_transform(&spectrum, 1.0),
            Err(Error::Precondition(_))
        ));
        let coarse = SampledSpectrum::from_fn(-10.0, 10.0, 0.1, |q| q - 1.0);
        assert!(legendre_transform(&coarse, 1.0).is_err());
    }

    #[test]
    fn legendre_uneven_at_information_dimension() {
        let ifs = Ifs::uneven_2_4();
        let h = 1e-4;
        let slope = (lq_spectrum(&ifs, 1.0 + h, 1e-14).unwrap()
            - lq_spectrum(&ifs, 1.0 - h, 1e-14).unwrap())
            / (2.0 * h);
        let coarse = SampledSpectrum::of_ifs(&ifs, -10.0, 10.0, 0.01, 1e-13).unwrap();
        let point = legendre_transform(&coarse, slope).unwrap();
        let box_dim = box_dimension(&ifs, 1e-13).unwrap();
        assert!(point.value >= -1e-9 && point.value <= box_dim + 1e-9);
        assert!(!point.at_boundary);
        // Brute-force oracle on a ten times finer grid.
        let fine = SampledSpectrum::of_ifs(&ifs, -10.0, 10.0, 0.001, 1e-13).unwrap();
        let brute = fine
            .q
            .iter()
            .zip(&fine.tau)
            .map(|(q, t)| q * slope - t)
            .fold(f64::INFINITY, f64::min);
        assert!((point.value - brute).abs() < 1e-4);
    }

    #[test]
    fn tilted_weights_sum_to_one() {
        let ifs = Ifs::uneven_2_4();
        for q in [0.3, 2.0, 5.0] {
            let tau = lq_spectrum(&ifs, q, 1e-14).unwrap();
            let total: f64 = ifs.tilted_weights(q, tau).iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
