//! Catalog of variance functions `V`, their generalized inverses
//! `T(s) = inf{t : V(t) > s}`, and local uniform Hölder index estimators.

mod cantor;
mod holder;
mod iterated;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::self_similar::{Ifs, IfsSpec};

pub use cantor::{cantor_function, SIGNIFICANT_DIGITS};
pub use holder::{
    alpha_grid, default_deltas, estimate_lower_index, estimate_upper_index, HolderIndexEstimate,
    IndexSearch, SupremumRow,
};
pub use iterated::IteratedCdf;

/// The analytic shape of a variance function on its natural domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum VarianceKind {
    Identity,
    PowerLaw {
        beta: f64,
    },
    /// Sorted `(t, v)` knots starting at `(0, 0)`; the domain ends at the last knot.
    PiecewiseLinear {
        breakpoints: Vec<(f64, f64)>,
    },
    CantorStaircase,
    SelfSimilarCdf {
        ifs: Ifs,
        depth: usize,
    },
    IteratedCdf(IteratedCdf),
}

/// A continuous non-decreasing `V` on `[0, S]` with `V(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceFunction {
    kind: VarianceKind,
    domain_end: f64,
    strictly_increasing: bool,
    inverse_holder_gamma: Option<f64>,
}

impl VarianceFunction {
    pub fn new(kind: VarianceKind, domain_end: f64) -> Result<Self> {
        if !(domain_end > 0.0 && domain_end.is_finite()) {
            return Err(Error::Validation(format!(
                "domain end {domain_end} must be positive"
            )));
        }
        let (strictly_increasing, gamma) = match &kind {
            VarianceKind::Identity => (true, Some(1.0)),
            VarianceKind::PowerLaw { beta } => {
                if !(*beta > 0.0 && beta.is_finite()) {
                    return Err(Error::Validation(format!(
                        "power-law exponent {beta} must be positive"
                    )));
                }
                (true, Some((1.0 / beta).min(1.0)))
            }
            VarianceKind::PiecewiseLinear { breakpoints } => {
                validate_breakpoints(breakpoints, domain_end)?;
                let strict = breakpoints.windows(2).all(|w| w[1].1 > w[0].1);
                (strict, strict.then_some(1.0))
            }
            VarianceKind::CantorStaircase => (false, None),
            VarianceKind::SelfSimilarCdf { ifs, .. } => {
                if !ifs.convex_osc() {
                    return Err(Error::Precondition(
                        "self-similar CDF by interval descent needs the convex open set condition"
                            .into(),
                    ));
                }
                (ifs.images_cover_unit_interval(), None)
            }
            VarianceKind::IteratedCdf(cdf) => {
                let full = cdf.ifs().images_cover_unit_interval();
                (full, None)
            }
        };
        Ok(Self {
            kind,
            domain_end,
            strictly_increasing,
            inverse_holder_gamma: gamma,
        })
    }

    pub fn identity() -> Self {
        Self::new(VarianceKind::Identity, 1.0).expect("valid")
    }

    /// `V(t) = t` on `[0, end]`.
    pub fn identity_on(end: f64) -> Result<Self> {
        Self::new(VarianceKind::Identity, end)
    }

    pub fn power_law(beta: f64) -> Result<Self> {
        Self::new(VarianceKind::PowerLaw { beta }, 1.0)
    }

    pub fn cantor_staircase() -> Self {
        Self::new(VarianceKind::CantorStaircase, 1.0).expect("valid")
    }

    pub fn piecewise_linear(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        let end = breakpoints
            .last()
            .map(|b| b.0)
            .ok_or_else(|| Error::Validation("no breakpoints".into()))?;
        Self::new(VarianceKind::PiecewiseLinear { breakpoints }, end)
    }

    pub fn self_similar_cdf(ifs: Ifs, depth: usize) -> Result<Self> {
        Self::new(VarianceKind::SelfSimilarCdf { ifs, depth }, 1.0)
    }

    /// Builds the grid CDF of the self-similar measure of `ifs`.
    pub fn build_iterated_cdf(ifs: Ifs, grid_size: usize, iterations: usize) -> Result<Self> {
        Self::new(
            VarianceKind::IteratedCdf(IteratedCdf::build(ifs, grid_size, iterations)?),
            1.0,
        )
    }

    /// Overrides the known Hölder exponent of `T = V^{-1}`.
    pub fn with_inverse_holder_gamma(mut self, gamma: Option<f64>) -> Self {
        self.inverse_holder_gamma = gamma;
        self
    }

    pub fn kind(&self) -> &VarianceKind {
        &self.kind
    }

    pub fn domain_end(&self) -> f64 {
        self.domain_end
    }

    pub fn strictly_increasing(&self) -> bool {
        self.strictly_increasing
    }

    pub fn inverse_holder_gamma(&self) -> Option<f64> {
        self.inverse_holder_gamma
    }

    /// Lower bound `2γ / (2 + γ)` on the Fourier dimension of the graph when
    /// `T` is γ-Hölder.
    pub fn fourier_dimension_bound(&self) -> Option<f64> {
        self.inverse_holder_gamma.map(|g| 2.0 * g / (2.0 + g))
    }

    pub fn name(&self) -> String {
        match &self.kind {
            VarianceKind::Identity => "identity".into(),
            VarianceKind::PowerLaw { beta } => format!("power-law({beta})"),
            VarianceKind::PiecewiseLinear { breakpoints } => {
                format!("piecewise-linear({})", breakpoints.len())
            }
            VarianceKind::CantorStaircase => "cantor-staircase".into(),
            VarianceKind::SelfSimilarCdf { depth, .. } => {
                format!("self-similar-cdf(depth={depth})")
            }
            VarianceKind::IteratedCdf(cdf) => format!("iterated-cdf(grid={})", cdf.grid_size()),
        }
    }

    /// `V(t)` for `t ∈ [0, S]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= self.domain_end) {
            return Err(Error::Domain(format!(
                "t = {t} outside [0, {}]",
                self.domain_end
            )));
        }
        let s = self.domain_end;
        Ok(match &self.kind {
            VarianceKind::Identity => t,
            VarianceKind::PowerLaw { beta } => t.powf(*beta),
            VarianceKind::PiecewiseLinear { breakpoints } => eval_piecewise(breakpoints, t),
            VarianceKind::CantorStaircase => cantor_function(t / s),
            VarianceKind::SelfSimilarCdf { ifs, depth } => eval_self_similar(ifs, *depth, t / s),
            VarianceKind::IteratedCdf(cdf) => cdf.eval_unit(t / s)?,
        })
    }

    /// `V(S)`.
    pub fn total(&self) -> Result<f64> {
        self.eval(self.domain_end)
    }

    /// `T(s) = inf{t : V(t) > s}`, the right end of any plateau at level `s`.
    ///
    /// Bisection stops once the bracket is narrower than `tol` and
    /// `V(T(s)) - s <= tol`, or when the bracket reaches adjacent doubles.
    /// For `s = V(S)` the result is `S`.
    pub fn generalized_inverse(&self, s: f64, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("tolerance {tol} must be positive")));
        }
        let top = self.total()?;
        if !(s >= 0.0) {
            return Err(Error::Range(format!("level {s} is negative")));
        }
        if s > top {
            return Err(Error::Range(format!("level {s} exceeds V(S) = {top}")));
        }
        match &self.kind {
            VarianceKind::Identity => return Ok(s),
            VarianceKind::PowerLaw { beta } => return Ok(s.powf(1.0 / beta).min(self.domain_end)),
            _ => {}
        }
        if s == top {
            return Ok(self.domain_end);
        }
        let (mut lo, mut hi) = (0.0f64, self.domain_end);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid)? > s {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= tol && self.eval(hi)? - s <= tol {
                break;
            }
        }
        Ok(hi)
    }
}

fn validate_breakpoints(breakpoints: &[(f64, f64)], domain_end: f64) -> Result<()> {
    if breakpoints.len() < 2 {
        return Err(Error::Validation("need at least two breakpoints".into()));
    }
    if breakpoints[0] != (0.0, 0.0) {
        return Err(Error::Validation("first breakpoint must be (0, 0)".into()));
    }
    if breakpoints
        .windows(2)
        .any(|w| !(w[1].0 > w[0].0) || !(w[1].1 >= w[0].1))
    {
        return Err(Error::Validation(
            "breakpoints must have increasing t and non-decreasing v".into(),
        ));
    }
    if breakpoints[breakpoints.len() - 1].0 != domain_end {
        return Err(Error::Validation(
            "last breakpoint must sit at the domain end".into(),
        ));
    }
    Ok(())
}

fn eval_piecewise(breakpoints: &[(f64, f64)], t: f64) -> f64 {
    let i = breakpoints.partition_point(|b| b.0 <= t);
    if i == 0 {
        return breakpoints[0].1;
    }
    if i == breakpoints.len() {
        return breakpoints[i - 1].1;
    }
    let (t0, v0) = breakpoints[i - 1];
    let (t1, v1) = breakpoints[i];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Descends the cylinder tree of a convex-OSC IFS, adding the mass of every
/// cylinder lying left of `x`, then interpolates linearly inside the last one.
fn eval_self_similar(ifs: &Ifs, depth: usize, x: f64) -> f64 {
    // Work in the coordinates of the current cylinder so that the position
    // keeps full relative precision as the cylinders shrink.
    let (mut y, mut mass, mut value) = (x, 1.0, 0.0);
    'descend: for _ in 0..depth {
        for i in 0..ifs.len() {
            let lo = ifs.translations()[i];
            let hi = lo + ifs.ratios()[i];
            if y < lo {
                // In the gap before child i.
                return value;
            }
            if y <= hi {
                y = ((y - lo) / ifs.ratios()[i]).clamp(0.0, 1.0);
                mass *= ifs.weights()[i];
                continue 'descend;
            }
            value += mass * ifs.weights()[i];
        }
        return value;
    }
    value + mass * y
}

/// Configuration record for a catalog entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum VarianceSpec {
    Identity {
        #[serde(default)]
        domain_end: Option<f64>,
    },
    PowerLaw {
        beta: f64,
        #[serde(default)]
        domain_end: Option<f64>,
    },
    PiecewiseLinear {
        breakpoints: Vec<[f64; 2]>,
    },
    CantorStaircase {
        #[serde(default)]
        domain_end: Option<f64>,
    },
    SelfSimilarCdf {
        ifs: IfsSpec,
        depth: usize,
        #[serde(default)]
        domain_end: Option<f64>,
    },
    IteratedCdf {
        ifs: IfsSpec,
        grid_size: usize,
        iterations: usize,
        #[serde(default)]
        domain_end: Option<f64>,
        #[serde(default)]
        inverse_holder_gamma: Option<f64>,
    },
}

impl VarianceSpec {
    pub fn build(&self) -> Result<VarianceFunction> {
        match self {
            VarianceSpec::Identity { domain_end } => {
                VarianceFunction::new(VarianceKind::Identity, domain_end.unwrap_or(1.0))
            }
            VarianceSpec::PowerLaw { beta, domain_end } => VarianceFunction::new(
                VarianceKind::PowerLaw { beta: *beta },
                domain_end.unwrap_or(1.0),
            ),
            VarianceSpec::PiecewiseLinear { breakpoints } => VarianceFunction::piecewise_linear(
                breakpoints.iter().map(|b| (b[0], b[1])).collect(),
            ),
            VarianceSpec::CantorStaircase { domain_end } => {
                VarianceFunction::new(VarianceKind::CantorStaircase, domain_end.unwrap_or(1.0))
            }
            VarianceSpec::SelfSimilarCdf {
                ifs,
                depth,
                domain_end,
            } => VarianceFunction::new(
                VarianceKind::SelfSimilarCdf {
                    ifs: ifs.build()?,
                    depth: *depth,
                },
                domain_end.unwrap_or(1.0),
            ),
            VarianceSpec::IteratedCdf {
                ifs,
                grid_size,
                iterations,
                domain_end,
                inverse_holder_gamma,
            } => {
                let cdf = IteratedCdf::build(ifs.build()?, *grid_size, *iterations)?;
                let v = VarianceFunction::new(
                    VarianceKind::IteratedCdf(cdf),
                    domain_end.unwrap_or(1.0),
                )?;
                Ok(match inverse_holder_gamma {
                    Some(g) => v.with_inverse_holder_gamma(Some(*g)),
                    None => v,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_examples() {
        let cantor = VarianceFunction::cantor_staircase();
        assert_eq!(cantor.eval(0.0).unwrap(), 0.0);
        assert!((cantor.eval(1.0 / 3.0).unwrap() - 0.5).abs() < 1e-10);
        assert!((cantor.eval(0.25).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        let p6 = VarianceFunction::power_law(6.0).unwrap();
        assert_eq!(p6.eval(0.5).unwrap(), 1.0 / 64.0);
        assert!(!cantor.strictly_increasing());
        assert!(p6.strictly_increasing());
    }

    #[test]
    fn domain_errors() {
        let v = VarianceFunction::identity();
        assert!(matches!(v.eval(-0.1), Err(Error::Domain(_))));
        assert!(matches!(v.eval(1.5), Err(Error::Domain(_))));
        assert!(matches!(
            v.generalized_inverse(1.5, 1e-12),
            Err(Error::Range(_))
        ));
        assert!(VarianceFunction::power_law(-1.0).is_err());
    }

    #[test]
    fn inverse_examples() {
        let p2 = VarianceFunction::power_law(2.0).unwrap();
        assert!((p2.generalized_inverse(0.25, 1e-14).unwrap() - 0.5).abs() < 1e-14);
        let cantor = VarianceFunction::cantor_staircase();
        assert!((cantor.generalized_inverse(0.5, 1e-14).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(
            VarianceFunction::identity()
                .generalized_inverse(0.7, 1e-12)
                .unwrap(),
            0.7
        );
        assert_eq!(cantor.generalized_inverse(1.0, 1e-12).unwrap(), 1.0);
    }

    #[test]
    fn piecewise_plateau_inverse_is_right_endpoint() {
        let v = VarianceFunction::piecewise_linear(vec![
            (0.0, 0.0),
            (0.3, 0.3),
            (0.6, 0.3),
            (1.0, 1.0),
        ])
        .unwrap();
        assert!(!v.strictly_increasing());
        assert!((v.eval(0.45).unwrap() - 0.3).abs() < 1e-15);
        assert!((v.generalized_inverse(0.3, 1e-13).unwrap() - 0.6).abs() < 1e-12);
        assert!(
            VarianceFunction::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.4), (0.4, 0.6)]).is_err()
        );
        assert!(
            VarianceFunction::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.4), (1.0, 0.2)]).is_err()
        );
    }

    #[test]
    fn self_similar_cdf_matches_cantor() {
        let v = VarianceFunction::self_similar_cdf(Ifs::cantor3(), 40).unwrap();
        assert!(!v.strictly_increasing());
        for i in 0..=200 {
            let t = i as f64 / 200.0;
            // Both sides see t only to double precision; at Cantor-set points
            // the 0.63-Hölder modulus turns ulp-level offsets into ~1e-11.
            assert!(
                (v.eval(t).unwrap() - cantor_function(t)).abs() < 2e-10,
                "t = {t}"
            );
        }
        let uneven = VarianceFunction::self_similar_cdf(Ifs::uneven_2_4(), 30).unwrap();
        assert!((uneven.eval(0.6).unwrap() - 0.5).abs() < 1e-15);
        assert!(
            (uneven.eval(0.25).unwrap() - 0.25).abs() < 1e-12,
            "{}",
            uneven.eval(0.25).unwrap()
        );
    }

    #[test]
    fn scaled_domain() {
        let v = VarianceSpec::CantorStaircase {
            domain_end: Some(2.0),
        }
        .build()
        .unwrap();
        assert_eq!(v.eval(1.0).unwrap(), 0.5);
        assert_eq!(v.total().unwrap(), 1.0);
    }

    #[test]
    fn spec_records_parse() {
        let spec: VarianceSpec = toml::from_str("kind = \"power-law\"\nbeta = 6.0").unwrap();
        assert_eq!(
            spec.build().unwrap(),
            VarianceFunction::power_law(6.0).unwrap()
        );
        let spec: VarianceSpec = toml::from_str(
            "kind = \"iterated-cdf\"\ngrid_size = 129\niterations = 20\nifs = { preset = \"golden-bernoulli\" }",
        )
        .unwrap();
        let v = spec.build().unwrap();
        assert!(v.strictly_increasing());
        let spec: VarianceSpec =
            toml::from_str("kind = \"piecewise-linear\"\nbreakpoints = [[0.0, 0.0], [1.0, 2.0]]")
                .unwrap();
        assert_eq!(spec.build().unwrap().total().unwrap(), 2.0);
        assert!(toml::from_str::<VarianceSpec>("kind = \"nope\"").is_err());
    }

    #[test]
    fn fourier_bound_from_gamma() {
        assert!(
            (VarianceFunction::identity()
                .fourier_dimension_bound()
                .unwrap()
                - 2.0 / 3.0)
                .abs()
                < 1e-15
        );
        assert!(VarianceFunction::cantor_staircase()
            .fourier_dimension_bound()
            .is_none());
    }
}
