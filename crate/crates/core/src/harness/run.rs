//! Experiment pipelines behind each configuration `kind`.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::config::{BaseSpec, Experiment, ExperimentConfig, HolderCase, IndexKind};
use super::report::{
    CheckOutcome, EnsembleSummary, ExperimentReport, PathEstimate, SCHEMA_VERSION,
};
use crate::error::{Error, Result};
use crate::estimators::{
    box_dim_fit, empirical_ft, empirical_lq, energy_integral, fourier_decay_fit, write_scan_csv,
    BaseMeasure,
};
use crate::process::{sample_additive_bm, FbmSampler, RngStream, SamplePath, TimeGrid};
use crate::self_similar::{
    box_dimension, child_counts, enumerate_lambda_n, lq_spectrum, measure_quadrature,
    predicted_graph_dim, self_similar_ft, Ifs,
};
use crate::variance::{alpha_grid, estimate_lower_index, estimate_upper_index, VarianceFunction};

const SPECTRUM_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Record wall-clock time in the report.
    pub timing: bool,
    /// Directory for auxiliary CSV output (Fourier scans).
    pub output_dir: Option<std::path::PathBuf>,
}

/// Path generator for one configuration: plain increments for `H = 1/2`,
/// a cached Cholesky factor otherwise.
pub enum Sampler {
    Brownian { v: VarianceFunction, grid: TimeGrid },
    Fractional(Box<FbmSampler>),
}

impl Sampler {
    pub fn new(v: &VarianceFunction, hurst: f64, grid: &TimeGrid) -> Result<Self> {
        if hurst == 0.5 {
            Ok(Self::Brownian {
                v: v.clone(),
                grid: grid.clone(),
            })
        } else {
            Ok(Self::Fractional(Box::new(FbmSampler::new(v, hurst, grid)?)))
        }
    }

    pub fn sample(&self, rng: RngStream) -> Result<SamplePath> {
        match self {
            Self::Brownian { v, grid } => sample_additive_bm(v, grid, rng),
            Self::Fractional(s) => Ok(s.sample(rng)),
        }
    }
}

fn build_variance(config: &ExperimentConfig) -> Result<VarianceFunction> {
    config
        .variance
        .as_ref()
        .ok_or_else(|| {
            Error::Validation(format!("preset {} has no [variance] table", config.preset))
        })?
        .build()
}

fn build_base(spec: &BaseSpec) -> Result<BaseMeasure> {
    match spec {
        BaseSpec::Lebesgue => Ok(BaseMeasure::LebesgueOnGrid),
        BaseSpec::Quadrature {
            ifs,
            level,
            base_scale,
        } => BaseMeasure::quadrature(measure_quadrature(&ifs.build()?, *level, *base_scale)?),
    }
}

/// Grid for a path-producing experiment: the quadrature nodes when the
/// base measure is atomic, otherwise `grid_size` uniform points.
fn experiment_grid(config: &ExperimentConfig, v: &VarianceFunction) -> Result<TimeGrid> {
    let base = match &config.experiment {
        Experiment::FourierScan { base, .. } | Experiment::AxisDecay { base, .. } => Some(base),
        _ => None,
    };
    match base {
        Some(spec @ BaseSpec::Quadrature { .. }) => {
            build_base(spec)?.quadrature_grid(v.domain_end())
        }
        _ => TimeGrid::uniform(config.grid_size, v.domain_end()),
    }
}

/// Simulates the configured ensemble in stream-index order.
pub fn simulate_ensemble(config: &ExperimentConfig) -> Result<Vec<SamplePath>> {
    config.validate()?;
    let v = build_variance(config)?;
    let grid = experiment_grid(config, &v)?;
    let sampler = Sampler::new(&v, config.hurst, &grid)?;
    (0..config.ensemble as u64)
        .into_par_iter()
        .map(|i| sampler.sample(RngStream::new(config.root_seed, i)))
        .collect()
}

/// Writes `path_NNNN.csv` per ensemble member and `manifest.json`.
pub fn dump_paths(config: &ExperimentConfig, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let paths = simulate_ensemble(config)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::with_capacity(paths.len() + 1);
    let mut entries = Vec::with_capacity(paths.len());
    for path in &paths {
        let name = format!("path_{:04}.csv", path.stream_index);
        let file = dir.join(&name);
        path.save_csv(&file)?;
        entries.push(
            json!({ "file": name, "root_seed": path.seed, "stream_index": path.stream_index }),
        );
        written.push(file);
    }
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "preset": config.preset,
        "rng": RngStream::ALGORITHM,
        "root_seed": config.root_seed,
        "variance": paths.first().map(|p| p.v_name.clone()),
        "hurst": config.hurst,
        "grid_points": paths.first().map(|p| p.len()),
        "paths": entries,
    });
    let file = dir.join("manifest.json");
    let mut text =
        serde_json::to_string_pretty(&manifest).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    std::fs::write(&file, text).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
    written.push(file);
    Ok(written)
}

#[derive(Default)]
struct Outcome {
    per_path: Vec<PathEstimate>,
    summary_values: Vec<f64>,
    metrics: BTreeMap<String, f64>,
    details: serde_json::Map<String, serde_json::Value>,
}

impl Outcome {
    fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    fn summary_metrics(&mut self, prefix: &str, values: &[f64]) {
        if let Some(s) = EnsembleSummary::of(values) {
            self.metric(format!("{prefix}mean"), s.mean);
            self.metric(format!("{prefix}median"), s.median);
            self.metric(format!("{prefix}standard_error"), s.standard_error);
            self.metric(format!("{prefix}min"), s.min);
            self.metric(format!("{prefix}max"), s.max);
        }
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Runs a configuration and assembles its report. Pipeline errors are
/// recorded in the report rather than returned.
pub fn run_config(config: &ExperimentConfig, options: &RunOptions) -> ExperimentReport {
    let start = Instant::now();
    let result = config.validate().and_then(|_| execute(config, options));
    let (outcome, error) = match result {
        Ok(o) => (o, None),
        Err(e) => (Outcome::default(), Some(e.to_string())),
    };
    let checks: Vec<CheckOutcome> = config
        .checks
        .iter()
        .map(|c| CheckOutcome::evaluate(c, &outcome.metrics))
        .collect();
    let passed = error.is_none() && (!config.asserted || checks.iter().all(|c| c.passed));
    ExperimentReport {
        schema_version: SCHEMA_VERSION.to_string(),
        preset: config.preset.clone(),
        config: config.clone(),
        per_path: outcome.per_path,
        summary: EnsembleSummary::of(&outcome.summary_values),
        metrics: outcome.metrics,
        details: serde_json::Value::Object(outcome.details),
        prediction: config.prediction.clone(),
        asserted: config.asserted,
        checks,
        passed,
        error,
        wall_clock_seconds: options.timing.then(|| start.elapsed().as_secs_f64()),
    }
}

fn execute(config: &ExperimentConfig, options: &RunOptions) -> Result<Outcome> {
    match &config.experiment {
        Experiment::LqTable { ifs, q } => lq_table(&ifs.build()?, q),
        Experiment::BoxDimension { levels, lq_q } => box_dimension_ensemble(config, *levels, lq_q),
        Experiment::Multifractal {
            ifs,
            hurst_values,
            levels,
        } => multifractal(config, &ifs.build()?, hurst_values, *levels),
        Experiment::HolderIndex { cases } => holder_index(cases),
        Experiment::FbmLaw { hurst_values } => fbm_law(config, hurst_values),
        Experiment::FourierScan {
            base,
            u_levels,
            angles_per_level,
            rho,
        } => fourier_scan(config, options, base, u_levels, *angles_per_level, *rho),
        Experiment::AxisDecay {
            base,
            axis_base,
            exponents,
            oracle_terms,
            angles_per_level,
            rho,
        } => axis_decay(
            config,
            base,
            *axis_base,
            *exponents,
            *oracle_terms,
            *angles_per_level,
            *rho,
        ),
        Experiment::InverseWordsets {
            catalog,
            samples,
            tol,
            ifs,
            max_level,
        } => inverse_wordsets(config, catalog, *samples, *tol, ifs, *max_level),
        Experiment::EnergyDichotomy { stride, s_values } => {
            energy_dichotomy(config, *stride, s_values)
        }
    }
}

fn lq_table(ifs: &Ifs, qs: &[f64]) -> Result<Outcome> {
    let mut out = Outcome::default();
    let dim = box_dimension(ifs, SPECTRUM_TOL)?;
    let mut worst: f64 = 0.0;
    let mut table = Vec::new();
    for &q in qs {
        let tau = lq_spectrum(ifs, q, SPECTRUM_TOL)?;
        let linear = (q - 1.0) * dim;
        worst = worst.max((tau - linear).abs());
        out.metric(format!("tau_q{q}"), tau);
        table.push(json!({ "q": q, "tau": tau, "linear": linear }));
    }
    out.metric("box_dimension", dim);
    out.metric("max_abs_error", worst);
    out.details.insert("table".into(), json!(table));
    Ok(out)
}

fn box_dimension_ensemble(
    config: &ExperimentConfig,
    levels: [u32; 2],
    lq_q: &[f64],
) -> Result<Outcome> {
    let v = build_variance(config)?;
    let grid = TimeGrid::uniform(config.grid_size, v.domain_end())?;
    let sampler = Sampler::new(&v, config.hurst, &grid)?;
    let per_path: Vec<PathEstimate> = (0..config.ensemble as u64)
        .into_par_iter()
        .map(|i| {
            let path = sampler.sample(RngStream::new(config.root_seed, i))?;
            let fit = box_dim_fit(&path, levels[0], levels[1])?;
            let mut values = BTreeMap::from([
                ("box_dimension".to_string(), fit.value),
                ("r_squared".to_string(), fit.r_squared),
            ]);
            for &q in lq_q {
                let tau = empirical_lq(&path, q, &[levels[1]])?[0].1;
                values.insert(format!("lq_q{q}"), tau);
            }
            Ok(PathEstimate {
                stream_index: i,
                values,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome::default();
    let dims: Vec<f64> = per_path.iter().map(|p| p.values["box_dimension"]).collect();
    out.summary_metrics("", &dims);
    for &q in lq_q {
        let key = format!("lq_q{q}");
        let taus: Vec<f64> = per_path.iter().map(|p| p.values[&key]).collect();
        out.metric(
            format!("{key}_mean"),
            EnsembleSummary::of(&taus).map_or(f64::NAN, |s| s.mean),
        );
    }
    out.details.insert("variance".into(), json!(v.name()));
    out.summary_values = dims;
    out.per_path = per_path;
    Ok(out)
}

fn multifractal(
    config: &ExperimentConfig,
    ifs: &Ifs,
    hurst_values: &[f64],
    levels: Option<[u32; 2]>,
) -> Result<Outcome> {
    let mut out = Outcome::default();
    let dim = box_dimension(ifs, SPECTRUM_TOL)?;
    let predictions = hurst_values
        .iter()
        .map(|&h| predicted_graph_dim(ifs, h, SPECTRUM_TOL))
        .collect::<Result<Vec<f64>>>()?;
    let mut order: Vec<usize> = (0..hurst_values.len()).collect();
    order.sort_by(|&a, &b| hurst_values[a].total_cmp(&hurst_values[b]));
    let decreasing = order
        .windows(2)
        .all(|w| predictions[w[1]] < predictions[w[0]]);
    let bounded = predictions.iter().all(|&p| p > 1.0 && p < 1.0 + dim);
    for (&h, &p) in hurst_values.iter().zip(&predictions) {
        out.metric(format!("predicted_h{h}"), p);
    }
    out.metric("decreasing_in_h", flag(decreasing));
    out.metric("within_bounds", flag(bounded));
    out.metric("support_box_dimension", dim);
    if let (Some(levels), Some(_)) = (levels, &config.variance) {
        let v = build_variance(config)?;
        let grid = TimeGrid::uniform(config.grid_size, v.domain_end())?;
        for &h in hurst_values {
            let sampler = Sampler::new(&v, h, &grid)?;
            let dims = (0..config.ensemble as u64)
                .into_par_iter()
                .map(|i| {
                    Ok(box_dim_fit(
                        &sampler.sample(RngStream::new(config.root_seed, i))?,
                        levels[0],
                        levels[1],
                    )?
                    .value)
                })
                .collect::<Result<Vec<f64>>>()?;
            for (i, d) in dims.iter().enumerate() {
                out.per_path.push(PathEstimate {
                    stream_index: i as u64,
                    values: BTreeMap::from([
                        ("hurst".to_string(), h),
                        ("box_dimension".to_string(), *d),
                    ]),
                });
            }
            let mean = EnsembleSummary::of(&dims).map_or(f64::NAN, |s| s.mean);
            out.metric(format!("estimated_h{h}"), mean);
        }
    }
    Ok(out)
}

fn holder_case(case: &HolderCase) -> Result<(f64, serde_json::Value)> {
    let v = case.variance.build()?;
    let deltas: Vec<f64> = (case.delta_exponents[0]..=case.delta_exponents[1])
        .map(|k| case.delta_base.powi(-k))
        .collect();
    let grid = alpha_grid(case.alpha_min, case.alpha_max, case.alpha_step);
    let est = match case.index {
        IndexKind::Upper => {
            estimate_upper_index(&v, case.point, &deltas, &grid, case.pairs_per_window)?
        }
        IndexKind::Lower => {
            estimate_lower_index(&v, case.point, &deltas, &grid, case.pairs_per_window)?
        }
    };
    let value = match case.index {
        IndexKind::Upper => est.alpha_upper,
        IndexKind::Lower => est.alpha_lower,
    };
    let details = json!({
        "variance": v.name(),
        "point": case.point,
        "raw_estimate": est.raw_estimate,
        "lipschitz_bound_applied": est.lipschitz_bound_applied,
        "decision_slack": est.decision_slack,
        "unresolved_pairs": est.unresolved_pairs,
    });
    Ok((value.unwrap_or(f64::NAN), details))
}

fn holder_index(cases: &[HolderCase]) -> Result<Outcome> {
    let mut out = Outcome::default();
    for case in cases {
        let (value, details) = holder_case(case)?;
        out.metric(case.name.clone(), value);
        out.details.insert(case.name.clone(), details);
    }
    Ok(out)
}

fn fbm_law(config: &ExperimentConfig, hurst_values: &[f64]) -> Result<Outcome> {
    let v = build_variance(config)?;
    let grid = TimeGrid::uniform(config.grid_size, v.domain_end())?;
    let mut out = Outcome::default();
    let mut overall: f64 = 0.0;
    for &h in hurst_values {
        let sampler = FbmSampler::new(&v, h, &grid)?;
        let paths: Vec<Vec<f64>> = (0..config.ensemble as u64)
            .into_par_iter()
            .map(|i| sampler.sample(RngStream::new(config.root_seed, i)).values)
            .collect();
        let points = grid.points();
        let clock: Vec<f64> = points.iter().map(|&t| v.eval(t)).collect::<Result<_>>()?;
        let idx: Vec<usize> = (0..points.len()).filter(|&i| clock[i] > 0.0).collect();
        let n = paths.len() as f64;
        let means: Vec<f64> = (0..points.len())
            .map(|k| paths.iter().map(|p| p[k]).sum::<f64>() / n)
            .collect();
        let mut worst: f64 = 0.0;
        for &a in &idx {
            for &b in &idx {
                if b < a {
                    continue;
                }
                let prods: Vec<f64> = paths
                    .iter()
                    .map(|p| (p[a] - means[a]) * (p[b] - means[b]))
                    .collect();
                let cov = prods.iter().sum::<f64>() / (n - 1.0);
                let var = prods.iter().map(|x| (x - cov) * (x - cov)).sum::<f64>() / (n - 1.0);
                let se = (var / n).sqrt();
                let h2 = 2.0 * h;
                let exact = 0.5
                    * (clock[a].powf(h2) + clock[b].powf(h2)
                        - (clock[a] - clock[b]).abs().powf(h2));
                worst = worst.max((cov - exact).abs() / se);
            }
        }
        out.metric(format!("max_z_h{h}"), worst);
        overall = overall.max(worst);
    }
    out.metric("max_z", overall);
    Ok(out)
}

fn fourier_scan(
    config: &ExperimentConfig,
    options: &RunOptions,
    base_spec: &BaseSpec,
    u_levels: &[f64],
    angles: usize,
    rho: f64,
) -> Result<Outcome> {
    let v = build_variance(config)?;
    let base = build_base(base_spec)?;
    let grid = experiment_grid(config, &v)?;
    let sampler = Sampler::new(&v, config.hurst, &grid)?;
    let mut out = Outcome::default();
    let mut alphas = Vec::with_capacity(config.ensemble);
    // The lattice is already parallel, so paths run one after another.
    for i in 0..config.ensemble as u64 {
        let path = sampler.sample(RngStream::new(config.root_seed, i))?;
        let fit = fourier_decay_fit(&path, &base, u_levels, angles, rho)?;
        if let Some(dir) = &options.output_dir {
            std::fs::create_dir_all(dir)?;
            let file = std::fs::File::create(dir.join(format!("scan_{i:04}.csv")))?;
            write_scan_csv(&fit.samples, std::io::BufWriter::new(file))?;
        }
        let mut values = BTreeMap::from([
            ("alpha_hat".to_string(), fit.alpha_hat),
            ("alpha_clamped".to_string(), flag(fit.alpha_clamped)),
            ("r_squared".to_string(), fit.r_squared),
        ]);
        if let Some(a) = fit.worst_direction_alpha {
            values.insert("single_direction_min_alpha".into(), a);
        }
        if let Some(a) = fit.per_cone.horizontal {
            values.insert("horizontal_alpha".into(), a);
        }
        if let Some(a) = fit.per_cone.vertical {
            values.insert("vertical_alpha".into(), a);
        }
        alphas.push(fit.alpha_hat);
        out.per_path.push(PathEstimate {
            stream_index: i,
            values,
        });
    }
    out.summary_metrics("alpha_hat_", &alphas);
    out.details.insert("variance".into(), json!(v.name()));
    out.details.insert(
        "fourier_dimension_bound".into(),
        json!(v.fourier_dimension_bound()),
    );
    out.summary_values = alphas;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn axis_decay(
    config: &ExperimentConfig,
    base_spec: &BaseSpec,
    axis_base: f64,
    exponents: [i32; 2],
    terms: usize,
    angles: usize,
    rho: f64,
) -> Result<Outcome> {
    let BaseSpec::Quadrature { ifs, .. } = base_spec else {
        return Err(Error::Validation(
            "axis-decay needs a quadrature base".into(),
        ));
    };
    let ifs = ifs.build()?;
    let v = build_variance(config)?;
    let base = build_base(base_spec)?;
    let grid = experiment_grid(config, &v)?;
    let sampler = Sampler::new(&v, config.hurst, &grid)?;
    let path = sampler.sample(RngStream::new(config.root_seed, 0))?;
    let mut out = Outcome::default();
    let mut worst_error: f64 = 0.0;
    let mut smallest = f64::INFINITY;
    let mut rows = Vec::new();
    let u_levels: Vec<f64> = (exponents[0]..=exponents[1])
        .map(|n| axis_base.powi(n))
        .collect();
    for &xi in &u_levels {
        let value = empirical_ft(&path, &base, (xi, 0.0))?.norm();
        let oracle = self_similar_ft(&ifs, xi, terms)?.norm();
        worst_error = worst_error.max((value - oracle).abs());
        smallest = smallest.min(value);
        rows.push(json!({ "xi1": xi, "ft_abs": value, "oracle": oracle }));
    }
    let fit = fourier_decay_fit(&path, &base, &u_levels, angles, rho)?;
    out.metric("max_oracle_error", worst_error);
    out.metric("min_axis_abs", smallest);
    out.metric("alpha_hat", fit.alpha_hat);
    if let Some(a) = fit.per_cone.horizontal {
        out.metric("horizontal_alpha", a);
    }
    if let Some(a) = fit.per_cone.vertical {
        out.metric("vertical_alpha", a);
    }
    out.details.insert("axis".into(), json!(rows));
    out.details
        .insert("per_level_max".into(), json!(fit.per_level_max));
    Ok(out)
}

fn inverse_wordsets(
    config: &ExperimentConfig,
    catalog: &[crate::variance::VarianceSpec],
    samples: usize,
    tol: f64,
    ifs_specs: &[crate::self_similar::IfsSpec],
    max_level: u32,
) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut worst_roundtrip: f64 = 0.0;
    let mut per_entry = serde_json::Map::new();
    for (k, spec) in catalog.iter().enumerate() {
        let v = spec.build()?;
        let top = v.total()?;
        let mut rng = RngStream::new(config.root_seed, k as u64).generator();
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let s = rng.random::<f64>() * top;
            let t = v.generalized_inverse(s, tol)?;
            worst = worst.max((v.eval(t)? - s).abs());
        }
        per_entry.insert(v.name(), json!(worst));
        worst_roundtrip = worst_roundtrip.max(worst);
    }
    let mut worst_mass: f64 = 0.0;
    let mut max_children = 0usize;
    let mut per_ifs = Vec::new();
    for spec in ifs_specs {
        let ifs = spec.build()?;
        let t = ifs.max_ratio();
        let sets = (1..=max_level + 1)
            .map(|n| enumerate_lambda_n(&ifs, t, n))
            .collect::<Result<Vec<_>>>()?;
        let mut maxima = Vec::new();
        for n in 0..max_level as usize {
            worst_mass = worst_mass.max((sets[n].total_weight() - 1.0).abs());
            let counts = child_counts(&sets[n], &sets[n + 1])?;
            maxima.push(counts.into_iter().max().unwrap_or(0));
        }
        max_children = max_children.max(maxima.iter().copied().max().unwrap_or(0));
        per_ifs.push(
            json!({ "ratios": ifs.ratios(), "base_scale": t, "max_children_per_level": maxima }),
        );
    }
    out.metric("max_roundtrip_error", worst_roundtrip);
    out.metric("max_mass_error", worst_mass);
    out.metric("max_children", max_children as f64);
    out.details
        .insert("roundtrip".into(), serde_json::Value::Object(per_entry));
    out.details.insert("word_sets".into(), json!(per_ifs));
    Ok(out)
}

fn energy_dichotomy(config: &ExperimentConfig, stride: usize, s_values: &[f64]) -> Result<Outcome> {
    let v = build_variance(config)?;
    let grid = TimeGrid::uniform(config.grid_size, v.domain_end())?;
    let sampler = Sampler::new(&v, config.hurst, &grid)?;
    let fine = sampler.sample(RngStream::new(config.root_seed, 0))?;
    let coarse = fine.subsample(stride)?;
    let base = BaseMeasure::LebesgueOnGrid;
    let mut out = Outcome::default();
    let mut changes = Vec::new();
    for &s in s_values {
        let a = energy_integral(&coarse, &base, s)?;
        let b = energy_integral(&fine, &base, s)?;
        let change = (b - a).abs() / a;
        out.metric(format!("energy_coarse_s{s}"), a);
        out.metric(format!("energy_fine_s{s}"), b);
        out.metric(format!("change_s{s}"), change);
        changes.push(change);
    }
    if let (Some(first), Some(last)) = (changes.first(), changes.last()) {
        out.metric("change_gap", last - first);
    }
    out.details
        .insert("coarse_points".into(), json!(coarse.len()));
    out.details.insert("fine_points".into(), json!(fine.len()));
    Ok(out)
}
