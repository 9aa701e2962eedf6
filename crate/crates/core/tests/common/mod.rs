#![allow(dead_code)]

use std::sync::OnceLock;

use tcbm::self_similar::Ifs;
use tcbm::variance::VarianceFunction;

/// One instance of every catalog family.
pub fn catalog() -> &'static [VarianceFunction] {
    static CATALOG: OnceLock<Vec<VarianceFunction>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        vec![
            VarianceFunction::identity(),
            VarianceFunction::power_law(0.5).unwrap(),
            VarianceFunction::power_law(2.0).unwrap(),
            VarianceFunction::power_law(6.0).unwrap(),
            VarianceFunction::piecewise_linear(vec![
                (0.0, 0.0),
                (0.3, 0.3),
                (0.6, 0.3),
                (1.0, 1.0),
            ])
            .unwrap(),
            VarianceFunction::cantor_staircase(),
            VarianceFunction::self_similar_cdf(Ifs::uneven_2_4(), 40).unwrap(),
            VarianceFunction::build_iterated_cdf(Ifs::golden_bernoulli(), 4097, 60).unwrap(),
        ]
    })
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64
}
