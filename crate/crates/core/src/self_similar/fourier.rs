use std::f64::consts::TAU;

use num_complex::Complex64;

use super::ifs::Ifs;
use crate::error::{Error, Result};

/// Fourier transform `∫ e^{-2πiξx} dμ(x)` of an equicontractive self-similar
/// measure from the product `∏_{k=1}^{terms} Σ_i p_i e^{-2πiξ d_i r^{k-1}}`.
pub fn self_similar_ft(ifs: &Ifs, xi: f64, terms: usize) -> Result<Complex64> {
    if !ifs.is_equicontractive() {
        return Err(Error::Precondition(
            "product formula needs equal contraction ratios".into(),
        ));
    }
    let r = ifs.ratios()[0];
    let mut scale = 1.0;
    let mut value = Complex64::new(1.0, 0.0);
    for _ in 0..terms {
        let factor: Complex64 = ifs
            .translations()
            .iter()
            .zip(ifs.weights())
            .map(|(&d, &p)| {
                let phase = xi * d * scale;
                p * Complex64::from_polar(1.0, -TAU * (phase - phase.round()))
            })
            .sum();
        value *= factor;
        scale *= r;
    }
    Ok(value)
}
