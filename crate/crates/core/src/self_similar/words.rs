//! Uniform-scale cut sets of the IFS word tree and cylinder quadratures.

use serde::Serialize;

use super::ifs::Ifs;
use crate::error::{Error, Result};

const MAX_DEPTH: f64 = 64.0;
/// Relative slack when comparing a product of ratios with `t^n`.
const SCALE_SLACK: f64 = 1e-12;

/// A finite word `σ` with its cached cylinder data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Word {
    pub digits: Vec<u8>,
    /// `r_σ`, the length of `S_σ[0, 1]`.
    pub ratio: f64,
    /// `p_σ`, the measure of the cylinder.
    pub weight: f64,
    /// `S_σ(0)`.
    pub left: f64,
}

impl Word {
    pub fn midpoint(&self) -> f64 {
        self.left + 0.5 * self.ratio
    }
}

/// The cut set `{σ : r_σ <= t^n < r_{σ^-}}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordSet {
    pub base_scale: f64,
    pub level: u32,
    pub words: Vec<Word>,
}

impl WordSet {
    pub fn total_weight(&self) -> f64 {
        self.words.iter().map(|w| w.weight).sum()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn check_scale(ifs: &Ifs, t: f64, n: u32) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("base scale {t} not in (0, 1)")));
    }
    if n == 0 {
        return Err(Error::Domain("level must be at least 1".into()));
    }
    let depth = n as f64 * t.ln() / ifs.max_ratio().ln();
    if depth > MAX_DEPTH {
        return Err(Error::Resource(format!(
            "word depth {depth:.1} exceeds the bound {MAX_DEPTH}"
        )));
    }
    Ok(t.powi(n as i32) * (1.0 + SCALE_SLACK))
}

/// Depth-first enumeration of `Λ_n`: each branch stops at the first word
/// whose cylinder is no longer than `t^n`. Output is in lexicographic order.
pub fn enumerate_lambda_n(ifs: &Ifs, t: f64, n: u32) -> Result<WordSet> {
    let threshold = check_scale(ifs, t, n)?;
    let mut words = Vec::new();
    let root = Word {
        digits: Vec::new(),
        ratio: 1.0,
        weight: 1.0,
        left: 0.0,
    };
    let mut stack = vec![root];
    while let Some(word) = stack.pop() {
        if word.ratio <= threshold && !word.digits.is_empty() {
            words.push(word);
            continue;
        }
        for i in (0..ifs.len()).rev() {
            let mut digits = word.digits.clone();
            digits.push(i as u8);
            stack.push(Word {
                digits,
                ratio: word.ratio * ifs.ratios()[i],
                weight: word.weight * ifs.weights()[i],
                left: word.left + word.ratio * ifs.translations()[i],
            });
        }
    }
    Ok(WordSet {
        base_scale: t,
        level: n,
        words,
    })
}

/// `#Λ_{σ,n}` for every `σ ∈ Λ_n`, read off the two consecutive cut sets.
pub fn child_counts(level_n: &WordSet, level_next: &WordSet) -> Result<Vec<usize>> {
    let mut counts = vec![0usize; level_n.len()];
    for w in &level_next.words {
        // Λ_n is sorted lexicographically, so the prefix of w is the last
        // word not exceeding it.
        let idx = level_n.words.partition_point(|p| p.digits <= w.digits);
        let parent = idx
            .checked_sub(1)
            .filter(|&i| w.digits.starts_with(&level_n.words[i].digits))
            .ok_or_else(|| Error::Internal("word in Λ_{n+1} has no prefix in Λ_n".into()))?;
        counts[parent] += 1;
    }
    Ok(counts)
}

/// Midpoint rule for the self-similar measure: one node per cylinder of
/// `Λ_n` carrying its mass, ordered by position.
pub fn measure_quadrature(ifs: &Ifs, n: u32, t: f64) -> Result<Vec<(f64, f64)>> {
    if !ifs.convex_osc() {
        return Err(Error::Precondition(
            "cylinder quadrature requires the convex open set condition".into(),
        ));
    }
    let words = enumerate_lambda_n(ifs, t, n)?;
    let mut nodes: Vec<(f64, f64)> = words
        .words
        .iter()
        .map(|w| (w.midpoint(), w.weight))
        .collect();
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(nodes)
}
