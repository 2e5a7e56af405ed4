//! Trend statistics across scales: regression slopes in log–log
//! coordinates and the verdicts built on them.

use serde::Serialize;

use crate::funcrep::log2t;

/// Slope threshold in `(log log(2/t), log value)` coordinates above which
/// growth counts as divergence.
pub const DIVERGENCE_SLOPE: f64 = 0.1;
/// Relative spread below which a sequence counts as flat.
pub const FLAT_SPREAD: f64 = 0.1;

/// Ordinary least-squares slope through `(x, y)` pairs.
pub fn ols_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in pts {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Diverging,
    Inconclusive,
}

/// Classify values recorded at shrinking scales `t` (any order).
///
/// Diverging: the slope of `log value` against `log log(2/t)` is at least
/// [`DIVERGENCE_SLOPE`] over the whole window and over its finer half.
/// Bounded: the values agree within [`FLAT_SPREAD`]. Anything else, or any
/// infinite value at a finite scale count below two, is inconclusive.
pub fn classify(samples: &[(f64, f64)]) -> Verdict {
    if samples.len() < 2 {
        return Verdict::Inconclusive;
    }
    let mut s: Vec<(f64, f64)> = samples.to_vec();
    s.sort_by(|a, b| b.0.total_cmp(&a.0));
    if s.iter().any(|p| p.1.is_infinite()) {
        return Verdict::Diverging;
    }
    let lo = s.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = s.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    if lo > 0.0 && (hi - lo) / lo <= FLAT_SPREAD {
        return Verdict::Bounded;
    }
    if lo <= 0.0 {
        return Verdict::Inconclusive;
    }
    let pts: Vec<(f64, f64)> = s.iter().map(|&(t, v)| (log2t(t).ln(), v.ln())).collect();
    let whole = ols_slope(&pts);
    let half = &pts[(pts.len() - 1) / 2..];
    let fine = ols_slope(half);
    if whole >= DIVERGENCE_SLOPE && fine >= DIVERGENCE_SLOPE {
        Verdict::Diverging
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Equivalence {
    Equivalent,
    Diverging,
    Inconclusive,
}

/// Ratio statistics of two quantities recorded at the same scales.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Slope of `log(a/b)` against `log log(2/t)`.
    pub slope: f64,
    pub verdict: Equivalence,
}

/// Compare `a(t)` and `b(t)`; equivalent when `max/min ≤ bound` and the
/// ratio shows no trend, diverging when the ratio trends at the divergence
/// slope.
pub fn equivalence_report(scales: &[f64], a: &[f64], b: &[f64], bound: f64) -> EquivalenceReport {
    let ratios: Vec<f64> = a.iter().zip(b).map(|(x, y)| x / y).collect();
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pts: Vec<(f64, f64)> = scales
        .iter()
        .zip(&ratios)
        .filter(|(_, r)| r.is_finite() && **r > 0.0)
        .map(|(&t, &r)| (log2t(t).ln(), r.ln()))
        .collect();
    let slope = if pts.len() >= 2 { ols_slope(&pts) } else { f64::NAN };
    let verdict = if min_ratio > 0.0 && max_ratio / min_ratio <= bound {
        Equivalence::Equivalent
    } else if slope.abs() >= DIVERGENCE_SLOPE {
        Equivalence::Diverging
    } else {
        Equivalence::Inconclusive
    };
    EquivalenceReport {
        min_ratio,
        max_ratio,
        slope,
        verdict,
    }
}
