use serde::{Deserialize, Serialize};

use super::grid::{Grid, GridFn};
use super::powlog::PowLogFn;
use crate::error::{Error, Result};

/// A step function on `(0, 1]`.
///
/// `values[j]` holds on the cell `(ends[j-1], ends[j]]`, with `ends[-1] = 0`
/// and `ends.last() = 1`. Values may be `+∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFn {
    ends: Vec<f64>,
    values: Vec<f64>,
}

impl StepFn {
    pub fn new(mut ends: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if ends.is_empty() || ends.len() != values.len() {
            return Err(Error::Shape(format!(
                "{} breakpoints for {} values",
                ends.len(),
                values.len()
            )));
        }
        if !(ends[0] > 0.0) || ends.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Shape("breakpoints must be positive and increasing".into()));
        }
        let last = ends.len() - 1;
        if (ends[last] - 1.0).abs() > 1e-9 {
            return Err(Error::Shape(format!("last breakpoint must be 1, got {}", ends[last])));
        }
        ends[last] = 1.0;
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("NaN step value".into()));
        }
        Ok(StepFn { ends, values })
    }

    /// `c · χ_(0,a]`.
    pub fn indicator(a: f64, c: f64) -> Self {
        if a >= 1.0 {
            StepFn {
                ends: vec![1.0],
                values: vec![c],
            }
        } else {
            StepFn {
                ends: vec![a, 1.0],
                values: vec![c, 0.0],
            }
        }
    }

    /// Equal cells of measure `1/k` carrying the given values.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let k = values.len();
        let ends = (1..=k).map(|i| i as f64 / k as f64).collect();
        StepFn::new(ends, values)
    }

    pub fn from_grid(f: &GridFn) -> Self {
        StepFn {
            ends: f.grid().nodes().to_vec(),
            values: f.values().to_vec(),
        }
    }

    /// Cell averages of `f` over the cells of `grid`; a cell on which `f`
    /// is not integrable gets `+∞`.
    pub fn averages_of(f: &PowLogFn, grid: &Grid) -> Self {
        Self::averages_up_to(f, grid, 1.0)
    }

    /// Cell averages of `f · χ_(0,support]`, with `support` inserted as a
    /// breakpoint.
    pub fn averages_up_to(f: &PowLogFn, grid: &Grid, support: f64) -> Self {
        let support = support.min(1.0);
        let mut ends: Vec<f64> = grid
            .nodes()
            .iter()
            .copied()
            .filter(|&t| t < support * (1.0 - 1e-12))
            .collect();
        ends.push(support);
        let mut values = Vec::with_capacity(ends.len() + 1);
        let mut lo = 0.0;
        for &hi in &ends {
            let v = f.integral(lo, hi) / (hi - lo);
            values.push(if v.is_nan() { f64::INFINITY } else { v });
            lo = hi;
        }
        if support < 1.0 {
            ends.push(1.0);
            values.push(0.0);
        }
        StepFn { ends, values }
    }

    pub fn ends(&self) -> &[f64] {
        &self.ends
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.ends.len()
    }
    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn cell_lo(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.ends[j - 1]
        }
    }

    pub fn measure(&self, j: usize) -> f64 {
        self.ends[j] - self.cell_lo(j)
    }

    /// Left-continuous evaluation; `t` outside `(0, 1]` gives 0.
    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) || t > 1.0 {
            return 0.0;
        }
        let j = self.ends.partition_point(|&x| x < t);
        self.values[j.min(self.len() - 1)]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> StepFn {
        StepFn {
            ends: self.ends.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn abs(&self) -> StepFn {
        self.map(f64::abs)
    }

    pub fn scale(&self, c: f64) -> StepFn {
        self.map(|v| if v == 0.0 { 0.0 } else { c * v })
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// The same function on a common refinement with `other`.
    pub fn refine_with(&self, breaks: &[f64]) -> StepFn {
        let mut ends: Vec<f64> = self
            .ends
            .iter()
            .chain(breaks.iter().filter(|&&x| x > 0.0 && x < 1.0))
            .copied()
            .collect();
        ends.sort_by(f64::total_cmp);
        ends.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
        let values = ends.iter().map(|&x| self.eval(x)).collect();
        StepFn { ends, values }
    }

    /// Pointwise sum on the common refinement.
    pub fn add(&self, other: &StepFn) -> StepFn {
        let r = self.refine_with(&other.ends);
        let values = r
            .ends
            .iter()
            .zip(&r.values)
            .map(|(&x, &v)| v + other.eval(x))
            .collect();
        StepFn { ends: r.ends, values }
    }

    /// Non-increasing rearrangement of `|self|`.
    ///
    /// Cells are sorted by value (stable, so ties keep cell order) and laid
    /// end to end from the origin. Adjacent equal values are merged.
    pub fn rearranged(&self) -> StepFn {
        let mut idx: Vec<usize> = (0..self.len()).filter(|&j| self.measure(j) > 0.0).collect();
        let absv: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        idx.sort_by(|&i, &j| absv[j].total_cmp(&absv[i]));
        let mut ends: Vec<f64> = Vec::with_capacity(idx.len());
        let mut values: Vec<f64> = Vec::with_capacity(idx.len());
        let mut acc = 0.0;
        for &j in &idx {
            acc += self.measure(j);
            match values.last() {
                Some(&v) if v == absv[j] => *ends.last_mut().unwrap() = acc,
                _ => {
                    ends.push(acc);
                    values.push(absv[j]);
                }
            }
        }
        *ends.last_mut().unwrap() = 1.0;
        StepFn { ends, values }
    }

    /// `∫_0^t f`.
    pub fn integral_to(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let mut acc = 0.0;
        for j in 0..self.len() {
            let lo = self.cell_lo(j);
            if lo >= t {
                break;
            }
            let w = self.ends[j].min(t) - lo;
            if w > 0.0 && self.values[j] != 0.0 {
                acc += self.values[j] * w;
            }
        }
        acc
    }

    pub fn integral(&self) -> f64 {
        self.integral_to(1.0)
    }

    /// Running average `(1/t)∫_0^t f`; the limit value at `t = 0`.
    pub fn average_to(&self, t: f64) -> f64 {
        if t <= 0.0 {
            self.values[0]
        } else {
            self.integral_to(t) / t.min(1.0)
        }
    }

    /// Largest value on cells meeting `[lo, hi]`.
    pub fn sup_on(&self, lo: f64, hi: f64) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for j in 0..self.len() {
            if self.ends[j] >= lo && self.cell_lo(j) < hi {
                best = best.max(self.values[j]);
            }
        }
        best
    }

    /// Left-continuous samples at the nodes of `grid`.
    pub fn sample(&self, grid: &Grid) -> GridFn {
        GridFn::from_fn(grid, |t| self.eval(t))
    }

    /// Replace values on `(0, t]` by zero (used for tail integrals).
    pub fn restricted_above(&self, t: f64) -> StepFn {
        let r = self.refine_with(&[t]);
        let values = r
            .ends
            .iter()
            .zip(&r.values)
            .map(|(&x, &v)| if x <= t { 0.0 } else { v })
            .collect();
        StepFn { ends: r.ends, values }
    }
}
