use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::grid::{Grid, GridFn};
use super::powlog::PowLogFn;
use super::step::StepFn;
use crate::error::{Error, Result};

/// The default grid, built once.
pub fn default_grid() -> &'static Grid {
    static GRID: OnceLock<Grid> = OnceLock::new();
    GRID.get_or_init(Grid::default_grid)
}

/// A function on `(0, 1]` in any of the supported representations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Func {
    PowLog(PowLogFn),
    Grid(GridFn),
    Step(StepFn),
}

impl From<PowLogFn> for Func {
    fn from(f: PowLogFn) -> Self {
        Func::PowLog(f)
    }
}
impl From<GridFn> for Func {
    fn from(f: GridFn) -> Self {
        Func::Grid(f)
    }
}
impl From<StepFn> for Func {
    fn from(f: StepFn) -> Self {
        Func::Step(f)
    }
}

impl Func {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Func::PowLog(f) => f.eval(t),
            Func::Grid(f) => f.interpolate(t),
            Func::Step(f) => f.eval(t),
        }
    }

    /// Step form: samples of a grid function hold on their cells, power-log
    /// functions are replaced by their cell averages on `grid`.
    pub fn to_steps(&self, grid: &Grid) -> StepFn {
        match self {
            Func::PowLog(f) => StepFn::averages_of(f, grid),
            Func::Grid(f) => StepFn::from_grid(f),
            Func::Step(f) => f.clone(),
        }
    }

    /// Smallest value, probing power-log functions on `grid`.
    pub fn min_value(&self, grid: &Grid) -> f64 {
        match self {
            Func::PowLog(f) => grid.nodes().iter().map(|&t| f.eval(t)).fold(f64::INFINITY, f64::min),
            Func::Grid(f) => f.values().iter().copied().fold(f64::INFINITY, f64::min),
            Func::Step(f) => f.min_value(),
        }
    }

    /// `∫_lo^hi f`: exact per atom, trapezoid in `u` on grids, exact on steps.
    pub fn integrate(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo >= 0.0 && lo < hi && hi <= 1.0) {
            return Err(Error::Range {
                lo,
                hi,
                span_lo: 0.0,
                span_hi: 1.0,
            });
        }
        match self {
            Func::PowLog(f) => Ok(f.integral(lo, hi)),
            Func::Grid(f) => f.integrate(lo, hi),
            Func::Step(f) => Ok(f.integral_to(hi) - f.integral_to(lo)),
        }
    }

    /// Supremum over `[lo, hi]`; endpoints and interior critical points for
    /// power-log atoms, nodes for grids, cells for steps.
    pub fn sup_on(&self, lo: f64, hi: f64) -> Result<f64> {
        match self {
            Func::PowLog(f) => {
                if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
                    return Err(Error::Range {
                        lo,
                        hi,
                        span_lo: 0.0,
                        span_hi: 1.0,
                    });
                }
                Ok(powlog_sup(f, lo, hi))
            }
            Func::Grid(f) => f.sup_on(lo, hi),
            Func::Step(f) => Ok(f.sup_on(lo, hi)),
        }
    }

    /// Non-increasing rearrangement of `|f|`.
    pub fn star(&self, grid: &Grid) -> Star {
        match self {
            Func::PowLog(f) if f.is_nonincreasing_nonneg() => Star::Symbolic {
                f: f.clone(),
                support: 1.0,
            },
            other => Star::Steps(other.to_steps(grid).rearranged()),
        }
    }
}

/// Supremum of a power-log sum on `[lo, hi]`.
///
/// Single atoms use their critical point; sums are scanned on a fine
/// log-spaced set plus every atom's critical point.
pub(crate) fn powlog_sup(f: &PowLogFn, lo: f64, hi: f64) -> f64 {
    if let Some(a) = f.single() {
        return a.sup_on(lo, hi);
    }
    let mut best = f.eval(lo).max(f.eval(hi));
    for a in f.atoms() {
        if let Some(c) = a.critical_point() {
            if c > lo && c < hi {
                best = best.max(f.eval(c));
            }
        }
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    let n = (((l1 - l0) / std::f64::consts::LN_10) * 200.0).ceil().max(2.0) as usize;
    for k in 0..=n {
        let t = (l0 + (l1 - l0) * k as f64 / n as f64).exp();
        best = best.max(f.eval(t));
    }
    best
}

/// A non-negative, non-increasing function on `(0, 1]`, the form every
/// norm consumes.
#[derive(Debug, Clone, PartialEq)]
pub enum Star {
    /// `f · χ_(0, support]` with `f` non-increasing and non-negative.
    Symbolic { f: PowLogFn, support: f64 },
    /// Non-increasing non-negative step function.
    Steps(StepFn),
}

impl Star {
    pub fn to_steps(&self, grid: &Grid) -> StepFn {
        match self {
            Star::Symbolic { f, support } => StepFn::averages_up_to(f, grid, *support),
            Star::Steps(s) => s.clone(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Star::Symbolic { f, support } => {
                if t > *support {
                    0.0
                } else {
                    f.eval(t)
                }
            }
            Star::Steps(s) => s.eval(t),
        }
    }

    /// `∫_0^t f*`.
    pub fn integral_to(&self, t: f64) -> f64 {
        match self {
            Star::Symbolic { f, support } => f.integral(0.0, t.min(*support)),
            Star::Steps(s) => s.integral_to(t),
        }
    }

    /// `f*(0+)`, the essential supremum.
    pub fn sup(&self) -> f64 {
        match self {
            Star::Symbolic { f, .. } => f.limit_at_zero(),
            Star::Steps(s) => s.values()[0],
        }
    }

    /// Measure of the support of `f*`.
    pub fn support(&self) -> f64 {
        match self {
            Star::Symbolic { f, support } => {
                if f.is_zero() {
                    0.0
                } else {
                    *support
                }
            }
            Star::Steps(s) => {
                let mut last = 0.0;
                for j in 0..s.len() {
                    if s.values()[j] > 0.0 {
                        last = s.ends()[j];
                    }
                }
                last
            }
        }
    }

    pub fn scale(&self, c: f64) -> Star {
        match self {
            Star::Symbolic { f, support } => Star::Symbolic {
                f: f.scale(c),
                support: *support,
            },
            Star::Steps(s) => Star::Steps(s.scale(c)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::grid::make_log_grid;

    #[test]
    fn powlog_integral_exact() {
        let f = Func::PowLog(PowLogFn::atom(1.0, -0.5, 0.0));
        for &t in &[1e-8, 0.01, 0.5] {
            let got = f.integrate(t, 1.0).unwrap();
            assert!((got - 2.0 * (1.0 - f64::sqrt(t))).abs() < 1e-14);
        }
    }

    #[test]
    fn symbolic_star_for_monotone_atoms() {
        let g = make_log_grid(1e-6, 16).unwrap();
        let f = Func::PowLog(PowLogFn::atom(1.0, -0.25, 0.0));
        assert!(matches!(f.star(&g), Star::Symbolic { .. }));
        let up = Func::PowLog(PowLogFn::atom(1.0, 0.5, 0.0));
        assert!(matches!(up.star(&g), Star::Steps(_)));
    }

    #[test]
    fn sup_of_sum_covers_interior_peak() {
        let f: PowLogFn = "1*t^0.5*log^0;-1*t^1*log^0".parse().unwrap();
        // t^{1/2} - t peaks at t = 1/4 with value 1/4.
        assert!((powlog_sup(&f, 1e-6, 1.0) - 0.25).abs() < 1e-4);
    }
}
