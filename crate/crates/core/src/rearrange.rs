//! Distribution function, non-increasing rearrangement and the elementary
//! maximal function, with the classical rearrangement inequalities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcrep::{Func, Grid, GridFn, StepFn};

/// `s ↦ |{|f| > s}|`, stored as the distinct values of `|f|` in decreasing
/// order with the measure of the set where `|f|` is at least that value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    levels: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Distribution {
    /// Right-continuous, non-increasing in `s`.
    pub fn eval(&self, s: f64) -> f64 {
        let k = self.levels.partition_point(|&v| v > s);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }
}

/// `f*`, `f_*` and `f**` of one function.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangedFn {
    star: StepFn,
    distribution: Distribution,
}

impl RearrangedFn {
    /// `f*` as an exact non-increasing step function.
    pub fn star(&self) -> &StepFn {
        &self.star
    }

    pub fn distribution(&self) -> &Distribution {
        &self.distribution
    }

    /// `f**(t) = (1/t)∫_0^t f*`.
    pub fn maximal(&self, t: f64) -> f64 {
        self.star.average_to(t)
    }

    pub fn star_on(&self, grid: &Grid) -> GridFn {
        self.star.sample(grid)
    }

    pub fn maximal_on(&self, grid: &Grid) -> GridFn {
        GridFn::from_fn(grid, |t| self.maximal(t))
    }
}

/// Rearrangement of a step function (a grid function is the step function
/// equal to each sample on its cell).
pub fn rearrange_steps(f: &StepFn) -> RearrangedFn {
    let star = f.rearranged();
    let mut cumulative = Vec::with_capacity(star.len());
    let mut levels = Vec::with_capacity(star.len());
    for j in 0..star.len() {
        if star.values()[j] > 0.0 {
            levels.push(star.values()[j]);
            cumulative.push(star.ends()[j]);
        }
    }
    RearrangedFn {
        star,
        distribution: Distribution { levels, cumulative },
    }
}

/// Rearrangement of any supported function. Power-log functions are first
/// sampled at the nodes of `grid`.
pub fn rearrangement(f: &Func, grid: &Grid) -> RearrangedFn {
    let steps = match f {
        Func::PowLog(p) => StepFn::from_grid(&GridFn::from_fn(grid, |t| p.eval(t))),
        other => other.to_steps(grid),
    };
    rearrange_steps(&steps)
}

/// `∫_0^1 a·b` for two step functions, exactly.
pub fn integral_of_product(a: &StepFn, b: &StepFn) -> f64 {
    let r = a.refine_with(b.ends());
    let mut acc = 0.0;
    for j in 0..r.len() {
        let x = r.ends()[j];
        let p = r.values()[j] * b.eval(x);
        if p != 0.0 && !p.is_nan() {
            acc += p * r.measure(j);
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HlReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `∫|fg| ≤ ∫ f* g*` on step functions.
pub fn check_hl_steps(f: &StepFn, g: &StepFn) -> HlReport {
    let lhs = integral_of_product(&f.abs(), &g.abs());
    let rhs = integral_of_product(&f.rearranged(), &g.rearranged());
    HlReport {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-9),
    }
}

fn same_grid(f: &GridFn, g: &GridFn) -> Result<()> {
    if f.grid().same_as(g.grid()) {
        Ok(())
    } else {
        Err(Error::Shape("functions live on different grids".into()))
    }
}

pub fn check_hl_inequality(f: &GridFn, g: &GridFn) -> Result<HlReport> {
    same_grid(f, g)?;
    Ok(check_hl_steps(&StepFn::from_grid(f), &StepFn::from_grid(g)))
}

/// Whether `∫_0^t g1* ≤ ∫_0^t g2*` for every `t` in `points`.
pub fn hlp_dominates_at(g1: &StepFn, g2: &StepFn, points: &[f64]) -> bool {
    let (s1, s2) = (g1.rearranged(), g2.rearranged());
    points
        .iter()
        .all(|&t| s1.integral_to(t) <= s2.integral_to(t) + 1e-12)
}

/// Hardy–Littlewood–Pólya domination checked at every grid node.
pub fn hlp_dominates(g1: &GridFn, g2: &GridFn) -> Result<bool> {
    same_grid(g1, g2)?;
    Ok(hlp_dominates_at(
        &StepFn::from_grid(g1),
        &StepFn::from_grid(g2),
        g1.grid().nodes(),
    ))
}

/// Domination of step functions; both partial integrals are piecewise
/// linear, so checking every breakpoint of either rearrangement is exact.
pub fn hlp_dominates_steps(g1: &StepFn, g2: &StepFn) -> bool {
    let mut pts: Vec<f64> = g1.rearranged().ends().to_vec();
    pts.extend_from_slice(g2.rearranged().ends());
    hlp_dominates_at(g1, g2, &pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::{make_log_grid, PowLogFn};

    #[test]
    fn constant_is_fixed() {
        let g = make_log_grid(1e-6, 16).unwrap();
        let r = rearrangement(&Func::Grid(GridFn::from_fn(&g, |_| 2.5)), &g);
        assert!(r.star_on(&g).values().iter().all(|&v| v == 2.5));
        assert!(r.maximal_on(&g).values().iter().all(|&v| (v - 2.5).abs() < 1e-14));
    }

    #[test]
    fn decreasing_atom_is_fixed_at_nodes() {
        let g = make_log_grid(1e-10, 32).unwrap();
        let f = PowLogFn::atom(1.0, -0.25, 0.0);
        let r = rearrangement(&Func::PowLog(f.clone()), &g);
        for (&t, &v) in g.nodes().iter().zip(r.star_on(&g).values()) {
            assert!((v - f.eval(t)).abs() <= 1e-10 * v);
        }
    }

    #[test]
    fn distribution_is_right_continuous() {
        let f = StepFn::uniform(vec![3.0, 1.0, 2.0]).unwrap();
        let d = rearrange_steps(&f).distribution().clone();
        assert!((d.eval(2.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.eval(1.5) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.eval(3.0), 0.0);
        assert!((d.eval(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hl_indicator_cases() {
        let a = StepFn::indicator(0.5, 1.0);
        let rep = check_hl_steps(&a, &a);
        assert!((rep.lhs - 0.5).abs() < 1e-15 && (rep.rhs - 0.5).abs() < 1e-15 && rep.holds);
        let b = StepFn::new(vec![0.5, 1.0], vec![0.0, 1.0]).unwrap();
        let rep = check_hl_steps(&a, &b);
        assert_eq!(rep.lhs, 0.0);
        assert!((rep.rhs - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hlp_cases() {
        let one = StepFn::indicator(1.0, 1.0);
        let two = StepFn::indicator(0.5, 2.0);
        assert!(hlp_dominates_steps(&one, &one));
        assert!(hlp_dominates_steps(&one, &two));
        assert!(!hlp_dominates_steps(&two, &one));
        assert!(!hlp_dominates_at(&two, &one, &[0.25]));
    }

    #[test]
    fn grid_mismatch_is_shape_error() {
        let g1 = make_log_grid(1e-6, 16).unwrap();
        let g2 = make_log_grid(1e-6, 17).unwrap();
        let a = GridFn::from_fn(&g1, |_| 1.0);
        let b = GridFn::from_fn(&g2, |_| 1.0);
        assert!(matches!(check_hl_inequality(&a, &b), Err(Error::Shape(_))));
        assert!(matches!(hlp_dominates(&a, &b), Err(Error::Shape(_))));
    }
}
