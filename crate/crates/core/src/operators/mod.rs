//! The one-dimensional operators: the Copson kernel operator
//! `f ↦ ∫_t^1 f(s) s^{γ-1} ds`, the supremum operator `T_γ`, the dilation
//! `E_λ`, and empirical operator-norm estimates over a test family.

mod estimate;
mod family;

pub use estimate::{op_norm_estimate, op_norm_on, MemberRatio, OpNormReport, Operator, REFINEMENT_T_MINS};
pub use family::{witness_member, Member, TestFamily, DEFAULT_SEED};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcrep::{quad_powlog, Atom, Func, Grid, GridFn, PowLogFn, StepFn};
use crate::rearrange::rearrangement;
use crate::trend::{classify, Verdict};

/// `f ↦ ∫_t^1 f(s) s^{-1+m(1-α)} ds`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CopsonOp {
    m: u32,
    alpha: f64,
}

impl CopsonOp {
    pub fn new(m: u32, alpha: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("m must be positive".into()));
        }
        if !(0.5..1.0).contains(&alpha) {
            return Err(Error::Parameter(format!("alpha = {alpha} outside [1/2, 1)")));
        }
        let gamma = m as f64 * (1.0 - alpha);
        if !(gamma < 1.0) {
            return Err(Error::Parameter(format!(
                "m(1-alpha) = {gamma} must be below 1"
            )));
        }
        Ok(CopsonOp { m, alpha })
    }

    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// `m(1 − α)`.
    pub fn gamma(&self) -> f64 {
        self.m as f64 * (1.0 - self.alpha)
    }
    /// Exponent of the kernel, `−1 + m(1 − α)`.
    pub fn kernel_exp(&self) -> f64 {
        self.gamma() - 1.0
    }
}

/// Apply the Copson operator. Power-log input whose atoms all have closed
/// antiderivatives stays symbolic; grid input gives node values; anything
/// else gives exact cell averages on the union of its breakpoints and the
/// grid nodes.
pub fn copson(op: &CopsonOp, f: &Func, grid: &Grid) -> Result<Func> {
    if f.min_value(grid) < 0.0 {
        return Err(Error::Domain("Copson operator needs nonnegative input".into()));
    }
    let gamma = op.gamma();
    match f {
        Func::PowLog(p) => match copson_symbolic(gamma, p) {
            Some(out) => Ok(Func::PowLog(out)),
            None => Ok(Func::Step(copson_steps(gamma, &f.to_steps(grid), grid))),
        },
        Func::Grid(g) => {
            let s = StepFn::from_grid(g);
            Ok(Func::Grid(GridFn::from_fn(g.grid(), |t| copson_at(gamma, &s, t))))
        }
        Func::Step(s) => Ok(Func::Step(copson_steps(gamma, s, grid))),
    }
}

/// Closed form of `∫_t^1 p(s) s^{γ-1} ds`, if every atom has one.
pub fn copson_symbolic(gamma: f64, p: &PowLogFn) -> Option<PowLogFn> {
    let mut out = Vec::new();
    for at in p.atoms() {
        let (c, e, b) = (at.coeff, at.power + gamma - 1.0, at.log_power);
        if e == -1.0 && b != -1.0 {
            let k = b + 1.0;
            out.push(Atom::new(c / k, 0.0, k));
            out.push(Atom::new(-c * std::f64::consts::LN_2.powf(k) / k, 0.0, 0.0));
        } else if b == 0.0 && e != -1.0 {
            let k = e + 1.0;
            out.push(Atom::new(c / k, 0.0, 0.0));
            out.push(Atom::new(-c / k, k, 0.0));
        } else {
            return None;
        }
    }
    PowLogFn::new(out).ok()
}

/// Tail sums `S_j = ∫_{ends[j]}^1 f(s) s^{γ-1} ds`.
fn tails(gamma: f64, f: &StepFn) -> Vec<f64> {
    let n = f.len();
    let mut s = vec![0.0; n];
    let mut acc = 0.0;
    for j in (0..n).rev() {
        s[j] = acc;
        let v = f.values()[j];
        if v != 0.0 {
            acc += v * (f.ends()[j].powf(gamma) - f.cell_lo(j).powf(gamma)) / gamma;
        }
    }
    s
}

/// `∫_t^1 f(s) s^{γ-1} ds` for a step function, exactly.
pub fn copson_at(gamma: f64, f: &StepFn, t: f64) -> f64 {
    let tl = tails(gamma, f);
    let j = f.ends().partition_point(|&e| e < t).min(f.len() - 1);
    let v = f.values()[j];
    let head = if v == 0.0 {
        0.0
    } else {
        v * (f.ends()[j].powf(gamma) - t.powf(gamma)) / gamma
    };
    tl[j] + head
}

/// Cell averages of `(0,1] ∋ t ↦ ∫_t^1 f(s) s^{γ-1} ds` on the union of the
/// breakpoints of `f` and the nodes of `grid`.
pub fn copson_steps(gamma: f64, f: &StepFn, grid: &Grid) -> StepFn {
    let tl = tails(gamma, f);
    let ends = merged_breaks(f.ends(), grid.nodes());
    let mut values = Vec::with_capacity(ends.len());
    let mut j = 0;
    let mut lo = 0.0;
    for &hi in &ends {
        while f.ends()[j] < hi * (1.0 - 1e-15) {
            j += 1;
        }
        let v = f.values()[j];
        let g = if v == 0.0 {
            tl[j]
        } else {
            tl[j] + v * (f.ends()[j].powf(gamma) - mean_power(gamma, lo, hi)) / gamma
        };
        values.push(g);
        lo = hi;
    }
    StepFn::new(ends, values).expect("merged breakpoints are valid")
}

/// Average of `s^k` over `[lo, hi]`.
fn mean_power(k: f64, lo: f64, hi: f64) -> f64 {
    if (hi - lo) <= 1e-7 * hi {
        return (0.5 * (lo + hi)).powf(k);
    }
    (hi.powf(k + 1.0) - lo.powf(k + 1.0)) / ((k + 1.0) * (hi - lo))
}

/// Sorted union of two breakpoint lists ending at 1, with near-duplicates
/// removed.
fn merged_breaks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = a.iter().chain(b).copied().filter(|&t| t > 0.0 && t <= 1.0).collect();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(v.len());
    for t in v {
        match out.last() {
            Some(&l) if t <= l * (1.0 + 1e-12) => {}
            _ => out.push(t),
        }
    }
    if let Some(l) = out.last_mut() {
        if *l > 1.0 - 1e-12 {
            *l = 1.0;
        }
    }
    if out.last() != Some(&1.0) {
        out.push(1.0);
    }
    out
}

/// Running maxima `M_j = max_{k ≥ j} ends[k]^γ · values[k]` of a
/// non-increasing step function.
fn suffix_max(gamma: f64, star: &StepFn) -> Vec<f64> {
    let n = star.len();
    let mut m = vec![0.0; n];
    let mut acc: f64 = 0.0;
    for j in (0..n).rev() {
        acc = acc.max(star.ends()[j].powf(gamma) * star.values()[j]);
        m[j] = acc;
    }
    m
}

/// `T_γ g(t) = t^{-γ} sup_{s ∈ [t,1]} s^γ g*(s)` at every node of `grid`.
pub fn sup_op(gamma: f64, g: &Func, grid: &Grid) -> GridFn {
    let r = rearrangement(g, grid);
    let star = r.star();
    let m = suffix_max(gamma, star);
    GridFn::from_fn(grid, |t| {
        let j = star.ends().partition_point(|&e| e < t * (1.0 - 1e-15)).min(star.len() - 1);
        m[j] * t.powf(-gamma)
    })
}

/// Cell averages of `T_γ g` on the union of the breakpoints of `g*` and the
/// grid nodes.
pub fn sup_op_steps(gamma: f64, g: &StepFn, grid: &Grid) -> StepFn {
    let star = g.rearranged();
    let m = suffix_max(gamma, &star);
    let ends = merged_breaks(star.ends(), grid.nodes());
    let mut values = Vec::with_capacity(ends.len());
    let mut j = 0;
    let mut lo = 0.0;
    for &hi in &ends {
        while star.ends()[j] < hi * (1.0 - 1e-15) {
            j += 1;
        }
        values.push(if m[j] == 0.0 {
            0.0
        } else {
            m[j] * mean_power(-gamma, lo, hi)
        });
        lo = hi;
    }
    StepFn::new(ends, values).expect("merged breakpoints are valid")
}

/// `E_λ f(t) = f(t/λ)` for `t ≤ λ`, zero beyond, by interpolation in `u`.
pub fn dilate(lambda: f64, f: &GridFn) -> GridFn {
    f.map(|t, _| if t <= lambda { f.interpolate(t / lambda) } else { 0.0 })
}

/// `E_λ` on a step function, exactly.
pub fn dilate_steps(lambda: f64, f: &StepFn) -> StepFn {
    let mut ends = Vec::with_capacity(f.len() + 1);
    let mut values = Vec::with_capacity(f.len() + 1);
    for j in 0..f.len() {
        let e = f.ends()[j] * lambda;
        if e >= 1.0 - 1e-12 {
            ends.push(1.0);
            values.push(f.values()[j]);
            break;
        }
        ends.push(e);
        values.push(f.values()[j]);
    }
    if *ends.last().expect("nonempty") < 1.0 {
        ends.push(1.0);
        values.push(0.0);
    }
    StepFn::new(ends, values).expect("scaled breakpoints are valid")
}

/// Both sides of the boundedness condition for `T_γ` on `L^{1,1;1-γ}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma37Report {
    pub gamma: f64,
    pub max_ratio: f64,
    /// `(t_min, max over nodes of LHS/RHS)` for each refinement.
    pub refinement: Vec<(f64, f64)>,
    pub verdict: Verdict,
    pub holds: bool,
}

/// `LHS(t) = ∫_0^t s^{-γ} sup_{s≤τ≤t} τ^γ (log 2/s)^{1-γ} ds` over
/// `RHS(t) = ∫_0^t (log 2/s)^{1-γ} ds`, maximized over the nodes of `grid`.
/// The inner supremum equals `t^γ` since `τ^γ` increases.
pub fn lemma37_ratio(gamma: f64, grid: &Grid) -> f64 {
    let w = 1.0 - gamma;
    grid.nodes()
        .iter()
        .map(|&t| t.powf(gamma) * quad_powlog(-gamma, w, 0.0, t) / quad_powlog(0.0, w, 0.0, t))
        .fold(0.0, f64::max)
}

/// The condition on the refinement grids `t_min ∈ {1e-10, 1e-20, 1e-30}`.
pub fn lemma37_condition(gamma: f64, points_per_decade: u32) -> Result<Lemma37Report> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Parameter(format!("gamma = {gamma} outside (0, 1)")));
    }
    let mut refinement = Vec::new();
    for &t_min in &REFINEMENT_T_MINS {
        let grid = crate::funcrep::make_log_grid(t_min, points_per_decade)?;
        refinement.push((t_min, lemma37_ratio(gamma, &grid)));
    }
    let verdict = classify(&refinement);
    let max_ratio = refinement.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(Lemma37Report {
        gamma,
        max_ratio,
        refinement,
        verdict,
        holds: max_ratio.is_finite() && verdict == Verdict::Bounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::{log2t, make_log_grid};

    fn grid() -> Grid {
        make_log_grid(1e-12, 16).unwrap()
    }

    #[test]
    fn copson_validation() {
        assert!(CopsonOp::new(1, 0.5).is_ok());
        assert!(CopsonOp::new(2, 0.5).is_err());
        assert!(CopsonOp::new(1, 0.3).is_err());
        assert!(CopsonOp::new(0, 0.7).is_err());
        let op = CopsonOp::new(2, 0.75).unwrap();
        assert!((op.kernel_exp() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn copson_of_constant() {
        let op = CopsonOp::new(1, 0.5).unwrap();
        let g = grid();
        let out = copson(&op, &Func::PowLog(PowLogFn::constant(1.0)), &g).unwrap();
        assert!(matches!(out, Func::PowLog(_)));
        for &t in g.nodes() {
            let want = 2.0 * (1.0 - t.sqrt());
            assert!((out.eval(t) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn copson_of_indicator() {
        let a = 0.01;
        let f = StepFn::indicator(a, 1.0);
        for t in [1e-9, 1e-4, 0.005, 0.0099, 0.02, 0.7] {
            let want = if t < a { 2.0 * (a.sqrt() - t.sqrt()) } else { 0.0 };
            assert!((copson_at(0.5, &f, t) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn copson_of_witness() {
        let op = CopsonOp::new(1, 0.5).unwrap();
        let g = grid();
        let w = Func::PowLog(PowLogFn::atom(1.0, -0.5, -0.25));
        let out = copson(&op, &w, &g).unwrap();
        let l2 = std::f64::consts::LN_2.powf(0.75);
        for &t in g.nodes() {
            let want = 4.0 / 3.0 * (log2t(t).powf(0.75) - l2);
            assert!((out.eval(t) - want).abs() <= 1e-8 * want.max(1e-300) + 1e-15);
        }
    }

    #[test]
    fn copson_steps_average_matches_quadrature() {
        let f = StepFn::new(vec![0.001, 0.3, 1.0], vec![5.0, 2.0, 1.0]).unwrap();
        let g = make_log_grid(1e-6, 16).unwrap();
        let s = copson_steps(0.5, &f, &g);
        for j in [0, 10, 40, s.len() - 1] {
            let (lo, hi) = (s.cell_lo(j), s.ends()[j]);
            let avg = crate::funcrep::quad::adaptive(|t| copson_at(0.5, &f, t), lo, hi, 1e-12) / (hi - lo);
            assert!((s.values()[j] - avg).abs() < 1e-9 * avg.abs().max(1.0));
        }
    }

    #[test]
    fn copson_rejects_negative() {
        let op = CopsonOp::new(1, 0.5).unwrap();
        let f = Func::Step(StepFn::uniform(vec![1.0, -1.0]).unwrap());
        assert!(matches!(copson(&op, &f, &grid()), Err(Error::Domain(_))));
    }

    #[test]
    fn sup_op_examples() {
        let g = grid();
        let c = sup_op(0.5, &Func::PowLog(PowLogFn::constant(3.0)), &g);
        let p = sup_op(0.3, &Func::PowLog(PowLogFn::atom(1.0, -0.3, 0.0)), &g);
        let a = 1e-4;
        let x = sup_op(0.5, &Func::Step(StepFn::indicator(a, 1.0)), &g);
        for (i, &t) in g.nodes().iter().enumerate() {
            assert!((c.values()[i] - 3.0 * t.powf(-0.5)).abs() < 1e-12 * c.values()[i]);
            assert!((p.values()[i] - t.powf(-0.3)).abs() < 1e-12 * p.values()[i]);
            let want = if t <= a { (a / t).sqrt() } else { 0.0 };
            assert!((x.values()[i] - want).abs() < 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn dilation_examples() {
        let g = grid();
        let one = GridFn::from_fn(&g, |_| 1.0);
        assert_eq!(dilate(1.0, &one), one);
        let half = dilate(0.5, &one);
        for (i, &t) in g.nodes().iter().enumerate() {
            assert_eq!(half.values()[i], if t <= 0.5 { 1.0 } else { 0.0 });
        }
        let f = StepFn::new(vec![0.25, 1.0], vec![2.0, 1.0]).unwrap();
        let d = dilate_steps(2.0, &f);
        assert_eq!(d.ends(), &[0.5, 1.0]);
        let e = dilate_steps(0.125, &f);
        assert_eq!(e.ends(), &[0.03125, 0.125, 1.0]);
        assert_eq!(e.values(), &[2.0, 1.0, 0.0]);
    }

    #[test]
    fn sup_condition_ratio_is_finite() {
        let g = make_log_grid(1e-30, 16).unwrap();
        for gamma in [0.1, 0.5, 0.9] {
            let r = lemma37_ratio(gamma, &g);
            assert!(r.is_finite() && r > 1.0, "{gamma}: {r}");
        }
    }
}
