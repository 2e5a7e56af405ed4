use rayon::prelude::*;
use serde::Serialize;

use super::family::TestFamily;
use super::{copson_steps, dilate_steps, sup_op_steps, CopsonOp};
use crate::error::{Error, Result};
use crate::funcrep::{make_log_grid, Func, Grid, StepFn};
use crate::spaces::{norm_star, SpaceSpec};
use crate::trend::{classify, Verdict, FLAT_SPREAD};

/// Grid lower ends used for refinement trends.
pub const REFINEMENT_T_MINS: [f64; 3] = [1e-10, 1e-20, 1e-30];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Operator {
    Copson(CopsonOp),
    Sup { gamma: f64 },
    Dilate { lambda: f64 },
}

impl Operator {
    /// Apply to a step function; the result is a step function refined by
    /// the grid nodes where the operator does not preserve steps.
    pub fn apply_steps(&self, f: &StepFn, grid: &Grid) -> Result<StepFn> {
        match self {
            Operator::Copson(op) => {
                if f.min_value() < 0.0 {
                    return Err(Error::Domain("Copson operator needs nonnegative input".into()));
                }
                Ok(copson_steps(op.gamma(), f, grid))
            }
            Operator::Sup { gamma } => Ok(sup_op_steps(*gamma, f, grid)),
            Operator::Dilate { lambda } => Ok(dilate_steps(*lambda, f)),
        }
    }
}

/// Norms of one family member on one grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberRatio {
    pub label: String,
    pub domain_norm: f64,
    pub target_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpNormReport {
    /// Largest ratio on the finest grid.
    pub best_ratio: f64,
    pub attaining_function: String,
    /// `(t_min, best ratio)` per refinement.
    pub refinement_trend: Vec<(f64, f64)>,
    /// Members whose own ratio grows under refinement past the coarsest best
    /// ratio.
    pub diverging_members: Vec<String>,
    pub verdict: Verdict,
}

fn norm_of(s: &SpaceSpec, f: &StepFn, grid: &Grid) -> f64 {
    norm_star(s, &Func::Step(f.clone()).star(grid), grid)
}

/// Ratios `‖op f‖_target / ‖f‖_domain` for every member on `grid`. Members
/// given symbolically are replaced by their cell averages on `grid`; members
/// of zero or infinite domain norm get a NaN ratio.
pub fn op_norm_on(
    op: &Operator,
    domain: &SpaceSpec,
    target: &SpaceSpec,
    family: &TestFamily,
    grid: &Grid,
) -> Result<Vec<MemberRatio>> {
    domain.require_valid()?;
    target.require_valid()?;
    family
        .members()
        .par_iter()
        .map(|m| {
            let f = m.f.to_steps(grid);
            let dn = norm_of(domain, &f, grid);
            let tn = norm_of(target, &op.apply_steps(&f, grid)?, grid);
            let ratio = if dn > 0.0 && dn.is_finite() { tn / dn } else { f64::NAN };
            Ok(MemberRatio {
                label: m.label.clone(),
                domain_norm: dn,
                target_norm: tn,
                ratio,
            })
        })
        .collect()
}

/// Empirical operator norm from `domain` to `target` over the family, on the
/// grids of [`REFINEMENT_T_MINS`].
///
/// Diverging: the best ratio trends upward, or some member's ratio does and
/// ends above the coarsest best ratio. Bounded: no divergence and the best
/// ratio is flat within [`FLAT_SPREAD`].
pub fn op_norm_estimate(
    op: &Operator,
    domain: &SpaceSpec,
    target: &SpaceSpec,
    family: &TestFamily,
    points_per_decade: u32,
) -> Result<OpNormReport> {
    if family.is_empty() {
        return Err(Error::Parameter("empty test family".into()));
    }
    let mut runs = Vec::new();
    for &t_min in &REFINEMENT_T_MINS {
        let grid = make_log_grid(t_min, points_per_decade)?;
        runs.push((t_min, op_norm_on(op, domain, target, family, &grid)?));
    }
    let best = |rs: &[MemberRatio]| {
        rs.iter()
            .filter(|r| !r.ratio.is_nan())
            .fold(None::<&MemberRatio>, |acc, r| match acc {
                Some(a) if a.ratio >= r.ratio => Some(a),
                _ => Some(r),
            })
            .map(|r| (r.ratio, r.label.clone()))
            .unwrap_or((f64::NAN, String::new()))
    };
    let refinement_trend: Vec<(f64, f64)> = runs.iter().map(|(t, rs)| (*t, best(rs).0)).collect();
    let (best_ratio, attaining_function) = best(&runs.last().expect("three runs").1);
    let coarse = refinement_trend[0].1;

    let mut diverging_members = Vec::new();
    for i in 0..family.len() {
        let trend: Vec<(f64, f64)> = runs.iter().map(|(t, rs)| (*t, rs[i].ratio)).collect();
        let last = trend.last().expect("three runs").1;
        if trend.iter().all(|p| !p.1.is_nan()) && classify(&trend) == Verdict::Diverging && last > coarse {
            diverging_members.push(family.members()[i].label.clone());
        }
    }
    let lo = refinement_trend.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = refinement_trend.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let verdict = if classify(&refinement_trend) == Verdict::Diverging || !diverging_members.is_empty() {
        Verdict::Diverging
    } else if lo > 0.0 && (hi - lo) / lo <= FLAT_SPREAD {
        Verdict::Bounded
    } else {
        Verdict::Inconclusive
    };
    Ok(OpNormReport {
        best_ratio,
        attaining_function,
        refinement_trend,
        diverging_members,
        verdict,
    })
}
