//! Optimal spaces in Sobolev embeddings over `𝒥_α` through their
//! one-dimensional reductions, the principal alternative for Orlicz domains,
//! and the nonexistence pipeline.

mod alternative;
mod nonexistence;

pub use alternative::{principal_alternative, thm35_transfer, AlternativeReport, Decision, MemberTrend, TransferReport};
pub use nonexistence::{
    expl_sup_functional, thm38_pipeline, witness_curve, NonexistenceReport, NonexistenceVerdict, QRange, SLOPE_WINDOW,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcrep::{Func, Grid, StepFn};
use crate::operators::{copson_steps, op_norm_estimate, CopsonOp, OpNormReport, Operator, TestFamily};
use crate::spaces::{norm_star, SpaceSpec, YoungFn};

/// `W^m X ↪ Y` over every domain of `𝒥_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingProblem {
    pub op: CopsonOp,
    pub domain: SpaceSpec,
    pub target: SpaceSpec,
    /// Second Lorentz index of an `L^{∞,q;·}` target, when relevant.
    pub q: Option<f64>,
}

impl EmbeddingProblem {
    pub fn new(m: u32, alpha: f64, domain: SpaceSpec, target: SpaceSpec) -> Result<Self> {
        let q = match target {
            SpaceSpec::LorentzZygmund { p, q, .. } if p.is_infinite() => Some(q),
            _ => None,
        };
        Ok(EmbeddingProblem {
            op: CopsonOp::new(m, alpha)?,
            domain,
            target,
            q,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.op.gamma()
    }
}

/// The one-dimensional inequality `‖∫_t^1 f(s) s^{γ-1} ds‖_Y ≲ ‖f‖_X` over
/// the family.
pub fn reduction_check(p: &EmbeddingProblem, family: &TestFamily, points_per_decade: u32) -> Result<OpNormReport> {
    op_norm_estimate(&Operator::Copson(p.op), &p.domain, &p.target, family, points_per_decade)
}

fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Associate space from the closed-form duality table, up to equivalent
/// norms.
pub fn associate(s: &SpaceSpec) -> Result<SpaceSpec> {
    let unsupported = || Error::UnsupportedDuality(s.to_string());
    match s {
        SpaceSpec::Lebesgue(p) => Ok(SpaceSpec::Lebesgue(conjugate(*p))),
        SpaceSpec::Lorentz { p, q } => {
            if *p == 1.0 {
                Ok(SpaceSpec::Lebesgue(f64::INFINITY))
            } else if p.is_infinite() {
                Ok(SpaceSpec::Lebesgue(1.0))
            } else {
                Ok(SpaceSpec::Lorentz {
                    p: conjugate(*p),
                    q: conjugate(*q),
                })
            }
        }
        SpaceSpec::LorentzZygmund { p, q, zeta } => {
            if *p > 1.0 && p.is_finite() {
                Ok(SpaceSpec::LorentzZygmund {
                    p: conjugate(*p),
                    q: conjugate(*q),
                    zeta: -zeta,
                })
            } else if *p == 1.0 && *q == 1.0 {
                Ok(SpaceSpec::LorentzZygmund {
                    p: f64::INFINITY,
                    q: f64::INFINITY,
                    zeta: -zeta,
                })
            } else if p.is_infinite() && q.is_infinite() {
                Ok(SpaceSpec::LorentzZygmund { p: 1.0, q: 1.0, zeta: -zeta })
            } else {
                Err(unsupported())
            }
        }
        SpaceSpec::Orlicz(a) => match a {
            YoungFn::Power { p } if *p == 1.0 => Ok(SpaceSpec::Orlicz(YoungFn::linf())),
            YoungFn::Power { p } => Ok(SpaceSpec::Orlicz(YoungFn::power(conjugate(*p))?)),
            YoungFn::LInfinity => Ok(SpaceSpec::Orlicz(YoungFn::power(1.0)?)),
            YoungFn::PowerLog { p, a, .. } if *p > 1.0 => {
                Ok(SpaceSpec::l_log_l(conjugate(*p), -a / (p - 1.0))?)
            }
            YoungFn::PowerLog { p, a, .. } if *p == 1.0 && *a > 0.0 => SpaceSpec::exp_l(1.0 / a),
            YoungFn::Exponential { beta, .. } => SpaceSpec::l_log_l(1.0, 1.0 / beta),
            _ => Err(unsupported()),
        },
        SpaceSpec::Lambda(phi) => Ok(SpaceSpec::Marcinkiewicz(dual_fundamental(phi)?)),
        SpaceSpec::Marcinkiewicz(phi) => Ok(SpaceSpec::Lambda(dual_fundamental(phi)?)),
    }
}

/// `t/φ(t)`.
fn dual_fundamental(phi: &crate::spaces::FundamentalFn) -> Result<crate::spaces::FundamentalFn> {
    match phi.as_powlog() {
        Some(p) if p.single().is_some() => {
            let a = p.single().expect("single atom");
            crate::spaces::FundamentalFn::from_powlog(crate::PowLogFn::atom(
                1.0 / a.coeff,
                1.0 - a.power,
                -a.log_power,
            ))
        }
        _ => {
            let g = phi.grid().clone();
            let v = crate::GridFn::from_fn(&g, |t| t / phi.eval(t));
            crate::spaces::FundamentalFn::from_grid(v, 0.0)
        }
    }
}

/// Mean of `s^k` over `[lo, hi]`.
fn mean_power(k: f64, lo: f64, hi: f64) -> f64 {
    if (hi - lo) <= 1e-7 * hi {
        return (0.5 * (lo + hi)).powf(k);
    }
    if k == -1.0 {
        return (hi / lo).ln() / (hi - lo);
    }
    (hi.powf(k + 1.0) - lo.powf(k + 1.0)) / ((k + 1.0) * (hi - lo))
}

/// Cell averages of `t^{γ-1} ∫_0^t f*(s) ds` on the breakpoints of `f*`
/// refined by the grid nodes.
fn averaged_maximal(gamma: f64, f: &Func, grid: &Grid) -> StepFn {
    let star = f.to_steps(grid).rearranged().refine_with(grid.nodes());
    let mut values = Vec::with_capacity(star.len());
    let mut acc = 0.0;
    for j in 0..star.len() {
        let (lo, hi, v) = (star.cell_lo(j), star.ends()[j], star.values()[j]);
        // On the cell, ∫_0^t f* = acc + v (t − lo).
        let val = if v == 0.0 {
            acc * mean_power(gamma - 1.0, lo, hi)
        } else {
            (acc - v * lo) * mean_power(gamma - 1.0, lo, hi) + v * mean_power(gamma, lo, hi)
        };
        values.push(val);
        acc += v * (hi - lo);
    }
    StepFn::new(star.ends().to_vec(), values).expect("valid breakpoints")
}

/// Norm of `f` in the optimal target: `‖t^{γ-1} ∫_0^t f*‖_{X'}` with `X'`
/// the associate of the problem's domain.
pub fn optimal_target_norm(p: &EmbeddingProblem, f: &Func, grid: &Grid) -> Result<f64> {
    let xp = associate(&p.domain)?;
    xp.require_valid()?;
    let h = averaged_maximal(p.gamma(), f, grid);
    Ok(norm_star(&xp, &Func::Step(h).star(grid), grid))
}

/// `‖∫_t^1 s^{γ-1} f*(s) ds‖_Y` for a step function already rearranged or
/// arbitrary `h` (the functional is applied to `h` as given).
pub fn domain_functional(gamma: f64, target: &SpaceSpec, h: &StepFn, grid: &Grid) -> f64 {
    norm_star(target, &Func::Step(copson_steps(gamma, h, grid)).star(grid), grid)
}

/// Norm of `f` in the optimal domain: `‖∫_t^1 s^{γ-1} f*(s) ds‖_Y`.
pub fn optimal_domain_norm(p: &EmbeddingProblem, f: &Func, grid: &Grid) -> Result<f64> {
    p.target.require_valid()?;
    let star = f.to_steps(grid).rearranged();
    Ok(domain_functional(p.gamma(), &p.target, &star, grid))
}

/// Functional at `f*` and its largest value over all arrangements of the
/// cells of an equal-cell step function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationReport {
    pub star_value: f64,
    pub max_value: f64,
    pub permutations: usize,
}

/// Brute force over every ordering of the values of a step function with
/// equal cells.
pub fn permutation_oracle(p: &EmbeddingProblem, values: &[f64], grid: &Grid) -> Result<PermutationReport> {
    if values.len() > 8 {
        return Err(Error::Parameter("at most 8 cells".into()));
    }
    p.target.require_valid()?;
    let base = StepFn::uniform(values.to_vec())?;
    let star_value = domain_functional(p.gamma(), &p.target, &base.rearranged(), grid);
    let mut perm = values.to_vec();
    let mut max_value: f64 = 0.0;
    let mut count = 0;
    heap_permutations(&mut perm, values.len(), &mut |v| {
        let h = StepFn::uniform(v.to_vec()).expect("uniform cells");
        max_value = max_value.max(domain_functional(p.gamma(), &p.target, &h, grid));
        count += 1;
    });
    Ok(PermutationReport {
        star_value,
        max_value,
        permutations: count,
    })
}

fn heap_permutations(v: &mut [f64], k: usize, visit: &mut impl FnMut(&[f64])) {
    if k <= 1 {
        visit(v);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(v, k - 1, visit);
        if k % 2 == 0 {
            v.swap(i, k - 1);
        } else {
            v.swap(0, k - 1);
        }
    }
    heap_permutations(v, k - 1, visit);
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma36Report {
    pub ratio: f64,
    pub lower: f64,
    pub holds: bool,
}

/// `‖χ_(0,a)(t)(a^ζ − t^ζ)‖ / (a^ζ ‖χ_(0,a)‖)` against the interval
/// `[(1 − 2^{-ζ})/2, 1]`.
pub fn lemma36_check(zeta: f64, a: f64, s: &SpaceSpec, grid: &Grid) -> Result<Lemma36Report> {
    if !(zeta > 0.0) {
        return Err(Error::Parameter(format!("zeta = {zeta} must be positive")));
    }
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Parameter(format!("a = {a} outside (0, 1)")));
    }
    s.require_valid()?;
    let az = a.powf(zeta);
    let mut ends: Vec<f64> = grid.nodes().iter().copied().filter(|&t| t < a * (1.0 - 1e-12)).collect();
    ends.push(a);
    let mut values = Vec::with_capacity(ends.len() + 1);
    let mut lo = 0.0;
    for &hi in &ends {
        values.push(az - mean_power(zeta, lo, hi));
        lo = hi;
    }
    ends.push(1.0);
    values.push(0.0);
    let f = StepFn::new(ends, values)?;
    let num = norm_star(s, &Func::Step(f).star(grid), grid);
    let den = az * norm_star(s, &Func::Step(StepFn::indicator(a, 1.0)).star(grid), grid);
    let ratio = num / den;
    let lower = (1.0 - 0.5f64.powf(zeta)) / 2.0;
    let eps = 1e-6;
    Ok(Lemma36Report {
        ratio,
        lower,
        holds: ratio >= lower - eps && ratio <= 1.0 + eps,
    })
}
