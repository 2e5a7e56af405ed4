use serde::Serialize;

use super::fundamental::{FundamentalFn, Phi};
use super::norm::{luxemburg_steps, norm_star};
use super::spec::SpaceSpec;
use super::young::{atom_asymptote, Asymptote, YoungFn};
use super::QUASICONCAVE_SLACK;
use crate::error::{Error, Result};
use crate::funcrep::quad::{adaptive, converges_at_zero, QUAD_RTOL};
use crate::funcrep::{default_grid, Func, Grid, GridFn, PowLogFn, Star, StepFn};

/// Fundamental function of `s` on the default grid.
pub fn fundamental(s: &SpaceSpec) -> Result<FundamentalFn> {
    fundamental_on(s, default_grid())
}

/// Closed forms for the Lebesgue, Lorentz and Lorentz–Zygmund scales;
/// `‖χ_(0,t)‖` at every node of `grid` otherwise.
pub fn fundamental_on(s: &SpaceSpec, grid: &Grid) -> Result<FundamentalFn> {
    s.require_valid()?;
    let inf = f64::INFINITY;
    let closed = match *s {
        SpaceSpec::Lebesgue(p) if p == inf => Some(PowLogFn::constant(1.0)),
        SpaceSpec::Lebesgue(p) => Some(PowLogFn::atom(1.0, 1.0 / p, 0.0)),
        SpaceSpec::Lorentz { p, q } if p == inf => {
            let _ = q;
            Some(PowLogFn::constant(1.0))
        }
        SpaceSpec::Lorentz { p, q } if q == inf => Some(PowLogFn::atom(1.0, 1.0 / p, 0.0)),
        SpaceSpec::Lorentz { p, q } => Some(PowLogFn::atom((p / q).powf(1.0 / q), 1.0 / p, 0.0)),
        SpaceSpec::LorentzZygmund { p, q, zeta } if p == inf => {
            let e = if q == inf { zeta } else { zeta + 1.0 / q };
            Some(PowLogFn::atom(1.0, 0.0, e))
        }
        SpaceSpec::LorentzZygmund { p, zeta, .. } => Some(PowLogFn::atom(1.0, 1.0 / p, zeta)),
        _ => None,
    };
    if let Some(f) = closed {
        return FundamentalFn::from_powlog(f);
    }
    let phi0 = match s {
        SpaceSpec::Orlicz(a) if a.asymptote() == Asymptote::LInfinity => 1.0,
        SpaceSpec::Orlicz(_) => 0.0,
        SpaceSpec::Lambda(phi) | SpaceSpec::Marcinkiewicz(phi) => phi.phi0(),
        _ => unreachable!(),
    };
    let values = grid
        .nodes()
        .iter()
        .map(|&t| indicator_norm(s, t, grid))
        .collect();
    FundamentalFn::from_grid(GridFn::new(grid.clone(), values)?, phi0)
}

fn indicator_norm(s: &SpaceSpec, t: f64, grid: &Grid) -> f64 {
    let chi = StepFn::indicator(t, 1.0);
    match s {
        SpaceSpec::Orlicz(a) => luxemburg_steps(a, &chi),
        other => norm_star(other, &Star::Steps(chi), grid),
    }
}

/// The Orlicz space on the fundamental level of `phi`:
/// `A^{-1}(u) = 1/φ(1/u)` for `u ≥ 1`, linear below.
///
/// `A` inherits only quasi-convexity (`A(t)/t` non-decreasing) from a
/// quasiconcave `φ`; that is all the Luxemburg functional needs to be
/// monotone in `λ`.
pub fn fundamental_orlicz(phi: &FundamentalFn) -> Result<YoungFn> {
    let defect = phi.quasiconcavity_defect(phi.grid());
    if defect > QUASICONCAVE_SLACK {
        return Err(Error::Domain(format!(
            "fundamental function is not quasiconcave (defect factor {defect:.3})"
        )));
    }
    let asymptote = phi_asymptote(phi)?;
    let (xs, ys) = phi.log_table(20);
    Ok(YoungFn::from_table(phi.clone(), xs, ys, asymptote, phi.label()))
}

/// Near-infinity descriptor of the Orlicz space with fundamental function
/// `phi`: read off the leading atom, or fitted near zero for sampled `φ`.
pub fn phi_asymptote(phi: &FundamentalFn) -> Result<Asymptote> {
    match phi.phi() {
        Phi::PowLog(f) => {
            if phi.phi0() > 0.0 {
                return Ok(Asymptote::LInfinity);
            }
            let lead = f
                .leading_at_zero()
                .ok_or_else(|| Error::Domain("zero fundamental function".into()))?;
            atom_asymptote(&lead)
        }
        Phi::Grid(g) => {
            if phi.phi0() > 0.0 {
                return Ok(Asymptote::LInfinity);
            }
            let (a, b) = fit_power_log(g);
            let snap = |x: f64| if x.abs() < 1e-2 { 0.0 } else { x };
            Asymptote::from_fundamental_atom(snap(a), snap(b))
        }
    }
}

/// Least-squares fit of `log φ = c + a log t + b log log(2/t)` over the nodes
/// below `1e-3`.
pub fn fit_power_log(g: &GridFn) -> (f64, f64) {
    let rows: Vec<(f64, f64, f64)> = g
        .grid()
        .nodes()
        .iter()
        .zip(g.values())
        .filter(|(&t, &v)| t <= 1e-3 && v > 0.0)
        .map(|(&t, &v)| (t.ln(), crate::funcrep::log2t(t).ln(), v.ln()))
        .collect();
    let n = rows.len() as f64;
    let mean = |k: usize| {
        rows.iter()
            .map(|r| [r.0, r.1, r.2][k])
            .sum::<f64>()
            / n
    };
    let (mx, ml, my) = (mean(0), mean(1), mean(2));
    let (mut sxx, mut sxl, mut sll, mut sxy, mut sly) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, l, y) in &rows {
        let (x, l, y) = (x - mx, l - ml, y - my);
        sxx += x * x;
        sxl += x * l;
        sll += l * l;
        sxy += x * y;
        sly += l * y;
    }
    let det = sxx * sll - sxl * sxl;
    if det.abs() < 1e-300 {
        return (sxy / sxx, 0.0);
    }
    ((sxy * sll - sly * sxl) / det, (sly * sxx - sxy * sxl) / det)
}

/// Whether `A` dominates `B` near infinity, decided on the descriptors.
pub fn dominates_near_infinity(a: &YoungFn, b: &YoungFn) -> bool {
    descriptor_dominates(&a.asymptote(), &b.asymptote())
}

pub fn descriptor_dominates(a: &Asymptote, b: &Asymptote) -> bool {
    use Asymptote::*;
    match (a, b) {
        (LInfinity, _) => true,
        (_, LInfinity) => false,
        (Exponential { .. }, PowerLog { .. }) => true,
        (PowerLog { .. }, Exponential { .. }) => false,
        (Exponential { beta: x }, Exponential { beta: y }) => x >= y,
        (PowerLog { p, a }, PowerLog { p: q, a: c }) => p > q || (p == q && a >= c),
    }
}

/// Mutual domination: the two Orlicz spaces coincide.
pub fn equivalent_near_infinity(a: &YoungFn, b: &YoungFn) -> bool {
    dominates_near_infinity(a, b) && dominates_near_infinity(b, a)
}

/// The Δ₂ condition, decided on the descriptor.
pub fn delta2(a: &YoungFn) -> bool {
    matches!(a.asymptote(), Asymptote::PowerLog { .. })
}

/// `max A(2t)/A(t)` over a log-spaced sample of `[1, 1e6]`; `∞` when `A`
/// overflows.
pub fn delta2_sampled(a: &YoungFn) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..=600 {
        let t = 10f64.powf(k as f64 / 100.0);
        let (x, y) = (a.eval(t), a.eval(2.0 * t));
        let r = if x == 0.0 {
            if y == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            y / x
        };
        worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
    }
    worst
}

/// Outcome of an Orlicz membership test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    /// `None` when the numeric trend is inconclusive.
    pub member: Option<bool>,
    /// `"symbolic"` when decided from exponents, `"trend"` otherwise.
    pub decided_by: String,
    /// `(t, ∫_t^1 A(|f|))` for `t = 10^{-k}`.
    pub integrals: Vec<(f64, f64)>,
    /// Fitted `κ` in `∫_t^1 A(|f|) ≈ (log 2/t)^κ`.
    pub growth_exponent: Option<f64>,
}

/// Whether `f ∈ L^A`.
///
/// Power-log `f` is decided from the exponents of its leading atom against
/// the descriptor of `A`; the integrals over shrinking `(t, 1)` and their
/// growth exponent are always reported. Other inputs are decided by the
/// trend of those integrals.
pub fn orlicz_membership(a: &YoungFn, f: &Func, grid: &Grid) -> MembershipReport {
    let decades = (-grid.t_min().log10()).round() as i32;
    let mut integrals = Vec::new();
    let mut total = 0.0;
    let mut hi: f64 = 1.0;
    for k in 1..=decades {
        let lo = 10f64.powi(-k);
        total += modular_between(a, f, lo, hi);
        integrals.push((lo, total));
        hi = lo;
    }
    let growth_exponent = growth_exponent(&integrals);
    let symbolic = match f {
        Func::PowLog(p) => symbolic_membership(&a.asymptote(), p),
        _ => None,
    };
    let (member, decided_by) = match symbolic {
        Some(m) => (Some(m), "symbolic"),
        None => (trend_membership(&integrals), "trend"),
    };
    MembershipReport {
        member,
        decided_by: decided_by.into(),
        integrals,
        growth_exponent,
    }
}

fn modular_between(a: &YoungFn, f: &Func, lo: f64, hi: f64) -> f64 {
    match f {
        Func::PowLog(p) => {
            let (u0, u1) = (crate::funcrep::log2t(hi), crate::funcrep::log2t(lo));
            adaptive(
                |u: f64| {
                    let t = 2.0 * (-u).exp();
                    a.eval(p.eval(t).abs()) * t
                },
                u0,
                u1,
                QUAD_RTOL * 100.0,
            )
        }
        other => {
            let s = other.to_steps(default_grid());
            let mut acc = 0.0;
            for j in 0..s.len() {
                let (c0, c1) = (s.cell_lo(j).max(lo), s.ends()[j].min(hi));
                if c1 > c0 {
                    acc += a.eval(s.values()[j].abs()) * (c1 - c0);
                }
            }
            acc
        }
    }
}

fn growth_exponent(integrals: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = integrals
        .windows(2)
        .skip(integrals.len() / 2)
        .filter_map(|w| {
            let d = w[1].1 - w[0].1;
            (d > 0.0 && d.is_finite()).then(|| (crate::funcrep::log2t(w[1].0).ln(), d.ln()))
        })
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let slope = crate::trend::ols_slope(&pts);
    // Increments over equal steps in log t behave like L^{κ-1}.
    Some(slope + 1.0)
}

fn trend_membership(integrals: &[(f64, f64)]) -> Option<bool> {
    let n = integrals.len();
    if n < 4 {
        return None;
    }
    let last = integrals[n - 1].1;
    if !last.is_finite() {
        return Some(false);
    }
    let rel = |i: usize| (integrals[i].1 - integrals[i - 1].1) / integrals[i - 1].1.max(1e-300);
    if rel(n - 1) < 0.01 {
        return Some(true);
    }
    if (n - 3..n).all(|i| rel(i) >= 0.05) {
        return Some(false);
    }
    None
}

/// Membership decided from exponents: `A ~ t^p log^a t` and the leading
/// atom `c t^e (log 2/t)^g` of `f` near zero.
pub fn symbolic_membership(desc: &Asymptote, f: &PowLogFn) -> Option<bool> {
    let lead = f.leading_at_zero()?;
    let bounded = lead.power > 0.0 || (lead.power == 0.0 && lead.log_power <= 0.0);
    if bounded {
        return Some(true);
    }
    Some(match *desc {
        Asymptote::LInfinity => false,
        Asymptote::PowerLog { p, a } => {
            if lead.power < 0.0 {
                converges_at_zero(p * lead.power, p * lead.log_power + a)
            } else {
                true
            }
        }
        Asymptote::Exponential { beta } => lead.power == 0.0 && lead.log_power * beta <= 1.0,
    })
}

/// `(Λ_φ, M_φ)`, the smallest and largest r.i. spaces with fundamental
/// function `φ`.
pub fn endpoint_spaces(phi: &FundamentalFn) -> Result<(SpaceSpec, SpaceSpec)> {
    let defect = phi.quasiconcavity_defect(phi.grid());
    if defect > QUASICONCAVE_SLACK {
        return Err(Error::Domain(format!(
            "fundamental function is not quasiconcave (defect factor {defect:.3})"
        )));
    }
    Ok((SpaceSpec::Lambda(phi.clone()), SpaceSpec::Marcinkiewicz(phi.clone())))
}
