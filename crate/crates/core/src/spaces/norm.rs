use super::fundamental::{FundamentalFn, Majorant};
use super::spec::SpaceSpec;
use super::young::YoungFn;
use crate::error::Result;
use crate::funcrep::powlog::Atom;
use crate::funcrep::{default_grid, quad_powlog, Func, Grid, PowLogFn, Star, StepFn};

/// Norm of `f` in `s`, sampling on the default grid where needed.
pub fn norm(s: &SpaceSpec, f: &Func) -> Result<f64> {
    norm_on(s, f, default_grid())
}

/// Norm of `f` in `s`, sampling on `grid` where needed.
pub fn norm_on(s: &SpaceSpec, f: &Func, grid: &Grid) -> Result<f64> {
    s.require_valid()?;
    Ok(norm_star(s, &f.star(grid), grid))
}

/// Norm of a function given by its rearrangement. The spec is assumed valid.
pub fn norm_star(s: &SpaceSpec, star: &Star, grid: &Grid) -> f64 {
    match s {
        SpaceSpec::Lebesgue(p) if p.is_infinite() => star.sup(),
        SpaceSpec::Lebesgue(p) => weighted(star, grid, *p, *p, 0.0),
        SpaceSpec::Lorentz { p, q } => weighted(star, grid, *p, *q, 0.0),
        SpaceSpec::LorentzZygmund { p, q, zeta } => weighted(star, grid, *p, *q, *zeta),
        SpaceSpec::Orlicz(a) => match a {
            YoungFn::LInfinity => star.sup(),
            _ => luxemburg_steps(a, &star.to_steps(grid)),
        },
        SpaceSpec::Lambda(phi) => lambda_norm(phi, star, grid),
        SpaceSpec::Marcinkiewicz(phi) => marcinkiewicz_norm(phi, star, grid),
    }
}

/// `(∫_0^1 (t^{1/p} (log 2/t)^ζ f*(t))^q dt/t)^{1/q}`, or the supremum of
/// the same weight times `f*` when `q = ∞`.
fn weighted(star: &Star, grid: &Grid, p: f64, q: f64, zeta: f64) -> f64 {
    let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
    if let Star::Symbolic { f, support } = star {
        if let Some(v) = weighted_symbolic(f, *support, inv_p, q, zeta) {
            return v;
        }
    }
    let s = star.to_steps(grid);
    if q.is_infinite() {
        let w = Atom::new(1.0, inv_p, zeta);
        let mut best: f64 = 0.0;
        for j in 0..s.len() {
            let v = s.values()[j];
            if v == 0.0 {
                continue;
            }
            best = best.max(v * w.sup_on(s.cell_lo(j), s.ends()[j]));
        }
        return best;
    }
    let (a, b) = (q * inv_p - 1.0, q * zeta);
    let mut acc = 0.0;
    for j in 0..s.len() {
        let v = s.values()[j];
        if v == 0.0 {
            continue;
        }
        let w = quad_powlog(a, b, s.cell_lo(j), s.ends()[j]);
        if w == 0.0 {
            continue;
        }
        acc += v.powf(q) * w;
    }
    acc.powf(1.0 / q)
}

fn weighted_symbolic(f: &PowLogFn, support: f64, inv_p: f64, q: f64, zeta: f64) -> Option<f64> {
    if f.is_zero() {
        return Some(0.0);
    }
    if q.is_infinite() {
        let g = f.shift(inv_p, zeta);
        return Some(match g.single() {
            Some(a) => a.sup_on(0.0, support),
            None => g
                .limit_at_zero()
                .max(super::super::funcrep::func::powlog_sup(&g, 1e-300, support)),
        });
    }
    if let Some(a) = f.single() {
        let w = quad_powlog(q * (a.power + inv_p) - 1.0, q * (a.log_power + zeta), 0.0, support);
        return Some(a.coeff * w.powf(1.0 / q));
    }
    if q == 1.0 {
        return Some(
            f.atoms()
                .iter()
                .map(|a| a.coeff * quad_powlog(a.power + inv_p - 1.0, a.log_power + zeta, 0.0, support))
                .sum(),
        );
    }
    None
}

/// Luxemburg norm of `f` with Young function `a`.
pub fn luxemburg_norm(a: &YoungFn, f: &Func) -> f64 {
    let grid = default_grid();
    let star = f.star(grid);
    match a {
        YoungFn::LInfinity => star.sup(),
        _ => luxemburg_steps(a, &star.to_steps(grid)),
    }
}

/// `inf{λ > 0 : ∫ A(|f|/λ) ≤ 1}` for a step function: bracket from `λ = 1`
/// by doubling or halving, then bisect 60 times.
pub fn luxemburg_steps(a: &YoungFn, f: &StepFn) -> f64 {
    let cells: Vec<(f64, f64)> = (0..f.len())
        .map(|j| (f.values()[j].abs(), f.measure(j)))
        .filter(|&(v, m)| v > 0.0 && m > 0.0)
        .collect();
    if cells.is_empty() {
        return 0.0;
    }
    if cells.iter().any(|&(v, _)| v.is_infinite()) {
        return f64::INFINITY;
    }
    if matches!(a, YoungFn::LInfinity) {
        return cells.iter().map(|&(v, _)| v).fold(0.0, f64::max);
    }
    let modular = |lambda: f64| -> f64 {
        let mut acc = 0.0;
        for &(v, m) in &cells {
            acc += a.eval(v / lambda) * m;
            if acc > 1.0 {
                return acc;
            }
        }
        acc
    };
    let (mut lo, mut hi);
    if modular(1.0) <= 1.0 {
        hi = 1.0;
        lo = 0.5;
        let mut k = 0;
        while modular(lo) <= 1.0 {
            hi = lo;
            lo *= 0.5;
            k += 1;
            if k > 2000 {
                return 0.0;
            }
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        let mut k = 0;
        while modular(hi) > 1.0 {
            lo = hi;
            hi *= 2.0;
            k += 1;
            if k > 2000 {
                return f64::INFINITY;
            }
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `φ(0+)‖f‖_∞ + ∫_0^1 f* dφ̄`.
fn lambda_norm(phi: &FundamentalFn, star: &Star, grid: &Grid) -> f64 {
    if let (Star::Symbolic { f, support }, Some(p), Majorant::Exact) =
        (star, phi.as_powlog(), phi.majorant())
    {
        let head = if phi.phi0() > 0.0 { phi.phi0() * f.limit_at_zero() } else { 0.0 };
        let mut body = 0.0;
        for fa in f.atoms() {
            for pa in p.atoms() {
                // d/dt c t^a L^b = c a t^{a−1} L^b − c b t^{a−1} L^{b−1}
                let e = fa.power + pa.power - 1.0;
                if pa.power != 0.0 {
                    body += fa.coeff * pa.coeff * pa.power
                        * quad_powlog(e, fa.log_power + pa.log_power, 0.0, *support);
                }
                if pa.log_power != 0.0 {
                    body -= fa.coeff * pa.coeff * pa.log_power
                        * quad_powlog(e, fa.log_power + pa.log_power - 1.0, 0.0, *support);
                }
            }
        }
        return head + body;
    }
    let s = star.to_steps(grid);
    let mut acc = 0.0;
    let mut prev = 0.0;
    for j in 0..s.len() {
        let cur = phi.majorant_eval(s.ends()[j]);
        let inc = cur - prev;
        let v = s.values()[j];
        if v != 0.0 && inc > 0.0 {
            acc += v * inc;
        }
        prev = cur;
    }
    acc
}

/// `sup_t φ(t) f**(t)` over the breakpoints of `f*`, the nodes of `grid`
/// and `t → 0+`.
fn marcinkiewicz_norm(phi: &FundamentalFn, star: &Star, grid: &Grid) -> f64 {
    let head = if phi.phi0() > 0.0 { phi.phi0() * star.sup() } else { 0.0 };
    let mut best = head;
    match star {
        Star::Symbolic { f, support } => {
            let mut pts: Vec<f64> = grid.nodes().to_vec();
            pts.push(*support);
            for t in pts {
                let v = phi.eval(t) * f.integral(0.0, t.min(*support)) / t;
                best = best.max(v);
            }
        }
        Star::Steps(s) => {
            let mut prefix = Vec::with_capacity(s.len());
            let mut acc = 0.0;
            for j in 0..s.len() {
                let v = s.values()[j];
                if v != 0.0 {
                    acc += v * s.measure(j);
                }
                prefix.push(acc);
            }
            let at = |t: f64| -> f64 {
                let j = s.ends().partition_point(|&x| x < t).min(s.len() - 1);
                let before = if j == 0 { 0.0 } else { prefix[j - 1] };
                let v = s.values()[j];
                let part = if v == 0.0 { 0.0 } else { v * (t - s.cell_lo(j)) };
                (before + part) / t
            };
            for &t in s.ends().iter().chain(grid.nodes()) {
                best = best.max(phi.eval(t) * at(t));
            }
        }
    }
    best
}
