//! The model domain `Ω_α` of the Maz'ya class `𝒥_α` and fundamental
//! functions of spaces induced by an isoperimetric profile.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcrep::quad::adaptive;
use crate::funcrep::{make_log_grid, quad_powlog, Func, Grid, GridFn, PowLogFn, StepFn};
use crate::operators::REFINEMENT_T_MINS;
use crate::spaces::FundamentalFn;
use crate::trend::{classify, Verdict};

/// Dimension, isoperimetric exponent and order of an embedding over `𝒥_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MazyaParams {
    n: u32,
    alpha: f64,
    m: u32,
}

impl MazyaParams {
    /// `n ≥ 2`, `α ∈ [1 − 1/n, 1)`, `m ≥ 1`.
    pub fn new(n: u32, alpha: f64, m: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("dimension n = {n} must be at least 2")));
        }
        let lo = 1.0 - 1.0 / n as f64;
        if !(alpha >= lo - 1e-12 && alpha < 1.0) {
            return Err(Error::Parameter(format!("alpha = {alpha} outside [{lo}, 1)")));
        }
        if m == 0 {
            return Err(Error::Parameter("m must be positive".into()));
        }
        Ok(MazyaParams { n, alpha, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n_prime(&self) -> f64 {
        self.n as f64 / (self.n as f64 - 1.0)
    }
    /// Volume of the unit ball in `R^{n-1}`.
    pub fn omega(&self) -> f64 {
        unit_ball_volume(self.n - 1)
    }
    /// Length `1/(1 − α)` of the domain along its axis.
    pub fn length(&self) -> f64 {
        1.0 / (1.0 - self.alpha)
    }
}

/// `ω_k` from `ω_0 = 1`, `ω_1 = 2`, `ω_k = 2π ω_{k-2} / k`.
pub fn unit_ball_volume(k: u32) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI * unit_ball_volume(k - 2) / k as f64,
    }
}

/// Radius of the cross-section of `Ω_α` at height `t`:
/// `ω^{-1/(n-1)} (1 − (1 − α)t)^{α/((1-α)(n-1))}`.
pub fn eta(p: &MazyaParams, t: f64) -> Result<f64> {
    let len = p.length();
    if !(t >= 0.0 && t <= len * (1.0 + 1e-15)) {
        return Err(Error::Domain(format!("t = {t} outside [0, {len}]")));
    }
    let k = (p.n - 1) as f64;
    let base = (1.0 - (1.0 - p.alpha) * t).max(0.0);
    Ok(p.omega().powf(-1.0 / k) * base.powf(p.alpha / ((1.0 - p.alpha) * k)))
}

/// `|Ω_α| = ∫_0^{1/(1-α)} ω η(t)^{n-1} dt`.
pub fn omega_volume(p: &MazyaParams) -> f64 {
    let w = p.omega();
    let k = (p.n - 1) as i32;
    adaptive(|t| w * eta(p, t).unwrap_or(0.0).powi(k), 0.0, p.length(), 1e-13)
}

/// Node samples `(t, η(t))` on `points + 1` equally spaced heights.
pub fn eta_profile(p: &MazyaParams, points: usize) -> Vec<(f64, f64)> {
    let len = p.length();
    (0..=points)
        .map(|i| {
            let t = len * i as f64 / points as f64;
            (t, eta(p, t).expect("in range"))
        })
        .collect()
}

/// A non-decreasing isoperimetric profile on `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoProfile {
    i: Func,
}

impl IsoProfile {
    pub fn new(i: Func) -> Result<Self> {
        let probe = crate::funcrep::default_grid();
        let vals: Vec<f64> = probe.nodes().iter().map(|&t| i.eval(t)).collect();
        if vals.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Domain("profile must be positive".into()));
        }
        if vals.windows(2).any(|w| w[1] < w[0] * (1.0 - 1e-12)) {
            return Err(Error::Domain("profile must be non-decreasing".into()));
        }
        Ok(IsoProfile { i })
    }

    pub fn func(&self) -> &Func {
        &self.i
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.i.eval(t)
    }

    /// `∫_lo^hi dτ / I(τ)`.
    pub fn recip_integral(&self, lo: f64, hi: f64) -> f64 {
        if let Func::PowLog(p) = &self.i {
            if let Some(a) = p.single() {
                return quad_powlog(-a.power, -a.log_power, lo, hi) / a.coeff;
            }
        }
        if lo == 0.0 {
            return f64::NAN;
        }
        adaptive(|u: f64| u.exp() / self.eval(u.exp()), lo.ln(), hi.ln(), 1e-12)
    }

    /// Whether `∫_0^1 1/I < ∞`.
    pub fn recip_integrable(&self) -> bool {
        self.recip_integral(0.0, 1.0).is_finite()
    }

    /// `φ/I` as cell averages on `grid` when both are power-log and `I` is a
    /// single atom, otherwise as node samples.
    fn weight(&self, phi: &FundamentalFn, grid: &Grid) -> StepFn {
        if let (Func::PowLog(p), Some(f)) = (&self.i, phi.as_powlog()) {
            if let Some(a) = p.single() {
                let w = f.shift(-a.power, -a.log_power).scale(1.0 / a.coeff);
                return StepFn::averages_of(&w, grid);
            }
        }
        StepFn::from_grid(&GridFn::from_fn(grid, |t| phi.eval(t) / self.eval(t)))
    }
}

/// The model profile `I(t) = t^α` of `𝒥_α`.
pub fn model_profile(alpha: f64) -> Result<IsoProfile> {
    if !(0.5..1.0).contains(&alpha) {
        return Err(Error::Parameter(format!("alpha = {alpha} outside [1/2, 1)")));
    }
    IsoProfile::new(Func::PowLog(PowLogFn::atom(1.0, alpha, 0.0)))
}

fn require_vanishing(phi_y: &FundamentalFn) -> Result<()> {
    let at_zero = match phi_y.as_powlog() {
        Some(p) => p.limit_at_zero(),
        None => phi_y.phi0(),
    };
    if at_zero > 0.0 {
        return Err(Error::Precondition(format!(
            "fundamental function tends to {at_zero} at 0, not 0"
        )));
    }
    Ok(())
}

/// `t sup_{s ∈ [t,1]} (φ_Y(s/2)/s) ∫_{s/2}^s dτ/I(τ)` at every node, the
/// supremum taken over `s = t` and the nodes above `t`.
fn lower_bound(phi_y: &FundamentalFn, iso: &IsoProfile, grid: &Grid) -> Vec<f64> {
    let nodes = grid.nodes();
    let g: Vec<f64> = nodes
        .iter()
        .map(|&s| phi_y.eval(0.5 * s) / s * iso.recip_integral(0.5 * s, s))
        .collect();
    let mut out = vec![0.0; nodes.len()];
    let mut acc: f64 = 0.0;
    for i in (0..nodes.len()).rev() {
        acc = acc.max(g[i]);
        out[i] = nodes[i] * acc;
    }
    out
}

/// Fundamental function of the space induced by `Y` and the profile `I`,
/// by the two-sided estimate with the supremum over `s ∈ (t, 1)`.
pub fn thm31_phi(phi_y: &FundamentalFn, iso: &IsoProfile, grid: &Grid) -> Result<FundamentalFn> {
    require_vanishing(phi_y)?;
    let v = lower_bound(phi_y, iso, grid);
    FundamentalFn::from_grid(GridFn::new(grid.clone(), v)?, 0.0)
}

/// Node-wise lower estimate, exact value for `Y = Λ_{φ_Y}`, and upper
/// estimate of the fundamental function of the induced space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sandwich {
    pub t: Vec<f64>,
    pub lower: Vec<f64>,
    /// `∫_0^t (φ_Y/I)*`: for `Y = Λ_{φ_Y}` the norm of `∫_τ^1 h/I` is
    /// `∫ h φ_Y/I`, maximized over `h* = χ_(0,t)` by the rearrangement.
    pub phi_x: Vec<f64>,
    /// `∫_0^t sup_{τ ∈ (s,1)} φ_Y(τ)/I(τ) ds`.
    pub upper: Vec<f64>,
}

impl Sandwich {
    /// Index of the first node violating `lower ≤ φ_X ≤ upper` by more than
    /// the relative slack.
    pub fn first_violation(&self, slack: f64) -> Option<usize> {
        (0..self.t.len()).find(|&i| {
            self.lower[i] > self.phi_x[i] * (1.0 + slack) || self.phi_x[i] > self.upper[i] * (1.0 + slack)
        })
    }
}

pub fn thm31_sandwich(phi_y: &FundamentalFn, iso: &IsoProfile, grid: &Grid) -> Result<Sandwich> {
    require_vanishing(phi_y)?;
    let nodes = grid.nodes();
    let lower = lower_bound(phi_y, iso, grid);
    let w = iso.weight(phi_y, grid);
    let star = w.rearranged();
    let phi_x: Vec<f64> = nodes.iter().map(|&t| star.integral_to(t)).collect();

    // Least non-increasing majorant of the weight, from cell averages and
    // node values.
    let node_w: Vec<f64> = nodes.iter().map(|&t| phi_y.eval(t) / iso.eval(t)).collect();
    let n = nodes.len();
    let mut major = vec![0.0; n];
    let mut acc: f64 = 0.0;
    for i in (0..n).rev() {
        acc = acc.max(w.values()[i]).max(node_w[i]);
        if i > 0 {
            acc = acc.max(node_w[i - 1]);
        }
        major[i] = acc;
    }
    let mut upper = Vec::with_capacity(n);
    let mut run = 0.0;
    for i in 0..n {
        run += major[i] * grid.cell_measure(i);
        upper.push(run);
    }
    Ok(Sandwich {
        t: nodes.to_vec(),
        lower,
        phi_x,
        upper,
    })
}

/// Ratio of the upper estimate to the lower one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cond32Report {
    pub max_ratio: f64,
    /// `(t_min, max over nodes of upper/lower)` for each refinement.
    pub refinement: Vec<(f64, f64)>,
    pub verdict: Verdict,
    pub holds: bool,
}

/// Whether the upper estimate is dominated by the lower one up to a
/// constant, tested on the refinement grids.
pub fn cond32_check(phi_y: &FundamentalFn, iso: &IsoProfile, points_per_decade: u32) -> Result<Cond32Report> {
    require_vanishing(phi_y)?;
    let mut refinement = Vec::new();
    for &t_min in &REFINEMENT_T_MINS {
        let grid = make_log_grid(t_min, points_per_decade)?;
        let s = thm31_sandwich(phi_y, iso, &grid)?;
        let r = s
            .upper
            .iter()
            .zip(&s.lower)
            .map(|(u, l)| u / l)
            .fold(0.0, f64::max);
        refinement.push((t_min, r));
    }
    let verdict = classify(&refinement);
    let max_ratio = refinement.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(Cond32Report {
        max_ratio,
        refinement,
        verdict,
        holds: max_ratio.is_finite() && verdict == Verdict::Bounded,
    })
}

/// `ψ(t) = t sup_{s ∈ [t,1]} φ_Y(s/2) s^{-α}`, sup over `s = t` and the
/// given nodes above `t`.
pub fn psi_sup_form(alpha: f64, phi_y: &FundamentalFn, t: f64, nodes: &[f64]) -> f64 {
    let mut best = phi_y.eval(0.5 * t) * t.powf(-alpha);
    for &s in nodes.iter().filter(|&&s| s > t) {
        best = best.max(phi_y.eval(0.5 * s) * s.powf(-alpha));
    }
    t * best
}

/// `ψ(t) = sup_{s ∈ (0,1)} φ_Y(s/2) min{t^{1-α}, t s^{-α}}`, sup over `s = t`
/// and the given nodes.
pub fn psi_min_form(alpha: f64, phi_y: &FundamentalFn, t: f64, nodes: &[f64]) -> f64 {
    let at = |s: f64| phi_y.eval(0.5 * s) * t.powf(1.0 - alpha).min(t * s.powf(-alpha));
    nodes.iter().map(|&s| at(s)).fold(at(t), f64::max)
}

/// Both forms of `ψ` at the nodes of `grid`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiReport {
    pub sup_form: Vec<f64>,
    pub min_form: Vec<f64>,
    pub max_rel_diff: f64,
}

pub fn psi(alpha: f64, phi_y: &FundamentalFn, grid: &Grid) -> Result<PsiReport> {
    if !(0.5..1.0).contains(&alpha) {
        return Err(Error::Parameter(format!("alpha = {alpha} outside [1/2, 1)")));
    }
    let nodes = grid.nodes();
    let sup_form: Vec<f64> = nodes.iter().map(|&t| psi_sup_form(alpha, phi_y, t, nodes)).collect();
    let min_form: Vec<f64> = nodes.iter().map(|&t| psi_min_form(alpha, phi_y, t, nodes)).collect();
    let max_rel_diff = sup_form
        .iter()
        .zip(&min_form)
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(PsiReport {
        sup_form,
        min_form,
        max_rel_diff,
    })
}

/// `(1 − σ^{1-α}) / log(1/σ)`.
pub fn geometric_constant(alpha: f64, sigma: f64) -> f64 {
    (1.0 - sigma.powf(1.0 - alpha)) / (1.0 / sigma).ln()
}

/// `∫_0^t ψ(s)/s ds` at every node from node samples of `ψ`: trapezoid in
/// `log s`, plus `ψ(t_0)/(1 − α)` below the first node, which bounds the
/// tail since `ψ(s) ≤ (s/t_0)^{1-α} ψ(t_0)` there.
pub fn psi_log_integral(alpha: f64, psi: &[f64], grid: &Grid) -> Vec<f64> {
    let nodes = grid.nodes();
    let mut out = Vec::with_capacity(nodes.len());
    let mut acc = psi[0] / (1.0 - alpha);
    out.push(acc);
    for i in 1..nodes.len() {
        acc += 0.5 * (psi[i] + psi[i - 1]) * (nodes[i] / nodes[i - 1]).ln();
        out.push(acc);
    }
    out
}

/// Smallest margin `ψ(t) − c ∫_0^t ψ/s` relative to `ψ(t)` over the nodes,
/// with `c` the geometric constant for `σ`. Non-negative when the bound
/// holds everywhere.
pub fn geometric_bound_margin(alpha: f64, psi: &[f64], grid: &Grid, sigma: f64) -> f64 {
    let c = geometric_constant(alpha, sigma);
    psi_log_integral(alpha, psi, grid)
        .iter()
        .zip(psi)
        .map(|(i, p)| (p - c * i) / p)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::log2t;

    fn grid() -> Grid {
        make_log_grid(1e-20, 32).unwrap()
    }

    #[test]
    fn ball_volumes() {
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn eta_triangle() {
        let p = MazyaParams::new(2, 0.5, 1).unwrap();
        for t in [0.0, 0.3, 1.0, 1.7, 2.0] {
            assert!((eta(&p, t).unwrap() - 0.5 * (1.0 - 0.5 * t)).abs() < 1e-16);
        }
        assert!(eta(&p, 2.5).is_err());
        assert!(eta(&p, -0.1).is_err());
    }

    #[test]
    fn eta_linear_in_three_dimensions() {
        let p = MazyaParams::new(3, 2.0 / 3.0, 1).unwrap();
        let c = PI.powf(-0.5);
        for t in [0.0, 1.0, 2.5, 3.0] {
            assert!((eta(&p, t).unwrap() - c * (1.0 - t / 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn params_validation() {
        assert!(MazyaParams::new(3, 0.6, 1).is_err());
        assert!(MazyaParams::new(1, 0.5, 1).is_err());
        assert!(MazyaParams::new(2, 1.0, 1).is_err());
        assert!(model_profile(1.0).is_err());
        assert!(model_profile(0.5).unwrap().recip_integrable());
    }

    #[test]
    fn unit_volume() {
        for (n, a) in [(2, 0.5), (2, 0.9), (3, 0.75), (4, 0.75)] {
            let p = MazyaParams::new(n, a, 1).unwrap();
            assert!((omega_volume(&p) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_phi_rejected() {
        let one = FundamentalFn::from_powlog(PowLogFn::constant(1.0)).unwrap();
        let iso = model_profile(0.5).unwrap();
        assert!(matches!(thm31_phi(&one, &iso, &grid()), Err(Error::Precondition(_))));
        assert!(matches!(cond32_check(&one, &iso, 16), Err(Error::Precondition(_))));
    }

    #[test]
    fn power_target_gives_power_domain() {
        let phi = FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.25, 0.0)).unwrap();
        let iso = model_profile(0.5).unwrap();
        let g = grid();
        let x = thm31_phi(&phi, &iso, &g).unwrap();
        let c = 2f64.powf(-0.25) * 2.0 * (1.0 - 0.5f64.sqrt());
        for &t in g.nodes() {
            assert!((x.eval(t) / t.powf(0.75) - c).abs() < 1e-9);
        }
    }

    #[test]
    fn sandwich_orders() {
        let phi = FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.0, -0.5)).unwrap();
        let iso = model_profile(0.5).unwrap();
        let s = thm31_sandwich(&phi, &iso, &grid()).unwrap();
        assert_eq!(s.first_violation(0.0), None);
        let i = 100;
        let t = s.t[i];
        let approx = t.sqrt() / log2t(t).sqrt();
        assert!(s.phi_x[i] / approx > 1.0 && s.phi_x[i] / approx < 3.0);
    }

    #[test]
    fn psi_forms_agree() {
        let phi = FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.5, -1.0)).unwrap();
        let r = psi(2.0 / 3.0, &phi, &grid()).unwrap();
        assert!(r.max_rel_diff < 1e-12);
    }

    #[test]
    fn geometric_bound() {
        let g = grid();
        for a in [0.5, 0.9] {
            let phi = FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.0, -0.5)).unwrap();
            let r = psi(a, &phi, &g).unwrap();
            assert!(geometric_bound_margin(a, &r.sup_form, &g, 0.5) >= 0.0);
        }
    }
}
