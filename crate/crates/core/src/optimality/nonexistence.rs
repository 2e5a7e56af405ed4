use serde::Serialize;

use super::{optimal_domain_norm, EmbeddingProblem};
use crate::error::{Error, Result};
use crate::funcrep::{log2t, make_log_grid, Func, Grid, PowLogFn, StepFn};
use crate::operators::copson_symbolic;
use crate::spaces::{
    fundamental_on, fundamental_orlicz, orlicz_membership, Asymptote, FundamentalFn, MembershipReport, SpaceSpec,
};
use crate::trend::ols_slope;

/// Where `q` sits relative to the two admissible ranges for the target
/// `L^{∞,q;-1+γ-1/q}`: `[1/γ, ∞]` from the statement of the nonexistence
/// result and `[1/(1−γ), ∞]` from the lemma identifying its fundamental
/// level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QRange {
    pub q: f64,
    pub in_statement_range: bool,
    pub in_proof_range: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonexistenceVerdict {
    NonexistenceCertified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonexistenceReport {
    pub m: u32,
    pub alpha: f64,
    pub q: QRange,
    /// `(log 2/t)^{-(1-γ)}`, the fundamental level of the target.
    pub level: String,
    /// Range of `φ_target / φ_{exp L^{1/(1-γ)}}` over the grid.
    pub level_ratio: (f64, f64),
    #[serde(skip)]
    pub phi_x: FundamentalFn,
    pub phi_x_label: String,
    /// `(a, measured φ_X(a), a^γ (log 2/a)^{γ-1})`.
    pub phi_x_samples: Vec<(f64, f64, f64)>,
    /// Range of measured over closed-form `φ_X`.
    pub phi_x_ratio: (f64, f64),
    pub fundamental_orlicz_id: Asymptote,
    pub beta: f64,
    pub beta_interval: (f64, f64),
    pub membership: bool,
    pub membership_report: MembershipReport,
    /// Exponent of `∫_t^2 s^{γ-1} f_β / (log 2/t)^{1-γ}` in `log 2/t`; the
    /// integral runs to `s = 2`, where `log 2/s` vanishes, so the exponent
    /// carries no offset from the endpoint.
    pub divergence_slope: f64,
    /// Least-squares slope of `log S` against `log log 2/t` for the ratio `S`
    /// with the integral over `(t, 1)`.
    pub raw_slope: f64,
    pub predicted_slope: f64,
    pub verdict: NonexistenceVerdict,
}

/// Range of `t` over which divergence is regressed.
pub const SLOPE_WINDOW: (f64, f64) = (1e-30, 1e-3);

fn q_range(gamma: f64, q: f64) -> Result<QRange> {
    if !(q >= 1.0) {
        return Err(Error::Parameter(format!("q = {q} must be at least 1")));
    }
    let r = QRange {
        q,
        in_statement_range: q >= 1.0 / gamma * (1.0 - 1e-12),
        in_proof_range: q >= 1.0 / (1.0 - gamma) * (1.0 - 1e-12),
    };
    if !(r.in_statement_range || r.in_proof_range) {
        return Err(Error::Parameter(format!(
            "q = {q} below both 1/γ = {} and 1/(1−γ) = {}",
            1.0 / gamma,
            1.0 / (1.0 - gamma)
        )));
    }
    Ok(r)
}

/// `(t, S(t))` with `S(t) = ∫_t^1 s^{γ-1} f_β(s) ds / (log 2/t)^{1-γ}` and
/// `f_β(t) = t^{-γ} (log 2/t)^β`, at the nodes of `grid` inside `[lo, hi]`.
pub fn witness_curve(gamma: f64, beta: f64, grid: &Grid, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let f = PowLogFn::atom(1.0, -gamma, beta);
    let g = copson_symbolic(gamma, &f).expect("the witness has a closed antiderivative");
    grid.nodes()
        .iter()
        .filter(|&&t| t >= lo * (1.0 - 1e-12) && t <= hi * (1.0 + 1e-12))
        .map(|&t| (t, g.eval(t) / log2t(t).powf(1.0 - gamma)))
        .collect()
}

/// `sup_t g*(t) / (log 2/t)^{1-γ}`, equivalent to the `exp L^{1/(1-γ)}`
/// norm.
pub fn expl_sup_functional(gamma: f64, g: &StepFn) -> f64 {
    let star = g.rearranged();
    (0..star.len())
        .map(|j| star.values()[j] / log2t(star.ends()[j]).powf(1.0 - gamma))
        .fold(0.0, f64::max)
}

/// The nonexistence certificate for a largest Orlicz domain in
/// `W^m L^A ↪ L^{∞,q;-1+γ-1/q}`, `γ = m(1 − α)`.
///
/// Steps: the target's fundamental level; `φ_X` measured on characteristic
/// functions and checked against its closed form; the fundamental Orlicz
/// space `L(X)`; membership of the witness `t^{-γ}(log 2/t)^β` in `L(X)`;
/// the growth exponent of `S`.
pub fn thm38_pipeline(m: u32, alpha: f64, q: f64, beta: Option<f64>, points_per_decade: u32) -> Result<NonexistenceReport> {
    if m == 0 {
        return Err(Error::Parameter("m must be positive".into()));
    }
    if !(0.5..1.0).contains(&alpha) {
        return Err(Error::Parameter(format!("alpha = {alpha} outside [1/2, 1)")));
    }
    let gamma = m as f64 * (1.0 - alpha);
    if gamma >= 1.0 {
        return Err(Error::Precondition(format!(
            "m(1-alpha) = {gamma} ≥ 1 leaves no admissible witness exponent"
        )));
    }
    let q = q_range(gamma, q)?;
    let beta_interval = (-gamma, 1.0 - 2.0 * gamma);
    let beta = beta.unwrap_or(0.5 * (beta_interval.0 + beta_interval.1));
    if !(beta > beta_interval.0 && beta < beta_interval.1) {
        return Err(Error::Parameter(format!(
            "beta = {beta} outside ({}, {})",
            beta_interval.0, beta_interval.1
        )));
    }
    let grid = make_log_grid(SLOPE_WINDOW.0, points_per_decade)?;

    // Fundamental level of the target and of exp L^{1/(1-γ)}.
    let level = PowLogFn::atom(1.0, 0.0, gamma - 1.0);
    let target = SpaceSpec::LorentzZygmund {
        p: f64::INFINITY,
        q: q.q,
        zeta: gamma - 1.0 - if q.q.is_infinite() { 0.0 } else { 1.0 / q.q },
    };
    let expl = SpaceSpec::exp_l(1.0 / (1.0 - gamma))?;
    let phi_t = fundamental_on(&target, &grid)?;
    let phi_e = fundamental_on(&expl, &grid)?;
    let level_ratio = ratio_range(grid.nodes().iter().map(|&t| phi_t.eval(t) / phi_e.eval(t)));

    // φ_X on characteristic functions, against a^γ (log 2/a)^{γ-1}.
    let problem = EmbeddingProblem::new(m, alpha, SpaceSpec::Lebesgue(1.0), expl)?;
    let closed = PowLogFn::atom(1.0, gamma, gamma - 1.0);
    let phi_x_samples: Vec<(f64, f64, f64)> = grid
        .nodes()
        .iter()
        .step_by(4)
        .filter(|&&a| (1e-10..=0.5).contains(&a))
        .map(|&a| {
            let v = optimal_domain_norm(&problem, &Func::Step(StepFn::indicator(a, 1.0)), &grid)?;
            Ok((a, v, closed.eval(a)))
        })
        .collect::<Result<_>>()?;
    let phi_x_ratio = ratio_range(phi_x_samples.iter().map(|s| s.1 / s.2));
    let phi_x = FundamentalFn::from_powlog(closed)?;

    let young = fundamental_orlicz(&phi_x)?;
    let witness = Func::PowLog(PowLogFn::atom(1.0, -gamma, beta));
    let membership_report = orlicz_membership(&young, &witness, &grid);
    let membership = membership_report.member == Some(true);

    let curve = witness_curve(gamma, beta, &grid, SLOPE_WINDOW.0, SLOPE_WINDOW.1);
    let raw_slope = ols_slope(
        &curve
            .iter()
            .map(|&(t, s)| (log2t(t).ln(), s.ln()))
            .collect::<Vec<_>>(),
    );
    // ∫_1^2 s^{-1} (log 2/s)^β ds = (log 2)^{β+1}/(β+1).
    let head = std::f64::consts::LN_2.powf(beta + 1.0) / (beta + 1.0);
    let divergence_slope = ols_slope(
        &curve
            .iter()
            .map(|&(t, s)| {
                let l = log2t(t);
                (l.ln(), (s + head / l.powf(1.0 - gamma)).ln())
            })
            .collect::<Vec<_>>(),
    );
    let predicted_slope = beta + gamma;
    let verdict = if membership && (divergence_slope - predicted_slope).abs() <= 0.1 * predicted_slope {
        NonexistenceVerdict::NonexistenceCertified
    } else {
        NonexistenceVerdict::Inconclusive
    };
    Ok(NonexistenceReport {
        m,
        alpha,
        q,
        level: level.to_string(),
        level_ratio,
        phi_x_label: phi_x.label(),
        phi_x,
        phi_x_samples,
        phi_x_ratio,
        fundamental_orlicz_id: young.asymptote(),
        beta,
        beta_interval,
        membership,
        membership_report,
        divergence_slope,
        raw_slope,
        predicted_slope,
        verdict,
    })
}

fn ratio_range(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, 0.0), |(lo, hi), r| (lo.min(r), hi.max(r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_order_is_rejected() {
        assert!(matches!(thm38_pipeline(2, 0.5, 2.0, None, 16), Err(Error::Precondition(_))));
        assert!(matches!(thm38_pipeline(1, 0.5, 2.0, Some(0.1), 16), Err(Error::Parameter(_))));
    }

    #[test]
    fn witness_for_half() {
        let r = thm38_pipeline(1, 0.5, 2.0, Some(-0.25), 16).unwrap();
        assert!(r.membership);
        assert!((r.divergence_slope - 0.25).abs() < 1e-9);
        assert_eq!(r.verdict, NonexistenceVerdict::NonexistenceCertified);
        assert!(r.fundamental_orlicz_id.approx_eq(&Asymptote::PowerLog { p: 2.0, a: -1.0 }, 1e-9));
    }
}
