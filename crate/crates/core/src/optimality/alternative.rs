use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::funcrep::{make_log_grid, Func, Grid};
use crate::operators::TestFamily;
use crate::spaces::{fundamental_orlicz, luxemburg_steps, orlicz_membership, Asymptote, FundamentalFn};
use crate::trend::{classify, Verdict, FLAT_SPREAD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    LargestOrliczExists,
    NoLargestOrlicz,
    /// The sweep did not settle the question, or the theorem applied does
    /// not decide it.
    Undecided,
}

/// `‖f‖_X / ‖f‖_{L^A}` of one family member under refinement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberTrend {
    pub label: String,
    /// `Some(true)` when `f ∈ L^A` is established.
    pub in_orlicz: Option<bool>,
    pub ratios: Vec<(f64, f64)>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlternativeReport {
    pub decision: Decision,
    /// Descriptor of the fundamental Orlicz space `L(X)`.
    pub orlicz: Asymptote,
    /// A member of `L(X)` whose `X` norm diverges under refinement.
    pub witness: Option<String>,
    /// `(t_min, max over the family of ‖f‖_X / ‖f‖_{L(X)})`.
    pub best_ratio_trend: Vec<(f64, f64)>,
    pub inconclusive: bool,
    pub members: Vec<MemberTrend>,
}

/// Decide whether `L(X) ⊂ X` for the space `X` with fundamental function
/// `phi_x` and norm `x_norm`, sweeping the family on grids with the given
/// lower ends.
///
/// No largest Orlicz space: some member of `L(X)` has a ratio diverging
/// under refinement. Largest Orlicz space exists: the largest ratio over the
/// family is flat within [`FLAT_SPREAD`] and nothing diverges.
pub fn principal_alternative<N>(
    phi_x: &FundamentalFn,
    x_norm: N,
    family: &TestFamily,
    t_mins: &[f64],
    points_per_decade: u32,
) -> Result<AlternativeReport>
where
    N: Fn(&Func, &Grid) -> f64 + Sync,
{
    let a = fundamental_orlicz(phi_x)?;
    let grids: Vec<Grid> = t_mins
        .iter()
        .map(|&t| make_log_grid(t, points_per_decade))
        .collect::<Result<_>>()?;
    let finest = grids
        .iter()
        .min_by(|x, y| x.t_min().total_cmp(&y.t_min()))
        .expect("at least one grid");
    let members: Vec<MemberTrend> = family
        .members()
        .par_iter()
        .map(|m| {
            let in_orlicz = orlicz_membership(&a, &m.f, finest).member;
            let ratios: Vec<(f64, f64)> = grids
                .iter()
                .map(|g| {
                    let s = m.f.to_steps(g);
                    let xn = x_norm(&Func::Step(s.clone()), g);
                    let an = luxemburg_steps(&a, &s);
                    (g.t_min(), xn / an)
                })
                .collect();
            let finite = ratios.iter().all(|r| r.1.is_finite() && r.1 > 0.0);
            MemberTrend {
                label: m.label.clone(),
                in_orlicz,
                verdict: if finite { classify(&ratios) } else { Verdict::Inconclusive },
                ratios,
            }
        })
        .collect();

    let witness = members
        .iter()
        .filter(|m| m.in_orlicz == Some(true) && m.verdict == Verdict::Diverging)
        .max_by(|x, y| {
            let last = |m: &MemberTrend| m.ratios.last().map(|r| r.1).unwrap_or(0.0);
            last(x).total_cmp(&last(y))
        })
        .map(|m| m.label.clone());
    let best_ratio_trend: Vec<(f64, f64)> = (0..grids.len())
        .map(|k| {
            let best = members
                .iter()
                .map(|m| m.ratios[k].1)
                .filter(|r| r.is_finite())
                .fold(0.0, f64::max);
            (grids[k].t_min(), best)
        })
        .collect();
    let lo = best_ratio_trend.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = best_ratio_trend.iter().map(|p| p.1).fold(0.0, f64::max);
    let any_member_diverging = members
        .iter()
        .any(|m| m.in_orlicz == Some(true) && m.verdict == Verdict::Diverging);
    let decision = if witness.is_some() {
        Decision::NoLargestOrlicz
    } else if !any_member_diverging && lo > 0.0 && (hi - lo) / lo <= FLAT_SPREAD {
        Decision::LargestOrliczExists
    } else {
        Decision::Undecided
    };
    Ok(AlternativeReport {
        decision,
        orlicz: a.asymptote(),
        witness,
        best_ratio_trend,
        inconclusive: decision == Decision::Undecided,
        members,
    })
}

/// Result of transferring a decision for `M(Y)` to every space on the level
/// of `y_level`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    pub level: String,
    pub decision: Decision,
    pub witness: Option<String>,
}

/// Nonexistence of a largest Orlicz domain for `M(Y)` carries over to every
/// `Y` with the same fundamental function; nothing else does.
pub fn thm35_transfer(y_level: &FundamentalFn, marcinkiewicz_result: &AlternativeReport) -> TransferReport {
    let (decision, witness) = match marcinkiewicz_result.decision {
        Decision::NoLargestOrlicz => (Decision::NoLargestOrlicz, marcinkiewicz_result.witness.clone()),
        _ => (Decision::Undecided, None),
    };
    TransferReport {
        level: y_level.label(),
        decision,
        witness,
    }
}
