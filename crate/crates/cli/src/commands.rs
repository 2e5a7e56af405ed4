use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use rispace::mazya::{cond32_check, eta_profile, geometric_bound_margin, model_profile, omega_volume, psi, thm31_sandwich, MazyaParams};
use rispace::operators::{op_norm_estimate, witness_member, CopsonOp, Operator, TestFamily};
use rispace::optimality::{optimal_target_norm, reduction_check, thm38_pipeline, witness_curve, EmbeddingProblem, NonexistenceVerdict, SLOPE_WINDOW};
use rispace::rearrange::rearrangement;
use rispace::spaces::{fundamental_on, norm_on, parse_real};
use rispace::trend::Verdict;
use rispace::{make_log_grid, Error, Func, FundamentalFn, Grid, GridFn, PowLogFn, Result, SpaceSpec, StepFn};

use crate::table::Table;
use crate::{Command, OpKind};

pub struct Outcome {
    pub report: Value,
    pub table: Option<Table>,
    /// Plain output used when no format is requested.
    pub text: Option<String>,
    pub inconclusive: bool,
}

impl Outcome {
    fn new(report: impl Serialize, table: Table, inconclusive: bool) -> Result<Self> {
        Ok(Outcome {
            report: to_value(report)?,
            table: Some(table),
            text: None,
            inconclusive,
        })
    }
}

fn to_value(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Parameter(format!("report serialization failed: {e}")))
}

fn parse_func(text: &str) -> Result<Func> {
    match text.trim().strip_prefix('@') {
        Some(path) => {
            let file = std::fs::File::open(path)
                .map_err(|e| Error::Parse { token: path.into(), rule: format!("readable CSV file ({e})") })?;
            Ok(Func::Grid(GridFn::read_csv(file)?))
        }
        None => Ok(Func::PowLog(text.parse::<PowLogFn>()?)),
    }
}

fn parse_space(text: &str) -> Result<SpaceSpec> {
    let s = SpaceSpec::parse(text)?;
    s.require_valid()?;
    Ok(s)
}

fn family(random: usize, seed: u64) -> TestFamily {
    TestFamily::standard(random, seed)
}

pub fn run(cmd: &Command, grid: &Grid, seed: u64) -> Result<Outcome> {
    let ppd = grid.points_per_decade();
    match cmd {
        Command::Norm { space, func } => {
            let s = parse_space(space)?;
            let f = parse_func(func)?;
            let value = norm_on(&s, &f, grid)?;
            Ok(Outcome {
                report: json!({ "space": s.to_string(), "fn": func, "value": value }),
                table: None,
                text: Some(format!("{value:?}\n")),
                inconclusive: false,
            })
        }
        Command::Rearrange { func } => {
            let f = parse_func(func)?;
            let r = rearrangement(&f, grid);
            let (star, maximal) = (r.star_on(grid), r.maximal_on(grid));
            let mut table = Table::new(&["star", "maximal"]);
            let mut samples = Vec::with_capacity(grid.len());
            for (i, &t) in grid.nodes().iter().enumerate() {
                let (s, m) = (star.values()[i], maximal.values()[i]);
                table.push(t, &[s, m]);
                samples.push(json!({ "t": t, "star": s, "maximal": m }));
            }
            Outcome::new(json!({ "fn": func, "samples": samples }), table, false)
        }
        Command::Fundamental { space } => {
            let s = parse_space(space)?;
            let phi = fundamental_on(&s, grid)?;
            let samples = phi.samples(grid);
            let mut table = Table::new(&["phi", "majorant"]);
            for p in &samples {
                table.push(p.t, &[p.phi, p.majorant]);
            }
            let report = json!({
                "space": s.to_string(),
                "label": phi.label(),
                "quasiconcave": phi.is_quasiconcave(grid),
                "samples": samples,
            });
            Outcome::new(report, table, false)
        }
        Command::Embed { m, alpha, domain, target, beta, random } => {
            let p = EmbeddingProblem::new(*m, *alpha, parse_space(domain)?, parse_space(target)?)?;
            let mut fam = family(*random, seed);
            if let Some(b) = beta {
                fam.push(witness_member(p.gamma(), *b));
            }
            let r = reduction_check(&p, &fam, ppd)?;
            let table = trend_table(&r.refinement_trend);
            let report = json!({
                "m": m,
                "alpha": alpha,
                "gamma": p.gamma(),
                "domain": p.domain.to_string(),
                "target": p.target.to_string(),
                "estimate": r,
            });
            Outcome::new(report, table, r.verdict == Verdict::Inconclusive)
        }
        Command::Opnorm { op, domain, target, m, alpha, gamma, lambda, random } => {
            let operator = match op {
                OpKind::Copson => {
                    let (m, a) = m.zip(*alpha).ok_or_else(|| Error::Parameter("copson needs --m and --alpha".into()))?;
                    Operator::Copson(CopsonOp::new(m, a)?)
                }
                OpKind::Sup => {
                    let g = match (gamma, m.zip(*alpha)) {
                        (Some(g), _) => *g,
                        (None, Some((m, a))) => m as f64 * (1.0 - a),
                        _ => return Err(Error::Parameter("sup needs --gamma, or --m and --alpha".into())),
                    };
                    if !(g > 0.0 && g < 1.0) {
                        return Err(Error::Parameter(format!("gamma = {g} outside (0, 1)")));
                    }
                    Operator::Sup { gamma: g }
                }
                OpKind::Dilate => {
                    let l = lambda.ok_or_else(|| Error::Parameter("dilate needs --lambda".into()))?;
                    if !(l > 0.0 && l.is_finite()) {
                        return Err(Error::Parameter(format!("lambda = {l} must be positive")));
                    }
                    Operator::Dilate { lambda: l }
                }
            };
            let r = op_norm_estimate(&operator, &parse_space(domain)?, &parse_space(target)?, &family(*random, seed), ppd)?;
            let table = trend_table(&r.refinement_trend);
            let report = json!({ "operator": operator, "domain": domain, "target": target, "estimate": r });
            Outcome::new(report, table, r.verdict == Verdict::Inconclusive)
        }
        Command::Mazya { n, alpha, m, points } => {
            let p = MazyaParams::new(*n, *alpha, *m)?;
            let profile = eta_profile(&p, *points);
            let mut table = Table::new(&["eta"]);
            for &(t, e) in &profile {
                table.push(t, &[e]);
            }
            let report = json!({
                "n": n,
                "alpha": alpha,
                "m": m,
                "n_prime": p.n_prime(),
                "omega": p.omega(),
                "length": p.length(),
                "volume": omega_volume(&p),
                "profile": profile,
            });
            Outcome::new(report, table, false)
        }
        Command::Thm31 { phi_y, alpha } => {
            let phi = FundamentalFn::from_powlog(phi_y.parse::<PowLogFn>()?)?;
            let iso = model_profile(*alpha)?;
            let s = thm31_sandwich(&phi, &iso, grid)?;
            let ps = psi(*alpha, &phi, grid)?;
            let margin = geometric_bound_margin(*alpha, &ps.sup_form, grid, 0.5);
            let cond = cond32_check(&phi, &iso, ppd)?;
            let violation = s.first_violation(0.0).map(|i| s.t[i]);
            let mut table = Table::new(&["lower", "phi_x", "upper", "psi"]);
            for i in 0..s.t.len() {
                table.push(s.t[i], &[s.lower[i], s.phi_x[i], s.upper[i], ps.sup_form[i]]);
            }
            let report = json!({
                "phi_y": phi.label(),
                "alpha": alpha,
                "sandwich_violation": violation,
                "psi_max_rel_diff": ps.max_rel_diff,
                "geometric_margin": margin,
                "condition": cond,
                "sandwich": s,
            });
            let inconclusive = violation.is_some() || margin < 0.0 || cond.verdict == Verdict::Inconclusive;
            Outcome::new(report, table, inconclusive)
        }
        Command::Witness { m, alpha, q, beta, .. } => {
            let r = thm38_pipeline(*m, *alpha, parse_real(q)?, *beta, ppd)?;
            let gamma = *m as f64 * (1.0 - alpha);
            let curve_grid = make_log_grid(SLOPE_WINDOW.0, ppd)?;
            let curve = witness_curve(gamma, r.beta, &curve_grid, SLOPE_WINDOW.0, SLOPE_WINDOW.1);
            let mut report = to_value(&r)?;
            report["curve"] = to_value(&curve)?;
            let table = witness_table(&report);
            Ok(Outcome {
                report,
                table: Some(table),
                text: None,
                inconclusive: r.verdict == NonexistenceVerdict::Inconclusive,
            })
        }
        Command::Report { m, alpha, q } => {
            let gamma = *m as f64 * (1.0 - alpha);
            if !(0.5..1.0).contains(alpha) || !(gamma > 0.0 && gamma < 1.0) {
                return Err(Error::Parameter(format!(
                    "need alpha in [1/2, 1) and 0 < m(1-alpha) < 1, got alpha = {alpha}, m = {m}"
                )));
            }
            let qs: Vec<String> = if q.is_empty() {
                vec!["1".into(), format!("{}", 1.0 / gamma), "inf".into()]
            } else {
                q.clone()
            };
            let rows: Vec<Value> = qs.par_iter().map(|q| report_row(*m, *alpha, q, grid)).collect();
            let failed = rows.iter().any(|r| r["verified"] != Value::Bool(true));
            let mut table = Table::summary(&["q", "domain", "target", "phi_ratio_min", "phi_ratio_max", "verified"]);
            for r in &rows {
                let field = |k: &str| match &r[k] {
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    v => v.to_string(),
                };
                table.push_raw(vec![
                    field("q"),
                    field("domain"),
                    field("target"),
                    r["phi_ratio"][0].to_string(),
                    r["phi_ratio"][1].to_string(),
                    field("verified"),
                ]);
            }
            Outcome::new(json!({ "m": m, "alpha": alpha, "gamma": gamma, "rows": rows }), table, failed)
        }
    }
}

fn trend_table(trend: &[(f64, f64)]) -> Table {
    let mut table = Table::new(&["best_ratio"]);
    for &(t, r) in trend {
        table.push(t, &[r]);
    }
    table
}

/// `(t, u, S)` rows from the `curve` field of a witness report.
pub fn witness_table(report: &Value) -> Table {
    let mut table = Table::new(&["S"]);
    for point in report["curve"].as_array().into_iter().flatten() {
        if let (Some(t), Some(s)) = (point[0].as_f64(), point[1].as_f64()) {
            table.push(t, &[s]);
        }
    }
    table
}

/// Optimal target for the domain `L^{1/γ, q}`, checked through the
/// fundamental function of its associate space.
fn target_level(gamma: f64, q: f64) -> SpaceSpec {
    if q <= 1.0 {
        SpaceSpec::Lebesgue(f64::INFINITY)
    } else if q.is_infinite() {
        SpaceSpec::Orlicz(rispace::YoungFn::exponential(1.0 / (1.0 - gamma)).expect("positive exponent"))
    } else {
        SpaceSpec::LorentzZygmund { p: f64::INFINITY, q, zeta: gamma - 1.0 - 1.0 / q }
    }
}

fn report_row(m: u32, alpha: f64, q_text: &str, grid: &Grid) -> Value {
    let gamma = m as f64 * (1.0 - alpha);
    let row = || -> Result<Value> {
        let q = parse_real(q_text)?;
        let domain = SpaceSpec::Lorentz { p: 1.0 / gamma, q };
        let target = target_level(gamma, q);
        let p = EmbeddingProblem::new(m, alpha, domain, target.clone())?;
        let phi_y = fundamental_on(&target, grid)?;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for &a in grid.nodes().iter().step_by(4).filter(|&&a| a <= 0.5) {
            let assoc = optimal_target_norm(&p, &Func::Step(StepFn::indicator(a, 1.0)), grid)?;
            let r = assoc * phi_y.eval(a) / a;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        Ok(json!({
            "q": q_text,
            "domain": p.domain.to_string(),
            "target": target.to_string(),
            "phi_ratio": [lo, hi],
            "verified": lo > 0.0 && hi / lo <= 20.0,
        }))
    };
    row().unwrap_or_else(|e| json!({ "q": q_text, "error": e.to_string(), "verified": false }))
}
