//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rispace::funcrep::log2t;
use rispace::mazya::{
    eta, geometric_bound_margin, model_profile, omega_volume, psi, thm31_sandwich, MazyaParams,
};
use rispace::operators::{dilate_steps, lemma37_condition, TestFamily, DEFAULT_SEED, REFINEMENT_T_MINS};
use rispace::optimality::{
    lemma36_check, optimal_domain_norm, principal_alternative, thm38_pipeline, witness_curve, Decision,
    EmbeddingProblem, SLOPE_WINDOW,
};
use rispace::rearrange::{check_hl_steps, rearrange_steps};
use rispace::spaces::{fundamental, fundamental_on, luxemburg_steps, norm_on, norm_star, orlicz_membership};
use rispace::trend::ols_slope;
use rispace::{default_grid, Func, FundamentalFn, PowLogFn, SpaceSpec, StepFn, YoungFn};

fn verdict(n: u32, name: &str, ok: bool, detail: &str) {
    println!("criterion {n} ({name}): {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn random_steps(rng: &mut ChaCha8Rng, signed: bool) -> StepFn {
    let k = rng.random_range(1..=12);
    let mut ends: Vec<f64> = (0..k - 1).map(|_| rng.random_range(0.0..1.0)).collect();
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    ends.retain(|&e| e > 0.0);
    ends.push(1.0);
    let values = ends
        .iter()
        .map(|_| {
            let v = if rng.random_bool(0.2) {
                rng.random_range(0..4) as f64
            } else {
                rng.random_range(0.0..5.0)
            };
            if signed && rng.random_bool(0.5) {
                -v
            } else {
                v
            }
        })
        .collect();
    StepFn::new(ends, values).unwrap()
}

/// Cells sorted by value, equal values merged, measures accumulated in
/// sorted order.
fn sort_by_measure(f: &StepFn) -> (Vec<f64>, Vec<f64>) {
    let mut cells: Vec<(f64, f64)> = (0..f.len()).map(|j| (f.values()[j].abs(), f.measure(j))).collect();
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (mut ends, mut vals): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let mut acc = 0.0;
    for (v, m) in cells {
        acc += m;
        if vals.last() == Some(&v) {
            *ends.last_mut().unwrap() = acc;
        } else {
            vals.push(v);
            ends.push(acc);
        }
    }
    *ends.last_mut().unwrap() = 1.0;
    (ends, vals)
}

#[test]
fn criterion_1_rearrangement_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let f = random_steps(&mut rng, true);
        let (ends, vals) = sort_by_measure(&f);
        let r = rearrange_steps(&f);
        if r.star().ends() != ends.as_slice() || r.star().values() != vals.as_slice() {
            mismatches += 1;
        }
    }
    let mut violations = 0;
    for _ in 0..1000 {
        let f = random_steps(&mut rng, true);
        let g = random_steps(&mut rng, true);
        let hl = check_hl_steps(&f, &g);
        if hl.lhs > hl.rhs * (1.0 + 1e-9) {
            violations += 1;
        }
    }
    verdict(
        1,
        "rearrangement oracle",
        mismatches == 0 && violations == 0,
        &format!("{mismatches} rearrangement mismatches, {violations} Hardy-Littlewood violations"),
    );
}

#[test]
fn criterion_2_luxemburg_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for p in [1.0, 1.5, 2.0, 4.0] {
        let a = YoungFn::power(p).unwrap();
        for _ in 0..100 {
            let f = random_steps(&mut rng, true);
            let lp = (0..f.len())
                .map(|j| f.values()[j].abs().powf(p) * f.measure(j))
                .sum::<f64>()
                .powf(1.0 / p);
            let lux = luxemburg_steps(&a, &f);
            if lp > 0.0 {
                worst = worst.max((lux - lp).abs() / lp);
            }
        }
    }
    let grid = default_grid();
    let mut worst_fund: f64 = 0.0;
    let youngs = [
        YoungFn::power(3.0).unwrap(),
        YoungFn::power_log(2.0, -1.0).unwrap(),
        YoungFn::power_log(1.5, 1.0).unwrap(),
        YoungFn::exponential(2.0).unwrap(),
        YoungFn::exponential(0.5).unwrap(),
    ];
    for a in youngs {
        let phi = fundamental_on(&SpaceSpec::Orlicz(a.clone()), grid).unwrap();
        for &t in grid.nodes() {
            worst_fund = worst_fund.max((phi.eval(t) * a.inverse(1.0 / t) - 1.0).abs());
        }
    }
    verdict(
        2,
        "Luxemburg consistency",
        worst <= 1e-8 && worst_fund <= 1e-6,
        &format!("max L^p relative error {worst:.2e}, max |phi*A^-1(1/t) - 1| {worst_fund:.2e}"),
    );
}

#[test]
fn criterion_3_model_domain_geometry() {
    let mut worst: f64 = 0.0;
    for (n, a) in [(2, 0.5), (2, 0.9), (3, 2.0 / 3.0), (3, 0.75), (4, 0.75)] {
        let p = MazyaParams::new(n, a, 1).unwrap();
        worst = worst.max((omega_volume(&p) - 1.0).abs());
    }
    let p = MazyaParams::new(2, 0.5, 1).unwrap();
    let mut profile_err: f64 = 0.0;
    for i in 0..=1000 {
        let t = 2.0 * i as f64 / 1000.0;
        profile_err = profile_err.max((eta(&p, t).unwrap() - 0.5 * (1.0 - 0.5 * t)).abs());
    }
    verdict(
        3,
        "model domain geometry",
        worst <= 1e-6 && profile_err <= 4.0 * f64::EPSILON,
        &format!("max |volume - 1| {worst:.2e}, max triangle profile error {profile_err:.2e}"),
    );
}

#[test]
fn criterion_4_fundamental_sandwich() {
    let grid = default_grid();
    let phis = [
        PowLogFn::atom(1.0, 0.0, -0.5),
        PowLogFn::atom(1.0, 0.25, 0.0),
        PowLogFn::atom(1.0, 0.5, -1.0),
    ];
    let mut failures = Vec::new();
    let mut worst_psi: f64 = 0.0;
    let mut worst_margin = f64::INFINITY;
    for phi in &phis {
        let phi_y = FundamentalFn::from_powlog(phi.clone()).unwrap();
        for alpha in [0.5, 2.0 / 3.0, 0.9] {
            let iso = model_profile(alpha).unwrap();
            let s = thm31_sandwich(&phi_y, &iso, grid).unwrap();
            if let Some(i) = s.first_violation(0.0) {
                failures.push(format!("{phi} alpha={alpha:.3} t={:.3e}", s.t[i]));
            }
            let r = psi(alpha, &phi_y, grid).unwrap();
            worst_psi = worst_psi.max(r.max_rel_diff);
            worst_margin = worst_margin.min(geometric_bound_margin(alpha, &r.sup_form, grid, 0.5));
        }
    }
    verdict(
        4,
        "fundamental function sandwich",
        failures.is_empty() && worst_psi <= 1e-9 && worst_margin >= 0.0,
        &format!(
            "sandwich violations {failures:?}, max psi form difference {worst_psi:.2e}, min geometric margin {worst_margin:.3}"
        ),
    );
}

#[test]
fn criterion_5_domain_fundamental_function() {
    let grid = default_grid();
    let p = EmbeddingProblem::new(1, 0.5, SpaceSpec::Lebesgue(1.0), SpaceSpec::exp_l(2.0).unwrap()).unwrap();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &a in grid.nodes().iter().filter(|&&a| (1e-10..=0.5).contains(&a)) {
        let v = optimal_domain_norm(&p, &Func::Step(StepFn::indicator(a, 1.0)), grid).unwrap();
        let r = v / (a.sqrt() / log2t(a).sqrt());
        lo = lo.min(r);
        hi = hi.max(r);
    }
    verdict(
        5,
        "domain fundamental function",
        hi / lo <= 20.0,
        &format!("ratio range [{lo:.4}, {hi:.4}], max/min {:.4}", hi / lo),
    );
}

#[test]
fn criterion_6_witness_divergence() {
    let grid = default_grid();
    let mut worst: f64 = 0.0;
    let mut misses = Vec::new();
    let mut membership_errors = Vec::new();
    for alpha in [0.5, 2.0 / 3.0, 0.9] {
        let gamma = 1.0 - alpha;
        let (blo, bhi) = (-gamma, 1.0 - 2.0 * gamma);
        let young = rispace::spaces::fundamental_orlicz(
            &FundamentalFn::from_powlog(PowLogFn::atom(1.0, gamma, gamma - 1.0)).unwrap(),
        )
        .unwrap();
        for k in 1..=3 {
            let beta = blo + (bhi - blo) * k as f64 / 4.0;
            let curve = witness_curve(gamma, beta, grid, SLOPE_WINDOW.0, SLOPE_WINDOW.1);
            let pts: Vec<(f64, f64)> = curve.iter().map(|&(t, s)| (log2t(t).ln(), s.ln())).collect();
            let slope = ols_slope(&pts);
            let want = beta + gamma;
            let rel = (slope - want).abs() / want;
            worst = worst.max(rel);
            if rel > 0.1 {
                misses.push(format!("alpha={alpha:.3} beta={beta:.4}: slope {slope:.4} vs {want:.4}"));
            }
            let w = Func::PowLog(PowLogFn::atom(1.0, -gamma, beta));
            if orlicz_membership(&young, &w, grid).member != Some(true) {
                membership_errors.push(format!("alpha={alpha:.3} beta={beta:.4} not a member"));
            }
        }
        let beta = bhi + 0.05;
        let w = Func::PowLog(PowLogFn::atom(1.0, -gamma, beta));
        if orlicz_membership(&young, &w, grid).member != Some(false) {
            membership_errors.push(format!("alpha={alpha:.3} beta={beta:.4} reported a member"));
        }
    }
    verdict(
        6,
        "witness divergence",
        misses.is_empty() && membership_errors.is_empty(),
        &format!("max relative slope error {worst:.3}; slope misses {misses:?}; membership errors {membership_errors:?}"),
    );
}

fn decisions_over_windows(
    phi_x: &FundamentalFn,
    x_norm: &(dyn Fn(&Func, &rispace::Grid) -> f64 + Sync),
    family: &TestFamily,
) -> Vec<Decision> {
    let windows: [&[f64]; 2] = [&REFINEMENT_T_MINS[..2], &REFINEMENT_T_MINS[..]];
    windows
        .iter()
        .map(|w| principal_alternative(phi_x, x_norm, family, w, 64).unwrap().decision)
        .collect()
}

#[test]
fn criterion_7_principal_alternative() {
    let p = EmbeddingProblem::new(1, 0.5, SpaceSpec::Lebesgue(1.0), SpaceSpec::exp_l(2.0).unwrap()).unwrap();
    let phi_x = FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.5, -0.5)).unwrap();
    let x_norm = |f: &Func, g: &rispace::Grid| optimal_domain_norm(&p, f, g).unwrap();
    let fam = TestFamily::with_witness(0.5, -0.25);
    let limiting = decisions_over_windows(&phi_x, &x_norm, &fam);

    let lor = SpaceSpec::Lorentz { p: 4.0 / 3.0, q: 4.0 };
    let phi_l = fundamental(&lor).unwrap();
    let l_norm = |f: &Func, g: &rispace::Grid| norm_on(&lor, f, g).unwrap();
    let classical = decisions_over_windows(&phi_l, &l_norm, &TestFamily::standard(100, DEFAULT_SEED));

    let ok = limiting.iter().all(|d| *d == Decision::NoLargestOrlicz)
        && classical.iter().all(|d| *d == Decision::LargestOrliczExists);
    verdict(
        7,
        "principal alternative",
        ok,
        &format!("exp L level {limiting:?}; Lor:4/3,4 level {classical:?}"),
    );
}

fn spec_matrix() -> Vec<SpaceSpec> {
    let inf = f64::INFINITY;
    vec![
        SpaceSpec::Lebesgue(1.0),
        SpaceSpec::Lebesgue(2.0),
        SpaceSpec::Lebesgue(inf),
        SpaceSpec::Lorentz { p: 2.0, q: 1.0 },
        SpaceSpec::Lorentz { p: 4.0 / 3.0, q: 4.0 },
        SpaceSpec::LorentzZygmund { p: 1.0, q: 1.0, zeta: 0.5 },
        SpaceSpec::LorentzZygmund { p: inf, q: 2.0, zeta: -1.0 },
        SpaceSpec::LorentzZygmund { p: inf, q: inf, zeta: -0.5 },
        SpaceSpec::exp_l(2.0).unwrap(),
        SpaceSpec::l_log_l(2.0, -1.0).unwrap(),
        SpaceSpec::Lambda(FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.5, -0.5)).unwrap()),
        SpaceSpec::Marcinkiewicz(FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.0, -0.5)).unwrap()),
    ]
}

#[test]
fn criterion_8_operator_certificates() {
    let mut notes = Vec::new();
    let mut ok = true;

    for gamma in [0.1, 0.5, 0.9] {
        let r = lemma37_condition(gamma, 64).unwrap();
        let (lo, hi) = r
            .refinement
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
        let flat = (hi - lo) / lo <= 0.1;
        ok &= flat && r.holds;
        notes.push(format!("T_{gamma} ratio spread {:.4}", (hi - lo) / lo));
    }

    let grid = default_grid();
    let fam = TestFamily::standard(100, DEFAULT_SEED);
    let steps: Vec<(String, StepFn)> = fam
        .members()
        .iter()
        .map(|m| (m.label.clone(), m.f.to_steps(grid)))
        .collect();
    for lambda in [0.125, 0.5, 2.0] {
        let bound = 1.0f64.max(1.0 / lambda);
        let mut worst: f64 = 0.0;
        let mut worst_at = String::new();
        for s in spec_matrix() {
            for (label, f) in &steps {
                let nf = norm_star(&s, &Func::Step(f.clone()).star(grid), grid);
                let ne = norm_star(&s, &Func::Step(dilate_steps(lambda, f)).star(grid), grid);
                if nf > 0.0 && nf.is_finite() && ne / nf > worst {
                    worst = ne / nf;
                    worst_at = format!("{s} on {label}");
                }
            }
        }
        let holds = worst <= bound * (1.0 + 1e-6);
        ok &= holds;
        notes.push(format!("E_{lambda}: worst ratio {worst:.4} vs bound {bound} ({worst_at})"));
    }

    let specs36 = [
        SpaceSpec::Lebesgue(1.0),
        SpaceSpec::Lebesgue(f64::INFINITY),
        SpaceSpec::Lorentz { p: 2.0, q: 1.0 },
        SpaceSpec::LorentzZygmund { p: f64::INFINITY, q: 2.0, zeta: -1.0 },
        SpaceSpec::exp_l(2.0).unwrap(),
        SpaceSpec::l_log_l(2.0, -1.0).unwrap(),
    ];
    let mut bad36 = Vec::new();
    for zeta in [0.5, 1.0, 2.0] {
        for a in [1e-8, 1e-3, 0.4] {
            for s in &specs36 {
                let r = lemma36_check(zeta, a, s, grid).unwrap();
                if !r.holds {
                    bad36.push(format!("zeta={zeta} a={a} {s}: {:.4}", r.ratio));
                }
            }
        }
    }
    ok &= bad36.is_empty();
    notes.push(format!("characteristic-function lemma violations {bad36:?}"));
    verdict(8, "operator certificates", ok, &notes.join("; "));
}

#[test]
fn nonexistence_pipeline_half() {
    let r = thm38_pipeline(1, 0.5, 2.0, Some(-0.25), 64).unwrap();
    println!(
        "pipeline m=1 alpha=1/2: verdict {:?}, tail slope {:.4}, raw slope {:.4}, phi_X ratio {:?}",
        r.verdict, r.divergence_slope, r.raw_slope, r.phi_x_ratio
    );
    assert!(r.membership);
}
