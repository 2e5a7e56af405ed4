use rispace::mazya::{
    cond32_check, eta_profile, model_profile, omega_volume, psi, thm31_phi, thm31_sandwich, IsoProfile,
    MazyaParams,
};
use rispace::trend::Verdict;
use rispace::{default_grid, Func, FundamentalFn, PowLogFn};

#[test]
fn volumes_are_normalized() {
    for n in 2..=5 {
        let p = MazyaParams::new(n, 1.0 - 1.0 / n as f64, 1).unwrap();
        assert!((omega_volume(&p) - 1.0).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn profile_vanishes_at_length() {
    let p = MazyaParams::new(3, 0.8, 1).unwrap();
    let prof = eta_profile(&p, 50);
    assert!(prof.windows(2).all(|w| w[1].1 <= w[0].1));
    assert!(prof.last().unwrap().1.abs() < 1e-12);
}

#[test]
fn lorentz_level_is_preserved() {
    // φ_Y = t^{1/2} with I = t^{1/2}: φ_X = ∫_0^t s^{1/2} s^{-1/2} ds = t, and
    // the lower estimate is (√2 − 1) t.
    let grid = default_grid();
    let phi_y = FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.5, 0.0)).unwrap();
    let iso = model_profile(0.5).unwrap();
    let phi_x = thm31_phi(&phi_y, &iso, grid).unwrap();
    for &t in grid.nodes().iter().step_by(64) {
        assert!((phi_x.eval(t) / t - (2f64.sqrt() - 1.0)).abs() < 1e-9, "t = {t}");
    }
    let s = thm31_sandwich(&phi_y, &iso, grid).unwrap();
    assert_eq!(s.first_violation(0.0), None);
    for (t, v) in s.t.iter().zip(&s.phi_x) {
        assert!((v / t - 1.0).abs() < 1e-9, "t = {t}");
    }
}

#[test]
fn profile_rejects_decreasing() {
    assert!(IsoProfile::new(Func::PowLog(PowLogFn::atom(1.0, -0.5, 0.0))).is_err());
}

#[test]
fn condition_holds_for_subcritical_level() {
    let phi_y = FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.25, 0.0)).unwrap();
    let r = cond32_check(&phi_y, &model_profile(0.5).unwrap(), 16).unwrap();
    assert!(r.holds);
    assert_eq!(r.verdict, Verdict::Bounded);
}

#[test]
fn psi_forms_agree_on_log_level() {
    let phi_y = FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.0, -1.0)).unwrap();
    let r = psi(0.75, &phi_y, default_grid()).unwrap();
    assert!(r.max_rel_diff < 1e-9);
}
