use proptest::prelude::*;

use rispace::operators::{copson_at, copson_steps, dilate_steps, sup_op};
use rispace::rearrange::{check_hl_steps, rearrange_steps};
use rispace::spaces::{fundamental_on, luxemburg_steps, norm_star};
use rispace::{make_log_grid, Func, Grid, SpaceSpec, StepFn, YoungFn};

fn steps(signed: bool) -> impl Strategy<Value = StepFn> {
    let lo = if signed { -5.0 } else { 0.0 };
    prop::collection::vec((1e-9f64..1.0, lo..5.0f64), 1..12).prop_map(|cells| {
        let mut ends: Vec<f64> = cells.iter().map(|c| c.0).collect();
        ends.sort_by(f64::total_cmp);
        ends.dedup();
        *ends.last_mut().unwrap() = 1.0;
        let values = cells.iter().take(ends.len()).map(|c| c.1).collect();
        StepFn::new(ends, values).unwrap()
    })
}

fn grid() -> Grid {
    make_log_grid(1e-12, 8).unwrap()
}

fn specs() -> Vec<SpaceSpec> {
    vec![
        SpaceSpec::Lebesgue(1.0),
        SpaceSpec::Lebesgue(3.0),
        SpaceSpec::Lebesgue(f64::INFINITY),
        SpaceSpec::Lorentz { p: 2.0, q: 1.0 },
        SpaceSpec::LorentzZygmund { p: f64::INFINITY, q: 2.0, zeta: -1.0 },
        SpaceSpec::exp_l(2.0).unwrap(),
        SpaceSpec::l_log_l(2.0, -1.0).unwrap(),
    ]
}

fn close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rearrangement_is_equimeasurable(f in steps(true), p in 0.5f64..4.0) {
        let r = rearrange_steps(&f);
        prop_assert!(r.star().is_nonincreasing());
        let lhs: f64 = (0..f.len()).map(|j| f.values()[j].abs().powf(p) * f.measure(j)).sum();
        let s = r.star();
        let rhs: f64 = (0..s.len()).map(|j| s.values()[j].powf(p) * s.measure(j)).sum();
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn maximal_dominates_rearrangement(f in steps(true), t in 1e-6f64..1.0) {
        let r = rearrange_steps(&f);
        prop_assert!(r.maximal(t) >= r.star().eval(t) * (1.0 - 1e-12));
    }

    #[test]
    fn hardy_littlewood(f in steps(true), g in steps(true)) {
        let hl = check_hl_steps(&f, &g);
        prop_assert!(hl.lhs <= hl.rhs * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn norms_are_homogeneous(f in steps(true), c in -10.0f64..10.0) {
        let grid = grid();
        for s in specs() {
            let a = norm_star(&s, &Func::Step(f.clone()).star(&grid), &grid);
            let b = norm_star(&s, &Func::Step(f.scale(c)).star(&grid), &grid);
            prop_assert!(close(b, c.abs() * a, 1e-9), "{s}: {b} vs {}", c.abs() * a);
        }
    }

    #[test]
    fn luxemburg_is_subadditive(f in steps(true), g in steps(true), p in 1.0f64..4.0) {
        let a = YoungFn::power_log(p, 1.0).unwrap();
        let sum = luxemburg_steps(&a, &f.add(&g));
        prop_assert!(sum <= (luxemburg_steps(&a, &f) + luxemburg_steps(&a, &g)) * (1.0 + 1e-9));
    }

    #[test]
    fn copson_is_linear(f in steps(false), g in steps(false), gamma in 0.05f64..0.95) {
        let grid = grid();
        let h = f.add(&g);
        for &t in grid.nodes() {
            let lhs = copson_at(gamma, &h, t);
            prop_assert!(close(lhs, copson_at(gamma, &f, t) + copson_at(gamma, &g, t), 1e-9));
        }
    }

    #[test]
    fn copson_of_nonnegative_is_nonincreasing(f in steps(false), gamma in 0.05f64..0.95) {
        let out = copson_steps(gamma, &f, &grid());
        prop_assert!(out.values().windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }

    #[test]
    fn dilation_bound(f in steps(true), lambda in 0.05f64..8.0) {
        let grid = grid();
        let bound = lambda.max(1.0);
        let e = dilate_steps(lambda, &f);
        for s in specs() {
            let nf = norm_star(&s, &Func::Step(f.clone()).star(&grid), &grid);
            let ne = norm_star(&s, &Func::Step(e.clone()).star(&grid), &grid);
            prop_assert!(ne <= bound * nf * (1.0 + 1e-9), "{s}: {ne} vs {}", bound * nf);
        }
    }

    #[test]
    fn sup_operator_is_idempotent(g in steps(false), gamma in 0.05f64..0.95) {
        let grid = grid();
        let once = sup_op(gamma, &Func::Step(g.clone()), &grid);
        let twice = sup_op(gamma, &Func::Grid(once.clone()), &grid);
        for (a, b) in once.values().iter().zip(twice.values()) {
            prop_assert!(close(*a, *b, 1e-9), "{a} vs {b}");
        }
    }

    #[test]
    fn lorentz_fundamental_is_quasiconcave(p in 1.1f64..8.0, q in 1.0f64..8.0) {
        let grid = grid();
        let phi = fundamental_on(&SpaceSpec::Lorentz { p, q }, &grid).unwrap();
        prop_assert!(phi.is_quasiconcave(&grid));
    }
}
