use cxcoulomb_core::analytic::{
    build_eigenfunction, coupled_closure_with, default_samples, laguerre, ode_residual, ClosureGrid,
};
use cxcoulomb_core::qnum::{effective_params, gamma, Channel, Couplings, PrincipalState};
use cxcoulomb_core::spectra::{
    energy_case1, energy_case2, energy_case3, energy_general, energy_kg, Branch, KgCase,
};
use cxcoulomb_core::transform::{constraint_residuals, solve_theta};
use cxcoulomb_core::{Complex, Model};
use proptest::prelude::*;

fn channel() -> impl Strategy<Value = Channel> {
    (0u32..5, prop::bool::ANY).prop_map(|(k, up)| Channel::new(2 * k + 1, if up { 1 } else { -1 }).unwrap())
}

fn state(ch: &Channel, extra: u32) -> PrincipalState {
    PrincipalState::new(ch.l() + 1 + extra, ch).unwrap()
}

proptest! {
    #[test]
    fn boost_identities(ch in channel(), a1 in 0.0..2.0f64, a2 in 0.0..2.0f64) {
        let c = Couplings::new(a1, a2).unwrap();
        prop_assume!(gamma(&ch, &c).is_ok());
        let g = gamma(&ch, &c).unwrap();
        let p = solve_theta(&ch, &c, g);
        prop_assert!((p.hyperbolic_norm() - 1.0).norm() < 1e-12);
        prop_assert!((p.a * p.a - p.b * p.b - 1.0).norm() < 1e-12);
        let (r1, r2) = constraint_residuals(&p, &ch, &c, g);
        prop_assert!(r1.norm() < 1e-12 && r2.norm() < 1e-12);
        let st = state(&ch, 0);
        let e = effective_params(Model::Dirac, &ch, &st, &c).unwrap();
        let w = f64::from(ch.omega());
        prop_assert!((e.centrifugal() - (g * g + w * g)).abs() < 1e-12 * (1.0 + g * g));
    }

    #[test]
    fn valid_levels_lie_outside_the_mass_gap(
        ch in channel(), extra in 0u32..4, a1 in 0.0..2.0f64, a2 in 0.0..2.0f64,
    ) {
        let c = Couplings::new(a1, a2).unwrap();
        for level in energy_general(Model::Dirac, &ch, &state(&ch, extra), &c).valid_levels() {
            prop_assert!(level.ratio.abs() >= 1.0);
            prop_assert!(a2 + a1 * level.ratio > 0.0);
        }
    }

    #[test]
    fn pure_vector_matches_general(ch in channel(), extra in 0u32..4, z in 0.0..2.0f64) {
        let st = state(&ch, extra);
        let c = Couplings::new(z, 0.0).unwrap();
        if let Ok(special) = energy_case1(&ch, &st, z) {
            prop_assume!(special.valid);
            let general = energy_general(Model::Dirac, &ch, &st, &c);
            let level = general.level(Branch::Plus).unwrap();
            prop_assert!((level.ratio - special.ratio).abs() < 1e-12 * special.ratio);
        }
    }

    #[test]
    fn pure_scalar_is_symmetric_and_matches_general(ch in channel(), extra in 0u32..4, a2 in 0.01..2.0f64) {
        let st = state(&ch, extra);
        let c = Couplings::new(0.0, a2).unwrap();
        prop_assume!(gamma(&ch, &c).is_ok());
        let special = energy_case2(&ch, &st, a2).unwrap();
        let general = energy_general(Model::Dirac, &ch, &st, &c);
        let plus = general.level(Branch::Plus).unwrap().ratio;
        let minus = general.level(Branch::Minus).unwrap().ratio;
        prop_assert!((plus + minus).abs() < 1e-12 * plus);
        prop_assert!((plus - special.level(Branch::Plus).unwrap().ratio).abs() < 1e-12 * plus);
        prop_assert!((minus - special.level(Branch::Minus).unwrap().ratio).abs() < 1e-12 * plus);
    }

    #[test]
    fn equal_couplings_match_general(ch in channel(), extra in 0u32..4, frac in 0.01..0.99f64) {
        let st = state(&ch, extra);
        let a = frac * f64::from(st.n());
        let c = Couplings::new(a, a).unwrap();
        let special = energy_case3(st.n(), a).unwrap();
        prop_assert!(special.valid);
        let general = energy_general(Model::Dirac, &ch, &st, &c);
        let level = general.valid_levels().next().unwrap();
        prop_assert!((level.ratio - special.ratio).abs() < 1e-12 * special.ratio);
    }

    #[test]
    fn klein_gordon_cases_match_general(l in 0u32..4, extra in 0u32..4, x in 0.01..0.45f64) {
        let ch = Channel::orbital(l);
        let st = state(&ch, extra);
        let n = st.n();
        let patterns = [
            (KgCase::A2Zero, Couplings::new(x, 0.0).unwrap()),
            (KgCase::A1Zero, Couplings::new(0.0, x).unwrap()),
            (KgCase::Equal, Couplings::new(x, x).unwrap()),
        ];
        for (case, c) in patterns {
            let special = energy_kg(case, l, n, x).unwrap();
            let general = energy_general(Model::KleinGordon, &ch, &st, &c);
            for level in special.valid_levels() {
                let other = general.level(level.branch).unwrap();
                prop_assert!(other.valid);
                prop_assert!((other.ratio - level.ratio).abs() < 1e-12 * level.ratio.abs());
            }
        }
    }

    #[test]
    fn equal_couplings_beyond_pole_cluster_below_minus_one(n in 1u32..7, a in 0.0..10.0f64) {
        let nf = f64::from(n);
        prop_assume!(a > nf * (1.0 + 1e-6));
        let here = energy_case3(n, a).unwrap();
        let further = energy_case3(n, a + 0.01).unwrap();
        prop_assert!(here.ratio < -1.0);
        prop_assert!(further.ratio > here.ratio);
        prop_assert!(!here.valid);
    }

    #[test]
    fn residual_is_independent_of_normalization(re in -3.0..3.0f64, im in -3.0..3.0f64) {
        prop_assume!(re.abs() + im.abs() > 0.1);
        let ch = Channel::new(3, -1).unwrap();
        let st = state(&ch, 1);
        let c = Couplings::new(0.3, 0.7).unwrap();
        let e = energy_general(Model::Dirac, &ch, &st, &c).valid_levels().next().unwrap().ratio;
        let f = build_eigenfunction(Model::Dirac, &ch, &st, &c, e).unwrap();
        let mut g = f;
        g.normalization = Complex::new(re, im);
        let samples = default_samples(&f);
        let a = ode_residual(&f, Model::Dirac, &ch, &c, e, &samples).unwrap();
        let b = ode_residual(&g, Model::Dirac, &ch, &c, e, &samples).unwrap();
        prop_assert!((a.max_relative_residual - b.max_relative_residual).abs() < 1e-12);
    }

    #[test]
    fn laguerre_matches_explicit_polynomials(alpha in -0.9..5.0f64, re in -5.0..5.0f64, im in -5.0..5.0f64) {
        let x = Complex::new(re, im);
        let l1 = -x + 1.0 + alpha;
        let l2 = (x * x - x * (2.0 * (alpha + 2.0)) + (alpha + 1.0) * (alpha + 2.0)) / 2.0;
        let l3 = (-x * x * x + x * x * (3.0 * (alpha + 3.0)) - x * (3.0 * (alpha + 2.0) * (alpha + 3.0))
            + (alpha + 1.0) * (alpha + 2.0) * (alpha + 3.0)) / 6.0;
        let scale = 1.0 + x.norm().powi(3);
        prop_assert!((laguerre(1, alpha, x).unwrap() - l1).norm() < 1e-12 * scale);
        prop_assert!((laguerre(2, alpha, x).unwrap() - l2).norm() < 1e-12 * scale);
        prop_assert!((laguerre(3, alpha, x).unwrap() - l3).norm() < 1e-12 * scale);
    }
}

#[test]
fn closure_stencil_is_fourth_order() {
    let ch = Channel::new(1, -1).unwrap();
    let st = PrincipalState::new(2, &ch).unwrap();
    let c = Couplings::new(0.0, 0.6).unwrap();
    let e = energy_case2(&ch, &st, 0.6).unwrap().level(Branch::Plus).unwrap().ratio;
    let params = solve_theta(&ch, &c, gamma(&ch, &c).unwrap());
    let f = build_eigenfunction(Model::Dirac, &ch, &st, &c, e).unwrap();
    let residual = |step: f64| {
        let grid = ClosureGrid { start: 0.5, stop: 10.0, step };
        coupled_closure_with(&params, &f, &ch, &c, e, &grid, f64::INFINITY)
            .unwrap()
            .lower
            .max_relative_residual
    };
    let factor = residual(0.04) / residual(0.02);
    assert!((12.0..=20.0).contains(&factor), "{factor}");
}
