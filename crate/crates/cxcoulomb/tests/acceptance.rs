use std::time::{Duration, Instant};

use cxcoulomb::verify::{self, Check};
use cxcoulomb_core::contour::{convergence_study, self_consistent_energy, ContourGrid};
use cxcoulomb_core::qnum::{effective_params, Channel, Couplings, PrincipalState};
use cxcoulomb_core::spectra::{
    energy_case1, energy_case1_special, energy_case2, energy_case3, energy_general, energy_kg, figure1_data,
    figure2_data, linspace, Branch, KgCase, FIGURE1_GRID, FIGURE1_N, FIGURE2_GRID, FIGURE2_N,
};
use cxcoulomb_core::Model;

const SEED: u64 = 7;
const SWEEP_POINTS: usize = 1000;
const CROSS_FORMULA: f64 = 1e-12;
const RATIONAL: f64 = 1e-15;
const FIGURE1_LIMIT: f64 = 3e-4;
const FIGURE2_ENDPOINT: f64 = 1e-12;
const CONTOUR_TOLERANCE: f64 = 1e-4;
const ORDER_RANGE: (f64, f64) = (1.7, 2.3);
const CONTOUR_POINTS: [usize; 3] = [1000, 2000, 4000];

fn conclude(criterion: u32, what: &str, failures: &[String], elapsed: Duration, limit: Duration) {
    let in_time = elapsed < limit;
    let ok = failures.is_empty() && in_time;
    println!(
        "{} criterion {criterion}: {what} ({:.3} s, limit {:.0} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs_f64(),
    );
    for failure in failures {
        println!("  {failure}");
    }
    assert!(failures.is_empty(), "criterion {criterion}: {failures:?}");
    assert!(in_time, "criterion {criterion} took {elapsed:?}, limit {limit:?}");
}

fn failed_checks(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{}: {} vs {}", c.name, c.measured, c.bound))
        .collect()
}

fn sweep_channel(i: usize) -> Channel {
    let two_j = 2 * (i % 5) as u32 + 1;
    let omega = if (i / 5) % 2 == 0 { -1 } else { 1 };
    Channel::new(two_j, omega).unwrap()
}

fn sweep_state(i: usize, ch: &Channel) -> PrincipalState {
    PrincipalState::new(ch.l() + 1 + ((i / 10) % 4) as u32, ch).unwrap()
}

fn sweep_fraction(i: usize) -> f64 {
    (i as f64 + 0.5) / SWEEP_POINTS as f64
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CROSS_FORMULA * a.abs().max(1.0)
}

fn criterion_1_algebraic_identities() {
    let start = Instant::now();
    let checks = verify::algebra(SEED, 10_000);
    let elapsed = start.elapsed();
    assert_eq!(checks.len(), 5);
    conclude(1, "boost identities over 10^4 draws", &failed_checks(&checks), elapsed, Duration::from_secs(1));
}

fn criterion_2_cross_formula_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut compared = [0usize; 5];
    for i in 0..SWEEP_POINTS {
        let ch = sweep_channel(i);
        let st = sweep_state(i, &ch);
        let x = 2.0 * sweep_fraction(i);

        if let Ok(special) = energy_case1(&ch, &st, x) {
            let general = energy_general(Model::Dirac, &ch, &st, &Couplings::new(x, 0.0).unwrap());
            let level = general.level(Branch::Plus).unwrap();
            if special.valid {
                compared[0] += 1;
                if !level.valid || !close(level.ratio, special.ratio) {
                    failures.push(format!("pure vector {ch:?} n={} z={x}", st.n()));
                }
            }
        }

        let c = Couplings::new(0.0, x).unwrap();
        if let Ok(special) = energy_case2(&ch, &st, x) {
            let general = energy_general(Model::Dirac, &ch, &st, &c);
            compared[1] += 1;
            for branch in [Branch::Plus, Branch::Minus] {
                let (a, b) = (special.level(branch).unwrap(), general.level(branch).unwrap());
                if a.valid != b.valid || !close(a.ratio, b.ratio) {
                    failures.push(format!("pure scalar {ch:?} n={} a2={x} {branch:?}", st.n()));
                }
            }
        }

        let a = (0.01 + 0.98 * sweep_fraction(i)) * f64::from(st.n());
        let special = energy_case3(st.n(), a).unwrap();
        let general = energy_general(Model::Dirac, &ch, &st, &Couplings::new(a, a).unwrap());
        compared[2] += 1;
        match general.valid_levels().next() {
            Some(level) if close(level.ratio, special.ratio) && general.valid_levels().count() == 1 => {}
            _ => failures.push(format!("equal couplings {ch:?} n={} a={a}", st.n())),
        }

        let n = (i % 10) as u32 + 1;
        let top = Channel::new(2 * n - 1, -1).unwrap();
        let st_top = PrincipalState::new(n, &top).unwrap();
        let z = 0.99 * f64::from(n) * sweep_fraction(i);
        if let Ok(level) = energy_case1(&top, &st_top, z) {
            compared[3] += 1;
            let special = energy_case1_special(n, z);
            if !level.valid || !close(level.ratio, special.ratio) {
                failures.push(format!("n = j + 1/2 form n={n} z={z}"));
            }
        }

        let l = (i % 4) as u32;
        let orbital = Channel::orbital(l);
        let st_kg = PrincipalState::new(l + 1 + ((i / 4) % 4) as u32, &orbital).unwrap();
        let y = 0.45 * sweep_fraction(i);
        let patterns = [
            (KgCase::A2Zero, Couplings::new(y, 0.0).unwrap()),
            (KgCase::A1Zero, Couplings::new(0.0, y).unwrap()),
            (KgCase::Equal, Couplings::new(y, y).unwrap()),
        ];
        for (case, c) in patterns {
            let special = energy_kg(case, l, st_kg.n(), y).unwrap();
            let general = energy_general(Model::KleinGordon, &orbital, &st_kg, &c);
            compared[4] += 1;
            for level in special.valid_levels() {
                match general.level(level.branch) {
                    Some(other) if other.valid && close(other.ratio, level.ratio) => {}
                    _ => failures.push(format!("klein-gordon {case:?} l={l} n={} x={y}", st_kg.n())),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if compared[..4].iter().any(|&k| k < SWEEP_POINTS / 2) || compared[4] != 3 * SWEEP_POINTS {
        failures.push(format!("too few comparisons: {compared:?}"));
    }
    conclude(2, "special cases agree with the general formula", &failures, elapsed, Duration::from_secs(1));
}

fn criterion_3_exact_rational_values() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut expect = |what: &str, got: f64, want: f64| {
        if (got - want).abs() > RATIONAL {
            failures.push(format!("{what}: {got} vs {want}"));
        }
    };

    let e = energy_case3(1, 0.5).unwrap().ratio;
    expect("equal couplings E/m", e, 5.0 / 3.0);
    let b = 0.5 + 0.5 * e;
    expect("equal couplings B", b, 4.0 / 3.0);
    expect("equal couplings lambda", e * e - 1.0, 16.0 / 9.0);

    let ch = Channel::new(1, -1).unwrap();
    let st = PrincipalState::new(1, &ch).unwrap();
    let pair = energy_case2(&ch, &st, 0.6).unwrap();
    expect("pure scalar E/m plus", pair.level(Branch::Plus).unwrap().ratio, 1.25);
    expect("pure scalar E/m minus", pair.level(Branch::Minus).unwrap().ratio, -1.25);
    let params = effective_params(Model::Dirac, &ch, &st, &Couplings::new(0.0, 0.6).unwrap()).unwrap();
    expect("pure scalar n_tilde", params.n_eff, 0.8);

    let free = energy_general(Model::Dirac, &ch, &st, &Couplings::new(0.0, 0.0).unwrap());
    expect("zero coupling E/m", free.level(Branch::Plus).unwrap().ratio, 1.0);

    let elapsed = start.elapsed();
    conclude(3, "rational spot values", &failures, elapsed, Duration::from_secs(1));
}

fn criterion_4_figure_one() {
    let start = Instant::now();
    let (lo, hi, steps) = FIGURE1_GRID;
    let grid = linspace(lo, hi, steps).unwrap();
    let series = figure1_data(&FIGURE1_N, &grid).unwrap();
    let elapsed = start.elapsed();

    let mut failures = Vec::new();
    for pair in series.windows(2) {
        for (k, &z) in grid.iter().enumerate().filter(|(_, &z)| z > 0.0) {
            if !(pair[1].ordinate[k] < pair[0].ordinate[k]) {
                failures.push(format!("not decreasing from n={} to n={} at z={z}", pair[0].n, pair[1].n));
            }
        }
    }
    let at_one = grid.iter().position(|&z| z == 1.0).unwrap();
    let last = series.iter().find(|s| s.n == 50).unwrap();
    let excess = last.ordinate[at_one] - 1.0;
    if !(excess > 0.0 && excess < FIGURE1_LIMIT) {
        failures.push(format!("n=50 at z=1 exceeds one by {excess}"));
    }
    conclude(4, "figure 1 data", &failures, elapsed, Duration::from_secs(1));
}

fn criterion_5_figure_two() {
    let start = Instant::now();
    let (lo, hi, steps) = FIGURE2_GRID;
    let grid = linspace(lo, hi, steps).unwrap();
    let series = figure2_data(&FIGURE2_N, &grid).unwrap();
    let elapsed = start.elapsed();

    let mut failures = Vec::new();
    for s in &series {
        let pole = f64::from(s.n);
        let expected: Vec<usize> = grid.iter().enumerate().filter(|(_, &a)| a == pole).map(|(k, _)| k).collect();
        if expected.len() != 1 || s.gaps != expected {
            failures.push(format!("n={}: gaps {:?}", s.n, s.gaps));
        }
        let beyond: Vec<f64> = grid
            .iter()
            .zip(&s.ordinate)
            .filter(|(&a, _)| a > pole)
            .map(|(_, &e)| e)
            .collect();
        if beyond.iter().any(|&e| !(e < -1.0)) {
            failures.push(format!("n={}: value at or above -1 beyond the pole", s.n));
        }
        if beyond.windows(2).any(|w| !(w[1] > w[0])) {
            failures.push(format!("n={}: not increasing beyond the pole", s.n));
        }
    }
    let end = *series[0].ordinate.last().unwrap();
    if (end + 101.0 / 99.0).abs() > FIGURE2_ENDPOINT {
        failures.push(format!("n=1 at A=10: {end}"));
    }
    conclude(5, "figure 2 data", &failures, elapsed, Duration::from_secs(1));
}

fn criterion_6_ode_residual() {
    let start = Instant::now();
    let checks = verify::residual().unwrap();
    let elapsed = start.elapsed();
    assert_eq!(verify::residual_cases().len(), 20);
    assert_eq!(checks.len(), 40);
    conclude(6, "analytic eigenfunctions solve the radial equation", &failed_checks(&checks), elapsed, Duration::from_secs(5));
}

fn criterion_7_coupled_closure() {
    let start = Instant::now();
    let checks = verify::closure().unwrap();
    let elapsed = start.elapsed();
    assert_eq!(checks.len(), 10);
    conclude(7, "lower component closes the coupled system", &failed_checks(&checks), elapsed, Duration::from_secs(10));
}

fn criterion_8_eigensolver() {
    let start = Instant::now();
    let checks = verify::eig(SEED, 100);
    let elapsed = start.elapsed();
    conclude(8, "QR eigenvalues against the polynomial oracle", &failed_checks(&checks), elapsed, Duration::from_secs(10));
}

struct ContourCase {
    label: &'static str,
    model: Model,
    channel: Channel,
    n: u32,
    a1: f64,
    a2: f64,
    exact: f64,
}

fn criterion_9_contour_solver() {
    let dirac = Channel::new(1, -1).unwrap();
    let cases = [
        ContourCase { label: "pure scalar n=1", model: Model::Dirac, channel: dirac, n: 1, a1: 0.0, a2: 0.6, exact: 1.25 },
        ContourCase { label: "equal n=1", model: Model::Dirac, channel: dirac, n: 1, a1: 0.5, a2: 0.5, exact: 5.0 / 3.0 },
        ContourCase { label: "equal n=2", model: Model::Dirac, channel: dirac, n: 2, a1: 0.5, a2: 0.5, exact: 17.0 / 15.0 },
        ContourCase { label: "pure vector n=1", model: Model::Dirac, channel: dirac, n: 1, a1: 0.6, a2: 0.0, exact: 1.36f64.sqrt() },
        ContourCase {
            label: "klein-gordon l=0 n=1",
            model: Model::KleinGordon,
            channel: Channel::orbital(0),
            n: 1,
            a1: 0.0,
            a2: 0.4,
            exact: 1.25f64.sqrt(),
        },
    ];

    let start = Instant::now();
    let mut failures = Vec::new();
    for case in &cases {
        let st = PrincipalState::new(case.n, &case.channel).unwrap();
        let c = Couplings::new(case.a1, case.a2).unwrap();
        let params = effective_params(case.model, &case.channel, &st, &c).unwrap();
        let coulomb = c.coulomb_coefficient(case.exact);
        let grids: Vec<ContourGrid> = CONTOUR_POINTS
            .iter()
            .map(|&n| ContourGrid::default_for(&params, coulomb, n).unwrap())
            .collect();
        let guess = 1.05 * case.exact;

        let fine = self_consistent_energy(case.model, &case.channel, &st, &c, &grids[2], guess, 1.0).unwrap();
        let error = (fine.energy_ratio - case.exact).abs();
        if error > CONTOUR_TOLERANCE {
            failures.push(format!("{}: |E - E_exact| = {error}", case.label));
        }
        if !(fine.lambda.im.abs() < fine.lambda_error_estimate) {
            failures.push(format!(
                "{}: |Im lambda| = {} vs estimate {}",
                case.label,
                fine.lambda.im.abs(),
                fine.lambda_error_estimate
            ));
        }
        let study = convergence_study(case.model, &case.channel, &st, &c, case.exact, &grids, guess).unwrap();
        if !study.orders_within(ORDER_RANGE.0, ORDER_RANGE.1) {
            failures.push(format!("{}: orders {:?}", case.label, study.orders));
        }
        println!("  {}: error {error:.3e}, orders {:?}", case.label, study.orders);
    }
    let elapsed = start.elapsed();
    conclude(9, "contour solver reproduces the closed form", &failures, elapsed, Duration::from_secs(60));
}

fn main() {
    let criteria: [fn(); 9] = [
        criterion_1_algebraic_identities,
        criterion_2_cross_formula_equivalence,
        criterion_3_exact_rational_values,
        criterion_4_figure_one,
        criterion_5_figure_two,
        criterion_6_ode_residual,
        criterion_7_coupled_closure,
        criterion_8_eigensolver,
        criterion_9_contour_solver,
    ];
    let failed = criteria
        .iter()
        .filter(|criterion| std::panic::catch_unwind(**criterion).is_err())
        .count();
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
