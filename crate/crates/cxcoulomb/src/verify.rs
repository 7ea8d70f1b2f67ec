//! Verification suites: algebraic identities of the boost, ODE residuals of
//! the analytic eigenfunctions, closure of the coupled first-order system,
//! and the QR eigensolver against the characteristic-polynomial oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cxcoulomb_core::analytic::{self, ClosureGrid};
use cxcoulomb_core::eigensolve::{self, ComplexMatrix};
use cxcoulomb_core::qnum::{self, Channel, Couplings, PrincipalState};
use cxcoulomb_core::spectra::{energy_general, Branch};
use cxcoulomb_core::transform::{self, BoostParams};
use cxcoulomb_core::{tol, Complex, Model};

use crate::oracle;
use crate::table::{Cell, Table};
use crate::RunError;

/// Whether a measured value must stay below or rise above its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub relation: Relation,
}

impl Check {
    fn below(suite: &'static str, name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            measured,
            bound,
            relation: Relation::Below,
        }
    }

    fn above(suite: &'static str, name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            measured,
            bound,
            relation: Relation::Above,
        }
    }

    pub fn passed(&self) -> bool {
        match self.relation {
            Relation::Below => self.measured < self.bound,
            Relation::Above => self.measured > self.bound,
        }
    }
}

/// Checks as a table with one row per check.
pub fn report(checks: &[Check]) -> Table {
    let mut t = Table::new(vec!["suite", "check", "measured", "relation", "bound", "passed"]);
    for c in checks {
        let relation = match c.relation {
            Relation::Below => "<",
            Relation::Above => ">",
        };
        t.push(vec![
            Cell::from(c.suite),
            Cell::from(c.name.as_str()),
            Cell::from(c.measured),
            Cell::from(relation),
            Cell::from(c.bound),
            Cell::from(c.passed()),
        ]);
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    t.diagnostics.push(format!("{} checks, {} failed", checks.len(), failed));
    t
}

/// Random channel with `2j <= 9`.
fn random_channel(rng: &mut impl Rng) -> Channel {
    let two_j = 2 * rng.gen_range(0..5u32) + 1;
    let omega = if rng.gen_bool(0.5) { 1 } else { -1 };
    Channel::new(two_j, omega).expect("odd 2j and omega = +-1")
}

/// Boost identities over `draws` random channels and couplings in
/// `[0, 2]^2`, redrawing couplings with a broken (non-real) `gamma`.
pub fn algebra(seed: u64, draws: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hyperbolic: f64 = 0.0;
    let mut split: f64 = 0.0;
    let mut first: f64 = 0.0;
    let mut second: f64 = 0.0;
    let mut centrifugal: f64 = 0.0;
    let mut accepted = 0;
    while accepted < draws {
        let ch = random_channel(&mut rng);
        let c = Couplings::new(rng.gen_range(0.0..=2.0), rng.gen_range(0.0..=2.0)).expect("finite couplings");
        let Ok(g) = qnum::gamma(&ch, &c) else {
            continue;
        };
        accepted += 1;
        let p = transform::solve_theta(&ch, &c, g);
        hyperbolic = hyperbolic.max((p.hyperbolic_norm() - 1.0).norm());
        split = split.max((p.a * p.a - p.b * p.b - 1.0).norm());
        let (r1, r2) = transform::constraint_residuals(&p, &ch, &c, g);
        first = first.max(r1.norm());
        second = second.max(r2.norm());
        let st = PrincipalState::new(ch.l() + 1, &ch).expect("n = l + 1 is admissible");
        let params = qnum::effective_params(Model::Dirac, &ch, &st, &c).expect("real gamma");
        let w = f64::from(ch.omega());
        let rel = (params.centrifugal() - (g * g + w * g)).abs() / (1.0 + g * g);
        centrifugal = centrifugal.max(rel);
    }
    let bound = tol::ALGEBRAIC;
    vec![
        Check::below("algebra", "cosh^2 - sinh^2 = 1", hyperbolic, bound),
        Check::below("algebra", "a^2 - b^2 = 1", split, bound),
        Check::below("algebra", "scalar-vector constraint", first, bound),
        Check::below("algebra", "angular constraint", second, bound),
        Check::below("algebra", "l_eff(l_eff+1) = gamma^2 + omega gamma", centrifugal, bound),
    ]
}

/// A level picked out of the closed-form spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StockLevel {
    pub label: &'static str,
    pub model: Model,
    pub channel: Channel,
    pub n: u32,
    pub a1: f64,
    pub a2: f64,
    pub branch: Branch,
}

impl StockLevel {
    fn dirac(label: &'static str, two_j: u32, omega: i32, n: u32, a1: f64, a2: f64, branch: Branch) -> Self {
        Self {
            label,
            model: Model::Dirac,
            channel: Channel::new(two_j, omega).expect("stock channel"),
            n,
            a1,
            a2,
            branch,
        }
    }

    fn kg(label: &'static str, l: u32, n: u32, a1: f64, a2: f64, branch: Branch) -> Self {
        Self {
            label,
            model: Model::KleinGordon,
            channel: Channel::orbital(l),
            n,
            a1,
            a2,
            branch,
        }
    }

    pub fn state(&self) -> PrincipalState {
        PrincipalState::new(self.n, &self.channel).expect("stock state")
    }

    pub fn couplings(&self) -> Couplings {
        Couplings::new(self.a1, self.a2).expect("stock couplings")
    }

    /// Absolute energy of the level (unit mass).
    pub fn energy(&self) -> Result<f64, RunError> {
        let spectrum = energy_general(self.model, &self.channel, &self.state(), &self.couplings());
        spectrum
            .level(self.branch)
            .filter(|l| l.valid)
            .map(|l| l.ratio)
            .ok_or_else(|| RunError::Failed(format!("{}: no valid {} level", self.label, self.branch)))
    }

    pub fn name(&self) -> String {
        format!(
            "{} ({} n={} 2j={} omega={} a1={} a2={} {})",
            self.label,
            self.model,
            self.n,
            self.channel.two_j(),
            self.channel.omega(),
            self.a1,
            self.a2,
            self.branch
        )
    }
}

/// Twenty levels spread over pure vector, pure scalar, equal and general
/// couplings for Dirac, plus Klein-Gordon, all with `n_r <= 4`.
pub fn residual_cases() -> Vec<StockLevel> {
    use Branch::{Minus, Plus};
    vec![
        StockLevel::dirac("vector", 1, -1, 1, 0.6, 0.0, Plus),
        StockLevel::dirac("vector", 1, -1, 3, 0.3, 0.0, Plus),
        StockLevel::dirac("vector", 3, 1, 3, 1.2, 0.0, Plus),
        StockLevel::dirac("vector", 5, -1, 5, 0.9, 0.0, Plus),
        StockLevel::dirac("scalar", 1, -1, 1, 0.0, 0.6, Plus),
        StockLevel::dirac("scalar", 1, -1, 1, 0.0, 0.6, Minus),
        StockLevel::dirac("scalar", 3, -1, 4, 0.0, 1.0, Plus),
        StockLevel::dirac("scalar", 1, 1, 2, 0.0, 0.5, Minus),
        StockLevel::dirac("equal", 1, -1, 1, 0.5, 0.5, Plus),
        StockLevel::dirac("equal", 1, -1, 2, 0.5, 0.5, Plus),
        StockLevel::dirac("equal", 3, -1, 3, 1.5, 1.5, Plus),
        StockLevel::dirac("equal", 7, 1, 6, 2.0, 2.0, Plus),
        StockLevel::dirac("general", 1, -1, 2, 0.3, 0.7, Plus),
        StockLevel::dirac("general", 3, 1, 4, 0.8, 0.4, Plus),
        StockLevel::dirac("general", 5, -1, 7, 1.1, 1.9, Plus),
        StockLevel::dirac("general", 9, -1, 5, 2.0, 1.0, Plus),
        StockLevel::kg("kg scalar", 0, 1, 0.0, 0.4, Plus),
        StockLevel::kg("kg scalar", 0, 1, 0.0, 0.4, Minus),
        StockLevel::kg("kg vector", 0, 1, 0.6, 0.0, Plus),
        StockLevel::kg("kg general", 2, 5, 0.4, 0.9, Plus),
    ]
}

/// Relative detuning of the energy in the residual control.
pub const RESIDUAL_DETUNING: f64 = 1e-3;
/// A detuned energy must raise the residual above this.
pub const RESIDUAL_CONTROL: f64 = 1e-4;

/// Maximum ODE residual of each stock level, and of the same eigenfunction
/// with the energy detuned by 0.1%.
pub fn residual() -> Result<Vec<Check>, RunError> {
    let mut checks = Vec::new();
    for case in residual_cases() {
        let e = case.energy()?;
        let (ch, st, c) = (case.channel, case.state(), case.couplings());
        let f = analytic::build_eigenfunction(case.model, &ch, &st, &c, e)?;
        let samples = analytic::default_samples(&f);
        let exact = analytic::ode_residual(&f, case.model, &ch, &c, e, &samples)?;
        let detuned = analytic::ode_residual(&f, case.model, &ch, &c, e * (1.0 + RESIDUAL_DETUNING), &samples)?;
        checks.push(Check::below(
            "residual",
            case.name(),
            exact.max_relative_residual,
            tol::ODE_RESIDUAL,
        ));
        checks.push(Check::above(
            "residual",
            format!("{} detuned", case.name()),
            detuned.max_relative_residual,
            RESIDUAL_CONTROL,
        ));
    }
    Ok(checks)
}

/// Positive-branch Dirac levels for the coupled-system closure.
pub fn closure_cases() -> Vec<StockLevel> {
    use Branch::Plus;
    vec![
        StockLevel::dirac("scalar", 1, -1, 1, 0.0, 0.6, Plus),
        StockLevel::dirac("scalar", 1, 1, 2, 0.0, 0.5, Plus),
        StockLevel::dirac("vector", 1, -1, 2, 0.6, 0.0, Plus),
        StockLevel::dirac("general", 1, -1, 2, 0.3, 0.7, Plus),
        StockLevel::dirac("general", 3, 1, 4, 0.8, 0.4, Plus),
    ]
}

/// Factor applied to `sinh theta` (with `cosh theta` kept) in the closure
/// control.
pub const SINH_DETUNING: f64 = 1.01;
/// A detuned boost must raise the closure residual above this.
pub const CLOSURE_CONTROL: f64 = 1e-3;

/// Closure residual of each stock level with the exact boost, and with
/// `sinh theta` detuned.
pub fn closure() -> Result<Vec<Check>, RunError> {
    let mut checks = Vec::new();
    for case in closure_cases() {
        let e = case.energy()?;
        let (ch, st, c) = (case.channel, case.state(), case.couplings());
        let exact = analytic::coupled_closure(&ch, &st, &c, e, None)?;
        checks.push(Check::below(
            "closure",
            case.name(),
            exact.lower.max_relative_residual,
            tol::CLOSURE_RESIDUAL,
        ));

        let g = qnum::gamma(&ch, &c)?;
        let p = transform::solve_theta(&ch, &c, g);
        let detuned = BoostParams::from_hyperbolic(p.cosh_theta, p.sinh_theta * SINH_DETUNING);
        let f = analytic::build_eigenfunction(Model::Dirac, &ch, &st, &c, e)?;
        let grid = ClosureGrid::default_for(&f);
        let off = analytic::coupled_closure_with(&detuned, &f, &ch, &c, e, &grid, f64::INFINITY)?;
        checks.push(Check::above(
            "closure",
            format!("{} detuned sinh", case.name()),
            off.lower.max_relative_residual,
            CLOSURE_CONTROL,
        ));
    }
    Ok(checks)
}

/// Largest matrix dimension in the eigensolver suite.
pub const EIG_MAX_DIM: usize = 12;
pub const EIG_PAIR_BOUND: f64 = 1e-8;
pub const EIG_TRACE_BOUND: f64 = 1e-10;
pub const EIG_DET_BOUND: f64 = 1e-8;

/// Random matrix with entries uniform in the unit square of the complex plane.
pub fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// QR eigenvalues of `count` random matrices (dimension 1 to 12) against
/// the oracle, with trace and determinant consistency.
pub fn eig(seed: u64, count: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pair: f64 = 0.0;
    let mut trace: f64 = 0.0;
    let mut det: f64 = 0.0;
    let mut unconverged = 0usize;
    for _ in 0..count {
        let n = rng.gen_range(1..=EIG_MAX_DIM);
        let a = random_matrix(&mut rng, n);
        let norm = a.frobenius_norm();
        let result = eigensolve::eigenvalues(&a);
        if !result.converged {
            unconverged += 1;
        }
        let reference = oracle::eigenvalues(&a);
        let distance = oracle::paired_distance(&result.eigenvalues, &reference).unwrap_or(f64::INFINITY);
        pair = pair.max(distance / norm);
        let sum: Complex = result.eigenvalues.iter().sum();
        trace = trace.max((sum - a.trace()).norm() / norm);
        let product: Complex = result.eigenvalues.iter().product();
        let d = eigensolve::determinant(&a);
        det = det.max((product - d).norm() / d.norm());
    }
    vec![
        Check::below("eig", "QR iterations converged (failures)", unconverged as f64, 0.5),
        Check::below("eig", "paired distance to oracle / ||A||", pair, EIG_PAIR_BOUND),
        Check::below("eig", "|sum(lambda) - tr A| / ||A||", trace, EIG_TRACE_BOUND),
        Check::below("eig", "|prod(lambda) - det A| / |det A|", det, EIG_DET_BOUND),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_semantics() {
        assert!(Check::below("s", "c", 1.0, 2.0).passed());
        assert!(!Check::below("s", "c", 2.0, 2.0).passed());
        assert!(Check::above("s", "c", 3.0, 2.0).passed());
        assert!(!Check::below("s", "c", f64::NAN, 2.0).passed());
    }

    #[test]
    fn small_suites_pass() {
        assert!(algebra(1, 200).iter().all(Check::passed));
        assert!(eig(1, 10).iter().all(Check::passed));
    }

    #[test]
    fn seeds_reproduce() {
        assert_eq!(algebra(3, 50), algebra(3, 50));
        assert_eq!(eig(3, 5), eig(3, 5));
    }
}
