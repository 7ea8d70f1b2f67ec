//! Rotated-contour discretization of the reduced radial equation and a
//! self-consistent solve for the energy.
//!
//! Along `r = rho e^(i theta)` the reduced equation becomes
//!
//! ```text
//! e^(-2i theta) (-V'' + l_eff (l_eff + 1) V / rho^2) - e^(-i theta) kappa V / rho = lambda V
//! ```
//!
//! for `V(rho) = U(rho e^(i theta))`, with `kappa = 2i (m A2 + A1 E)` and
//! `lambda = E^2 - m^2`. Choosing `theta = -sign(B) pi/4` turns the
//! oscillating analytic solution into a decaying one, so a truncated domain
//! with a Dirichlet wall captures the discrete levels.
//!
//! The operator is discretized after factoring out the origin behaviour,
//! `V = rho^s W` with `s = l_eff + 1`, which gives the self-adjoint form
//! `-(rho^(2s) W')' / rho^(2s)` for the kinetic and centrifugal terms
//! together. Cell-averaged weights for `rho^(2s)` and `rho^(2s - 1)` make the
//! scheme second-order accurate for any `s > 0`, and a symmetric diagonal
//! scaling turns the result into a complex symmetric tridiagonal matrix.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use crate::analytic::RadialEigenfunction;
use crate::eigensolve::{NearestEigen, SymmetricTridiagonal};
use crate::qnum::{self, Channel, Couplings, EffectiveParams, PrincipalState};
use crate::{tol, Complex, Error, Model, Result, I};

/// Outer iterations allowed in [`self_consistent_energy`].
pub const MAX_OUTER_ITERATIONS: usize = 50;
/// The outer loop stops once `|E_(k+1) - E_k| < OUTER_TOLERANCE * m`.
pub const OUTER_TOLERANCE: f64 = 1e-10;
/// Tracked eigenvalues must lie within this fraction of `|lambda_pred|`.
pub const TRUST_RADIUS: f64 = 0.5;

/// Uniform grid on the rotated ray `rho e^(i angle)`, `rho in [0, rho_max]`.
///
/// Unknowns sit at `rho_k = k * spacing` for `k = 0..=n_points`, with the
/// Dirichlet wall at `rho_max = (n_points + 1) * spacing`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourGrid {
    pub n_points: usize,
    pub rho_max: f64,
    pub angle: f64,
}

impl ContourGrid {
    pub const MIN_POINTS: usize = 100;
    pub const DEFAULT_POINTS: usize = 2000;

    pub fn new(n_points: usize, rho_max: f64, angle: f64) -> Result<Self> {
        if n_points < Self::MIN_POINTS {
            return Err(Error::InvalidGrid("need at least 100 points"));
        }
        if !(rho_max.is_finite() && rho_max > 0.0) {
            return Err(Error::InvalidGrid("rho_max must be positive and finite"));
        }
        if !angle.is_finite() || angle.abs() >= core::f64::consts::FRAC_PI_2 {
            return Err(Error::InvalidGrid("rotation angle must lie in (-pi/2, pi/2)"));
        }
        Ok(Self {
            n_points,
            rho_max,
            angle,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.rho_max / (self.n_points as f64 + 1.0)
    }

    /// `-sign(B) pi/4`, the rotation that makes `exp(-q r)` decay fastest.
    pub fn default_angle(coulomb: f64) -> f64 {
        if coulomb >= 0.0 {
            -FRAC_PI_4
        } else {
            FRAC_PI_4
        }
    }

    /// Default grid for a level with effective parameters `params` and
    /// Coulomb coefficient `coulomb`: `rho_max = max(25 n_eff, 40) / |q|`
    /// with `|q| = |B| / n_eff`.
    pub fn default_for(params: &EffectiveParams, coulomb: f64, n_points: usize) -> Result<Self> {
        if !(coulomb.abs() > 0.0) {
            return Err(Error::NoDiscreteSpectrum);
        }
        let q = coulomb.abs() / params.n_eff;
        let rho_max = (25.0 * params.n_eff).max(40.0) / q;
        Self::new(n_points, rho_max, Self::default_angle(coulomb))
    }

    pub fn with_points(&self, n_points: usize) -> Result<Self> {
        Self::new(n_points, self.rho_max, self.angle)
    }
}

/// `-d^2/dr^2 + l_eff (l_eff + 1)/r^2 - kappa/r` on the rotated ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOperator {
    pub l_eff: f64,
    pub kappa: Complex,
}

impl RadialOperator {
    pub fn new(l_eff: f64, kappa: Complex) -> Result<Self> {
        if !(l_eff > -1.0) || !l_eff.is_finite() {
            return Err(Error::Guard("l_eff must exceed -1"));
        }
        if !(kappa.re.is_finite() && kappa.im.is_finite()) {
            return Err(Error::Guard("Coulomb strength must be finite"));
        }
        Ok(Self { l_eff, kappa })
    }

    /// The operator of the reduced equation, `kappa = 2i B`.
    pub fn reduced(l_eff: f64, coulomb: f64) -> Result<Self> {
        Self::new(l_eff, I * (2.0 * coulomb))
    }

    pub fn discretize(&self, grid: &ContourGrid) -> Result<SymmetricTridiagonal> {
        let n = grid.n_points + 1;
        let h = grid.spacing();
        let p = 2.0 * (self.l_eff + 1.0);
        let rot1 = Complex::from_polar(1.0, -grid.angle);
        let rot2 = rot1 * rot1;
        let power = |x: f64, e: f64| if x == 0.0 { 0.0 } else { libm::pow(x, e) };
        let mut mass = Vec::with_capacity(n);
        let mut coulomb = Vec::with_capacity(n);
        let mut flux = Vec::with_capacity(n);
        for k in 0..n {
            let rho = k as f64 * h;
            let lo = (rho - 0.5 * h).max(0.0);
            let hi = rho + 0.5 * h;
            mass.push((power(hi, p + 1.0) - power(lo, p + 1.0)) / ((p + 1.0) * h));
            coulomb.push((power(hi, p) - power(lo, p)) / (p * h));
            flux.push(power(hi, p));
        }
        let h2 = h * h;
        let diag = (0..n)
            .map(|k| {
                let left = if k == 0 { 0.0 } else { flux[k - 1] };
                let stiffness = (left + flux[k]) / h2;
                (rot2 * stiffness - rot1 * self.kappa * coulomb[k]) / mass[k]
            })
            .collect();
        let off = (0..n - 1)
            .map(|k| -rot2 * (flux[k] / (h2 * libm::sqrt(mass[k] * mass[k + 1]))))
            .collect();
        SymmetricTridiagonal::new(diag, off)
    }
}

/// Tridiagonal matrix of the reduced equation at trial energy `e_coeff`
/// (absolute units), whose eigenvalues approximate `E^2 - m^2`.
pub fn discretize(
    model: Model,
    channel: &Channel,
    state: &PrincipalState,
    couplings: &Couplings,
    e_coeff: f64,
    grid: &ContourGrid,
) -> Result<SymmetricTridiagonal> {
    let params = qnum::effective_params(model, channel, state, couplings)?;
    let b = coulomb_or_reject(couplings, e_coeff)?;
    RadialOperator::reduced(params.l_eff, b)?.discretize(grid)
}

fn coulomb_or_reject(couplings: &Couplings, energy: f64) -> Result<f64> {
    let b = couplings.coulomb_coefficient(energy);
    if b.abs() <= tol::THRESHOLD * couplings.m {
        return Err(Error::NoDiscreteSpectrum);
    }
    Ok(b)
}

/// Eigenvalue of `t` nearest `prediction`, rejected if it falls outside the
/// trust radius `TRUST_RADIUS * |prediction|`.
pub fn tracked_eigenvalue(t: &SymmetricTridiagonal, prediction: Complex) -> Result<NearestEigen> {
    let found = t.nearest_eigenvalue(prediction)?;
    let distance = (found.value - prediction).norm();
    let radius = TRUST_RADIUS * prediction.norm();
    if !(distance <= radius) {
        return Err(Error::LostTracking { distance, radius });
    }
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfConsistentResult {
    /// Converged `E/m`.
    pub energy_ratio: f64,
    /// Tracked matrix eigenvalue, in units of `m^2`.
    pub lambda: Complex,
    pub outer_iterations: usize,
    /// Estimated discretization error of `E/m`, from the complex energy
    /// `sign(E) sqrt(lambda + m^2)` so that it also bounds `Im lambda`.
    pub grid_error_estimate: f64,
    /// Estimated discretization error of `lambda / m^2`.
    pub lambda_error_estimate: f64,
}

struct FixedPoint {
    energy: f64,
    lambda: Complex,
    iterations: usize,
}

impl FixedPoint {
    /// `sign(E) sqrt(lambda + m^2)` with the complex eigenvalue, the energy
    /// the discrete operator actually carries.
    fn complex_energy(&self, m: f64) -> Complex {
        let root = (self.lambda + m * m).sqrt();
        if self.energy < 0.0 {
            -root
        } else {
            root
        }
    }
}

fn fixed_point(
    params: &EffectiveParams,
    couplings: &Couplings,
    grid: &ContourGrid,
    initial_guess: f64,
    damping: f64,
) -> Result<FixedPoint> {
    let m = couplings.m;
    let mut energy = initial_guess;
    let solve = |energy: f64| -> Result<Complex> {
        let b = coulomb_or_reject(couplings, energy)?;
        let t = RadialOperator::reduced(params.l_eff, b)?.discretize(grid)?;
        let prediction = Complex::new(b * b / (params.n_eff * params.n_eff), 0.0);
        Ok(tracked_eigenvalue(&t, prediction)?.value)
    };
    let update = |energy: f64, lambda: Complex| -> Result<f64> {
        let e2 = lambda.re + m * m;
        if !(e2 > 0.0) {
            return Err(Error::Guard("tracked eigenvalue gives E^2 <= 0"));
        }
        Ok(libm::copysign(libm::sqrt(e2), energy))
    };
    if couplings.a1 == 0.0 {
        let lambda = solve(energy)?;
        return Ok(FixedPoint {
            energy: update(energy, lambda)?,
            lambda,
            iterations: 1,
        });
    }
    let mut last_change = f64::INFINITY;
    for iteration in 1..=MAX_OUTER_ITERATIONS {
        let lambda = solve(energy)?;
        let next = energy + damping * (update(energy, lambda)? - energy);
        last_change = (next - energy).abs();
        energy = next;
        if last_change < OUTER_TOLERANCE * m {
            return Ok(FixedPoint {
                energy,
                lambda,
                iterations: iteration,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: MAX_OUTER_ITERATIONS,
        last_change,
    })
}

fn validate_guess(initial_guess: f64, damping: f64) -> Result<()> {
    if !initial_guess.is_finite() || initial_guess == 0.0 {
        return Err(Error::Guard("initial energy guess must be finite and nonzero"));
    }
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::Guard("damping must lie in (0, 1]"));
    }
    Ok(())
}

/// Solve `E^2 - m^2 = lambda(E)` on `grid`, starting from `initial_guess`
/// (absolute energy).
///
/// The error estimates compare against a full solve at half the number of
/// points: `GRID_SAFETY_FACTOR * |x_N - x_(N/2)| / 3` for a second-order
/// scheme.
pub fn self_consistent_energy(
    model: Model,
    channel: &Channel,
    state: &PrincipalState,
    couplings: &Couplings,
    grid: &ContourGrid,
    initial_guess: f64,
    damping: f64,
) -> Result<SelfConsistentResult> {
    validate_guess(initial_guess, damping)?;
    let params = qnum::effective_params(model, channel, state, couplings)?;
    let fine = fixed_point(&params, couplings, grid, initial_guess, damping)?;
    let coarse_grid = grid.with_points((grid.n_points / 2).max(ContourGrid::MIN_POINTS))?;
    let coarse = fixed_point(&params, couplings, &coarse_grid, fine.energy, damping)?;
    let m = couplings.m;
    let estimate = |a: f64| tol::GRID_SAFETY_FACTOR * a / 3.0;
    Ok(SelfConsistentResult {
        energy_ratio: fine.energy / m,
        lambda: fine.lambda / (m * m),
        outer_iterations: fine.iterations,
        grid_error_estimate: estimate((fine.complex_energy(m) - coarse.complex_energy(m)).norm() / m),
        lambda_error_estimate: estimate((fine.lambda - coarse.lambda).norm() / (m * m)),
    })
}

/// Errors against a reference on a sequence of refined grids, and the
/// observed orders between consecutive grids.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub spacings: Vec<f64>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
    /// Errors strictly decrease with the spacing.
    pub monotone: bool,
}

impl ConvergenceStudy {
    pub fn from_errors(spacings: Vec<f64>, errors: Vec<f64>) -> Self {
        let orders = spacings
            .windows(2)
            .zip(errors.windows(2))
            .map(|(h, e)| libm::log(e[0] / e[1]) / libm::log(h[0] / h[1]))
            .collect();
        let monotone = errors.windows(2).all(|e| e[1] < e[0]);
        Self {
            spacings,
            errors,
            orders,
            monotone,
        }
    }

    /// Monotone, with every observed order inside `[lo, hi]`.
    pub fn orders_within(&self, lo: f64, hi: f64) -> bool {
        self.monotone && self.orders.iter().all(|p| (lo..=hi).contains(p))
    }
}

fn check_refinement(grids: &[ContourGrid]) -> Result<()> {
    if grids.len() < 3 {
        return Err(Error::InvalidGrid("a convergence study needs at least three grids"));
    }
    if grids.windows(2).any(|g| g[1].spacing() >= g[0].spacing()) {
        return Err(Error::InvalidGrid("grids must be ordered from coarse to fine"));
    }
    Ok(())
}

/// `|E_c/m - reference|` from self-consistent solves on each grid, where
/// `E_c = sign(E) sqrt(lambda + m^2)` uses the complex tracked eigenvalue.
pub fn convergence_study(
    model: Model,
    channel: &Channel,
    state: &PrincipalState,
    couplings: &Couplings,
    reference: f64,
    grids: &[ContourGrid],
    initial_guess: f64,
) -> Result<ConvergenceStudy> {
    check_refinement(grids)?;
    validate_guess(initial_guess, 1.0)?;
    let params = qnum::effective_params(model, channel, state, couplings)?;
    let mut errors = Vec::with_capacity(grids.len());
    for grid in grids {
        let sol = fixed_point(&params, couplings, grid, initial_guess, 1.0)?;
        errors.push((sol.complex_energy(couplings.m) / couplings.m - reference).norm());
    }
    Ok(ConvergenceStudy::from_errors(
        grids.iter().map(ContourGrid::spacing).collect(),
        errors,
    ))
}

/// `|lambda - exact|` for the eigenvalue of a fixed operator nearest `exact`.
pub fn operator_convergence_study(
    op: &RadialOperator,
    exact: Complex,
    grids: &[ContourGrid],
) -> Result<ConvergenceStudy> {
    check_refinement(grids)?;
    let mut errors = Vec::with_capacity(grids.len());
    for grid in grids {
        let found = tracked_eigenvalue(&op.discretize(grid)?, exact)?;
        errors.push((found.value - exact).norm());
    }
    Ok(ConvergenceStudy::from_errors(
        grids.iter().map(ContourGrid::spacing).collect(),
        errors,
    ))
}

/// `|U(rho_max e^(i angle))| / max_rho |U(rho e^(i angle))|` sampled at
/// `samples` equally spaced points of the ray.
pub fn contour_decay(f: &RadialEigenfunction, grid: &ContourGrid, samples: usize) -> f64 {
    let ray = Complex::from_polar(1.0, grid.angle);
    let samples = samples.max(2);
    let peak = (1..=samples)
        .map(|k| f.value(ray * (grid.rho_max * k as f64 / samples as f64)).norm())
        .fold(0.0, f64::max);
    let tail = f.value(ray * grid.rho_max).norm();
    if peak == 0.0 {
        0.0
    } else {
        tail / peak
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::build_eigenfunction;

    fn case2() -> (Channel, PrincipalState, Couplings) {
        let ch = Channel::new(1, -1).unwrap();
        let st = PrincipalState::new(1, &ch).unwrap();
        (ch, st, Couplings::new(0.0, 0.6).unwrap())
    }

    #[test]
    fn grid_validation() {
        assert!(ContourGrid::new(99, 10.0, 0.0).is_err());
        assert!(ContourGrid::new(100, 0.0, 0.0).is_err());
        assert!(ContourGrid::new(100, 10.0, 2.0).is_err());
        let g = ContourGrid::new(999, 10.0, -FRAC_PI_4).unwrap();
        assert_eq!(g.spacing(), 0.01);
    }

    #[test]
    fn matrix_is_symmetric_tridiagonal() {
        let (ch, st, c) = case2();
        let grid = ContourGrid::new(200, 40.0, -FRAC_PI_4).unwrap();
        let t = discretize(Model::Dirac, &ch, &st, &c, 1.25, &grid).unwrap();
        assert_eq!(t.dim(), 201);
        let dense = t.to_dense();
        for i in 0..t.dim() {
            for j in 0..t.dim() {
                assert_eq!(dense[(i, j)], dense[(j, i)]);
                if i.abs_diff(j) > 1 {
                    assert_eq!(dense[(i, j)], Complex::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn rejects_vanishing_coulomb_coefficient() {
        let ch = Channel::new(1, -1).unwrap();
        let st = PrincipalState::new(1, &ch).unwrap();
        let c = Couplings::new(0.0, 0.0).unwrap();
        let grid = ContourGrid::new(200, 40.0, 0.0).unwrap();
        assert_eq!(
            discretize(Model::Dirac, &ch, &st, &c, 1.0, &grid),
            Err(Error::NoDiscreteSpectrum)
        );
    }

    #[test]
    fn hermitian_coulomb_ground_state() {
        // -u'' - 2u/r has ground state -1.
        let op = RadialOperator::new(0.0, Complex::new(2.0, 0.0)).unwrap();
        let grid = ContourGrid::new(2000, 40.0, 0.0).unwrap();
        let found = tracked_eigenvalue(&op.discretize(&grid).unwrap(), Complex::new(-0.9, 0.0)).unwrap();
        assert!((found.value + 1.0).norm() < 1e-4, "{}", found.value);
    }

    #[test]
    fn case2_eigenvalue_at_moderate_resolution() {
        let (ch, st, c) = case2();
        let grid = ContourGrid::new(2000, 40.0, -FRAC_PI_4).unwrap();
        let t = discretize(Model::Dirac, &ch, &st, &c, 1.25, &grid).unwrap();
        let found = tracked_eigenvalue(&t, Complex::new(0.5625, 0.0)).unwrap();
        assert!((found.value - 0.5625).norm() < 1e-3 * 0.5625);
    }

    #[test]
    fn tracking_rejects_distant_prediction() {
        let op = RadialOperator::new(0.0, Complex::new(2.0, 0.0)).unwrap();
        let grid = ContourGrid::new(400, 40.0, 0.0).unwrap();
        let t = op.discretize(&grid).unwrap();
        // Nearest level to -0.6 is -1 or -1/4, both outside 0.5 * 0.6... the
        // closer is -0.25 at distance 0.35 > 0.3.
        let err = tracked_eigenvalue(&t, Complex::new(-0.6, 0.0)).unwrap_err();
        assert!(matches!(err, Error::LostTracking { .. }));
    }

    #[test]
    fn case2_both_branches() {
        let (ch, st, c) = case2();
        let p = qnum::effective_params(Model::Dirac, &ch, &st, &c).unwrap();
        let grid = ContourGrid::default_for(&p, 0.6, 2000).unwrap();
        for target in [1.25, -1.25] {
            let r = self_consistent_energy(Model::Dirac, &ch, &st, &c, &grid, target * 1.05, 1.0).unwrap();
            assert_eq!(r.outer_iterations, 1);
            assert!((r.energy_ratio - target).abs() < 1e-3, "{}", r.energy_ratio);
        }
    }

    #[test]
    fn case3_self_consistent() {
        let ch = Channel::new(1, -1).unwrap();
        let st = PrincipalState::new(1, &ch).unwrap();
        let c = Couplings::new(0.5, 0.5).unwrap();
        let p = qnum::effective_params(Model::Dirac, &ch, &st, &c).unwrap();
        let grid = ContourGrid::default_for(&p, c.coulomb_coefficient(5.0 / 3.0), 2000).unwrap();
        let r = self_consistent_energy(Model::Dirac, &ch, &st, &c, &grid, 1.6, 1.0).unwrap();
        assert!(r.outer_iterations > 1);
        assert!((r.energy_ratio - 5.0 / 3.0).abs() < 1e-3);
        assert!((r.lambda - 16.0 / 9.0).norm() < 1e-3);
    }

    #[test]
    fn guard_on_inputs() {
        let (ch, st, c) = case2();
        let grid = ContourGrid::new(200, 40.0, -FRAC_PI_4).unwrap();
        assert!(self_consistent_energy(Model::Dirac, &ch, &st, &c, &grid, 0.0, 1.0).is_err());
        assert!(self_consistent_energy(Model::Dirac, &ch, &st, &c, &grid, 1.2, 0.0).is_err());
        assert!(convergence_study(Model::Dirac, &ch, &st, &c, 1.25, &[grid, grid], 1.2).is_err());
    }

    #[test]
    fn analytic_solution_decays_on_default_contour() {
        let (ch, st, c) = case2();
        let p = qnum::effective_params(Model::Dirac, &ch, &st, &c).unwrap();
        let f = build_eigenfunction(Model::Dirac, &ch, &st, &c, 1.25).unwrap();
        let grid = ContourGrid::default_for(&p, 0.6, 2000).unwrap();
        assert!(contour_decay(&f, &grid, 2000) < 1e-10);
        let wrong = ContourGrid::new(2000, grid.rho_max, -grid.angle).unwrap();
        assert!(contour_decay(&f, &wrong, 2000) == 1.0);
    }
}
