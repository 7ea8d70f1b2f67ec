use alloc::vec;
use alloc::vec::Vec;

use super::ComplexMatrix;
use crate::{Complex, Error, Result};

/// Complex symmetric (not Hermitian) tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTridiagonal {
    pub diag: Vec<Complex>,
    /// `off[k]` couples rows `k` and `k + 1`.
    pub off: Vec<Complex>,
}

/// Eigenvalue found by shift-invert iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestEigen {
    pub value: Complex,
    /// `||T x - value x||` for the unit-norm iterate `x`.
    pub residual: f64,
    pub iterations: usize,
}

/// LU factors of a tridiagonal matrix with partial pivoting (LAPACK `gttrf`
/// layout).
struct TridiagonalLu {
    dl: Vec<Complex>,
    d: Vec<Complex>,
    du: Vec<Complex>,
    du2: Vec<Complex>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(mut dl: Vec<Complex>, mut d: Vec<Complex>, mut du: Vec<Complex>, floor: f64) -> Self {
        let n = d.len();
        let zero = Complex::new(0.0, 0.0);
        let mut du2 = vec![zero; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].l1_norm() >= dl[i].l1_norm() {
                if d[i] == zero {
                    // Exact shift on an eigenvalue: nudge the pivot.
                    d[i] = Complex::new(floor, 0.0);
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                let t = fact * du[i];
                d[i + 1] -= t;
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if let Some(last) = d.last_mut() {
            if *last == zero {
                *last = Complex::new(floor, 0.0);
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [Complex]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                let t = self.dl[i] * b[i];
                b[i + 1] -= t;
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn norm2(v: &[Complex]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

impl SymmetricTridiagonal {
    pub fn new(diag: Vec<Complex>, off: Vec<Complex>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::BadMatrix);
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                self.diag[i]
            } else if j == i + 1 {
                self.off[i]
            } else if i == j + 1 {
                self.off[j]
            } else {
                Complex::new(0.0, 0.0)
            }
        })
    }

    pub fn apply(&self, x: &[Complex], out: &mut [Complex]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            out[i] = acc;
        }
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].norm();
                if i > 0 {
                    s += self.off[i - 1].norm();
                }
                if i + 1 < n {
                    s += self.off[i].norm();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    fn factor_shifted(&self, shift: Complex) -> TridiagonalLu {
        let d = self.diag.iter().map(|z| z - shift).collect();
        let floor = f64::EPSILON * self.norm_inf().max(f64::MIN_POSITIVE);
        TridiagonalLu::factor(self.off.clone(), d, self.off.clone(), floor)
    }

    /// Rayleigh quotient of a unit vector. The symmetric (unconjugated)
    /// quotient `x^T T x / x^T x` is used when `x^T x` is not tiny, since left
    /// and right eigenvectors of a complex symmetric matrix coincide.
    fn rayleigh(&self, x: &[Complex], tx: &[Complex]) -> Complex {
        let sym: Complex = x.iter().map(|z| z * z).sum();
        if sym.norm() > 1e-8 {
            x.iter().zip(tx).map(|(a, b)| a * b).sum::<Complex>() / sym
        } else {
            x.iter().zip(tx).map(|(a, b)| a.conj() * b).sum()
        }
    }

    /// Eigenvalue closest to `shift`, by inverse iteration with the fixed
    /// shift followed by a few guarded Rayleigh-quotient refinements.
    pub fn nearest_eigenvalue(&self, shift: Complex) -> Result<NearestEigen> {
        const MAX_ITER: usize = 2000;
        let n = self.dim();
        let tol = 64.0 * f64::EPSILON * self.norm_inf();
        let lu = self.factor_shifted(shift);
        let mut x = vec![Complex::new(1.0 / libm::sqrt(n as f64), 0.0); n];
        let mut tx = vec![Complex::new(0.0, 0.0); n];
        let mut theta = shift;
        let mut residual = f64::INFINITY;
        let mut iterations = 0;
        let mut stalled = 0;
        while iterations < MAX_ITER {
            iterations += 1;
            lu.solve(&mut x);
            let nx = norm2(&x);
            x.iter_mut().for_each(|z| *z /= nx);
            self.apply(&x, &mut tx);
            let next = self.rayleigh(&x, &tx);
            residual = libm::sqrt(x.iter().zip(&tx).map(|(a, b)| (b - next * a).norm_sqr()).sum());
            let change = (next - theta).norm();
            theta = next;
            if residual <= tol {
                break;
            }
            stalled = if change <= 4.0 * f64::EPSILON * theta.norm().max(f64::MIN_POSITIVE) {
                stalled + 1
            } else {
                0
            };
            if stalled >= 3 {
                break;
            }
        }
        if residual > 1e-6 * self.norm_inf() {
            return Err(Error::NotConverged {
                iterations,
                last_change: residual,
            });
        }
        // Refine with shifted solves, accepting only steps that lower the
        // residual without wandering off the located eigenvalue.
        for _ in 0..3 {
            if residual <= tol {
                break;
            }
            let mut y = x.clone();
            self.factor_shifted(theta).solve(&mut y);
            let ny = norm2(&y);
            if !ny.is_finite() || ny == 0.0 {
                break;
            }
            y.iter_mut().for_each(|z| *z /= ny);
            let mut ty = vec![Complex::new(0.0, 0.0); n];
            self.apply(&y, &mut ty);
            let cand = self.rayleigh(&y, &ty);
            let res = libm::sqrt(y.iter().zip(&ty).map(|(a, b)| (b - cand * a).norm_sqr()).sum());
            if res < residual && (cand - theta).norm() <= 2.0 * residual {
                x = y;
                theta = cand;
                residual = res;
            } else {
                break;
            }
        }
        Ok(NearestEigen {
            value: theta,
            residual,
            iterations,
        })
    }
}
