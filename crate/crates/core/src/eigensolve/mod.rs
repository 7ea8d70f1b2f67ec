//! Dense complex eigenvalue kernel (balancing, Householder reduction to
//! Hessenberg form, single-shift complex QR) and a shift-invert solver for
//! complex symmetric tridiagonal matrices.
//!
//! Only eigenvalues are computed.

mod qr;
mod tridiagonal;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{Complex, Error, Result};

pub use qr::{balance, hessenberg_reduce, qr_eigenvalues, QrConfig};
pub use tridiagonal::{NearestEigen, SymmetricTridiagonal};

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<Complex>) -> Result<Self> {
        if data.len() != n * n || data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::BadMatrix);
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| Complex::new(if i == j { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Companion matrix of the monic polynomial with coefficients
    /// `z^n + c[0] z^(n-1) + ... + c[n-1]`.
    pub fn companion(coeffs: &[Complex]) -> Self {
        let n = coeffs.len();
        Self::from_fn(n, |i, j| {
            if i == 0 {
                -coeffs[j]
            } else if i == j + 1 {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn trace(&self) -> Complex {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn is_upper_hessenberg(&self) -> bool {
        (0..self.n).all(|i| (0..i.saturating_sub(1)).all(|j| self[(i, j)] == Complex::new(0.0, 0.0)))
    }

    /// `D^-1 A D` for a diagonal `D`.
    pub fn diagonal_similarity(&self, d: &[f64]) -> Self {
        Self::from_fn(self.n, |i, j| self[(i, j)] * (d[j] / d[i]))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.n + j]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub eigenvalues: Vec<Complex>,
    pub iterations: usize,
    pub converged: bool,
}

/// Balance, reduce to Hessenberg form and run the shifted QR iteration.
pub fn eigenvalues(a: &ComplexMatrix) -> EigenResult {
    eigenvalues_with(a, &QrConfig::default())
}

pub fn eigenvalues_with(a: &ComplexMatrix, config: &QrConfig) -> EigenResult {
    let h = hessenberg_reduce(&balance(a));
    qr_eigenvalues(&h, config)
}

/// Determinant by LU factorization with partial pivoting.
pub fn determinant(a: &ComplexMatrix) -> Complex {
    let n = a.dim();
    let mut lu = a.clone();
    let mut det = Complex::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&x, &y| lu[(x, k)].norm().total_cmp(&lu[(y, k)].norm()))
            .unwrap_or(k);
        if lu[(pivot, k)].norm() == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        if pivot != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = t;
            }
            det = -det;
        }
        let d = lu[(k, k)];
        det *= d;
        for i in k + 1..n {
            let f = lu[(i, k)] / d;
            for j in k + 1..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
        }
    }
    det
}
