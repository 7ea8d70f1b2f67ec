//! The similarity transformation `S = a + i b beta (alpha . r_hat)` that
//! decouples the radial Dirac system.
//!
//! Only `cosh(theta)` and `sinh(theta)` enter the radial equations; `theta`
//! itself is never formed. `(a, b)` are fixed up to scale, and the scale is
//! pinned by `a^2 - b^2 = 1` with `a` on the principal square-root branch.

use crate::qnum::{Channel, Couplings};
use crate::{tol, Complex, Error, Result, I};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParams {
    pub sinh_theta: Complex,
    pub cosh_theta: Complex,
    pub a: Complex,
    pub b: Complex,
}

impl BoostParams {
    /// The identity transformation (`a = 1`, `b = 0`).
    pub fn identity() -> Self {
        Self {
            sinh_theta: Complex::new(0.0, 0.0),
            cosh_theta: Complex::new(1.0, 0.0),
            a: Complex::new(1.0, 0.0),
            b: Complex::new(0.0, 0.0),
        }
    }

    /// Parameters from given `cosh`/`sinh`, recovering `(a, b)` under
    /// `a^2 - b^2 = 1`.
    pub fn from_hyperbolic(cosh_theta: Complex, sinh_theta: Complex) -> Self {
        let a = ((cosh_theta + 1.0) / 2.0).sqrt();
        let b = sinh_theta / (a * 2.0);
        Self {
            sinh_theta,
            cosh_theta,
            a,
            b,
        }
    }

    /// `cosh^2 - sinh^2`, which is 1 for a consistent parameter set.
    pub fn hyperbolic_norm(&self) -> Complex {
        self.cosh_theta * self.cosh_theta - self.sinh_theta * self.sinh_theta
    }
}

/// Boost parameters that remove the `1/r` part of `xi_1` and turn the
/// `1/r` coefficient of the upper-component equation into `1 + omega gamma`.
///
/// ```text
/// sinh = -i omega (A1 gamma - |K| A2) / (K^2 + A1^2)
/// cosh =          (|K| gamma + A1 A2) / (K^2 + A1^2)
/// ```
pub fn solve_theta(channel: &Channel, couplings: &Couplings, gamma: f64) -> BoostParams {
    let k = channel.abs_kappa();
    let (a1, a2) = (couplings.a1, couplings.a2);
    let denom = k * k + a1 * a1;
    let omega = f64::from(channel.omega());
    let sinh = -I * omega * (a1 * gamma - k * a2) / denom;
    let cosh = Complex::new((k * gamma + a1 * a2) / denom, 0.0);
    BoostParams::from_hyperbolic(cosh, sinh)
}

/// Residuals of the two conditions fixing `theta`:
/// `-i A2 + i A1 cosh + K sinh` and `K cosh + i A1 sinh - omega gamma`.
pub fn constraint_residuals(
    params: &BoostParams,
    channel: &Channel,
    couplings: &Couplings,
    gamma: f64,
) -> (Complex, Complex) {
    let k = f64::from(channel.kappa());
    let (a1, a2) = (couplings.a1, couplings.a2);
    let (c, s) = (params.cosh_theta, params.sinh_theta);
    let first = -I * a2 + I * a1 * c + s * k;
    let second = c * k + I * a1 * s - f64::from(channel.omega()) * gamma;
    (first, second)
}

/// Coefficients of the coupled first-order radial system
///
/// ```text
/// [d/dr + lhs5_over_r / r + lhs5_const] R = xi_1(r) Q
/// [d/dr + lhs6_over_r / r + lhs6_const] Q = xi_2(r) R
/// xi_i(r) = xi_i_const + xi_i_over_r / r
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialCoeffs {
    pub xi1_const: Complex,
    pub xi1_over_r: Complex,
    pub xi2_const: Complex,
    pub xi2_over_r: Complex,
    pub lhs5_over_r: Complex,
    pub lhs5_const: Complex,
    pub lhs6_over_r: Complex,
    pub lhs6_const: Complex,
}

impl RadialCoeffs {
    pub fn xi1(&self, r: f64) -> Complex {
        self.xi1_const + self.xi1_over_r / r
    }

    pub fn xi2(&self, r: f64) -> Complex {
        self.xi2_const + self.xi2_over_r / r
    }
}

pub fn radial_coeffs(params: &BoostParams, channel: &Channel, couplings: &Couplings, energy: f64) -> RadialCoeffs {
    let k = f64::from(channel.kappa());
    let (a1, a2, m) = (couplings.a1, couplings.a2, couplings.m);
    let (c, s) = (params.cosh_theta, params.sinh_theta);
    let spin_orbit = c * k + I * a1 * s;
    RadialCoeffs {
        xi1_const: c * energy + m,
        xi1_over_r: -I * a2 + I * a1 * c + s * k,
        xi2_const: -c * energy + m,
        xi2_over_r: -I * a2 - I * a1 * c - s * k,
        lhs5_over_r: spin_orbit + 1.0,
        lhs5_const: s * energy,
        lhs6_over_r: -spin_orbit + 1.0,
        lhs6_const: -s * energy,
    }
}

/// A dense 4x4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4(pub [[Complex; 4]; 4]);

impl Mat4 {
    pub fn zero() -> Self {
        Self([[Complex::new(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn scale(&self, factor: Complex) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= factor);
        out
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

impl core::ops::Add for Mat4 {
    type Output = Mat4;
    fn add(mut self, rhs: Mat4) -> Mat4 {
        for (x, y) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *x += y;
        }
        self
    }
}

impl core::ops::Sub for Mat4 {
    type Output = Mat4;
    fn sub(self, rhs: Mat4) -> Mat4 {
        self + rhs.scale(Complex::new(-1.0, 0.0))
    }
}

impl core::ops::Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

/// Dirac matrices in the standard (Dirac) representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMatrices {
    pub alpha: [Mat4; 3],
    pub beta: Mat4,
}

impl DiracMatrices {
    pub fn standard() -> Self {
        let o = Complex::new(0.0, 0.0);
        let one = Complex::new(1.0, 0.0);
        let pauli = [
            [[o, one], [one, o]],
            [[o, -I], [I, o]],
            [[one, o], [o, -one]],
        ];
        let alpha = pauli.map(|sigma| {
            // [[0, sigma], [sigma, 0]]
            let mut m = Mat4::zero();
            for r in 0..2 {
                for c in 0..2 {
                    m.0[r][c + 2] = sigma[r][c];
                    m.0[r + 2][c] = sigma[r][c];
                }
            }
            m
        });
        let mut beta = Mat4::identity();
        beta.0[2][2] = -one;
        beta.0[3][3] = -one;
        Self { alpha, beta }
    }

    /// `alpha . r_hat`.
    pub fn alpha_dot(&self, r_hat: [f64; 3]) -> Mat4 {
        self.alpha
            .iter()
            .zip(r_hat)
            .fold(Mat4::zero(), |acc, (a, x)| acc + a.scale(Complex::new(x, 0.0)))
    }
}

/// `S = a + i b beta (alpha . r_hat)` and `S^-1 = (a - i b beta (alpha . r_hat)) / (a^2 - b^2)`.
pub fn build_s(a: Complex, b: Complex, r_hat: [f64; 3]) -> Result<(Mat4, Mat4)> {
    let det = a * a - b * b;
    if det.norm() < tol::SINGULAR_TRANSFORM {
        return Err(Error::SingularTransform { determinant: det.norm() });
    }
    let dm = DiracMatrices::standard();
    let x = dm.beta * dm.alpha_dot(r_hat);
    let id = Mat4::identity();
    let s = id.scale(a) + x.scale(I * b);
    let s_inv = (id.scale(a) - x.scale(I * b)).scale(det.inv());
    Ok((s, s_inv))
}
