use alloc::vec;
use alloc::vec::Vec;

use super::{ComplexMatrix, EigenResult};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrConfig {
    /// QR sweeps allowed per eigenvalue before giving up.
    pub max_iter_per_eig: usize,
    /// A subdiagonal entry is zeroed once it drops below
    /// `deflation * (|h[k-1,k-1]| + |h[k,k]|)`.
    pub deflation: f64,
}

impl Default for QrConfig {
    fn default() -> Self {
        Self {
            max_iter_per_eig: 60,
            deflation: f64::EPSILON,
        }
    }
}

fn abs1(z: Complex) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity by powers of two that equalizes row and column norms.
pub fn balance(a: &ComplexMatrix) -> ComplexMatrix {
    const RADIX: f64 = 2.0;
    let n = a.dim();
    let mut b = a.clone();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut col, mut row) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                col += abs1(b[(j, i)]);
                row += abs1(b[(i, j)]);
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut g = row / RADIX;
            while col < g {
                f *= RADIX;
                col *= RADIX * RADIX;
            }
            g = row * RADIX;
            while col > g {
                f /= RADIX;
                col /= RADIX * RADIX;
            }
            if (col + row) / f < 0.95 * total {
                done = false;
                for j in 0..n {
                    b[(i, j)] /= f;
                    b[(j, i)] *= f;
                }
            }
        }
    }
    b
}

/// Unitary reduction to upper Hessenberg form by Householder reflections.
pub fn hessenberg_reduce(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    let mut v = vec![Complex::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let norm = libm::sqrt((k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum());
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // H <- (I - tau v v^H) H
        for j in k..n {
            let dot: Complex = (k + 1..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            let f = dot * tau;
            for i in k + 1..n {
                let t = v[i] * f;
                h[(i, j)] -= t;
            }
        }
        // H <- H (I - tau v v^H)
        for i in 0..n {
            let dot: Complex = (k + 1..n).map(|j| h[(i, j)] * v[j]).sum();
            let f = dot * tau;
            for j in k + 1..n {
                let t = f * v[j].conj();
                h[(i, j)] -= t;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex::new(0.0, 0.0);
        }
    }
    h
}

/// Eigenvalue of the 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Single-shift complex QR iteration with deflation on an upper Hessenberg
/// matrix. On failure the eigenvalues found so far are returned with
/// `converged = false`; unconverged slots hold the current diagonal.
pub fn qr_eigenvalues(h: &ComplexMatrix, config: &QrConfig) -> EigenResult {
    let n = h.dim();
    let mut h = h.clone();
    let mut eig = vec![Complex::new(0.0, 0.0); n];
    let mut iterations = 0;
    if n == 0 {
        return EigenResult {
            eigenvalues: eig,
            iterations,
            converged: true,
        };
    }
    let mut hi = n - 1;
    let mut its = 0;
    let mut rotations: Vec<(Complex, Complex)> = Vec::with_capacity(n);
    loop {
        // Look for a negligible subdiagonal entry.
        let mut lo = hi;
        while lo > 0 {
            let scale = abs1(h[(lo - 1, lo - 1)]) + abs1(h[(lo, lo)]);
            let sub = abs1(h[(lo, lo - 1)]);
            if sub <= config.deflation * scale || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = Complex::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            if hi == 0 {
                break;
            }
            hi -= 1;
            its = 0;
            continue;
        }
        if its >= config.max_iter_per_eig {
            for k in 0..=hi {
                eig[k] = h[(k, k)];
            }
            return EigenResult {
                eigenvalues: eig,
                iterations,
                converged: false,
            };
        }

        let shift = if its > 0 && its % 10 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex::new(0.75 * abs1(h[(hi, hi - 1)]), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        rotations.clear();
        for k in lo..hi {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = libm::hypot(x.norm(), y.norm());
            let (c, s) = if r == 0.0 {
                (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let (t1, t2) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = c.conj() * t1 + s.conj() * t2;
                h[(k + 1, j)] = -s * t1 + c * t2;
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in lo..=(k + 2).min(hi) {
                let (t1, t2) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = t1 * c + t2 * s;
                h[(i, k + 1)] = -t1 * s.conj() + t2 * c.conj();
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
        its += 1;
        iterations += 1;
    }
    EigenResult {
        eigenvalues: eig,
        iterations,
        converged: true,
    }
}
