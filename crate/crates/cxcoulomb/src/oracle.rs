//! Eigenvalue oracle independent of the QR kernel: the characteristic
//! polynomial by the Leverrier-Faddeev recursion, its roots by Aberth
//! iteration with a Newton polish, and optimal pairing of two eigenvalue
//! lists by the Hungarian algorithm.

use cxcoulomb_core::eigensolve::ComplexMatrix;
use cxcoulomb_core::Complex;

fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| a[(i, k)] * b[(k, j)]).sum())
}

/// Coefficients `c` of the monic characteristic polynomial
/// `det(z I - A) = z^n + c[0] z^(n-1) + ... + c[n-1]`.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Vec<Complex> {
    let n = a.dim();
    let mut coeffs = Vec::with_capacity(n);
    // M_1 = I, c_1 = -tr(A); M_k = A M_(k-1) + c_(k-1) I, c_k = -tr(A M_k) / k.
    let mut m = ComplexMatrix::identity(n);
    for k in 1..=n {
        let am = matmul(a, &m);
        let c = -am.trace() / k as f64;
        coeffs.push(c);
        m = am;
        for i in 0..n {
            m[(i, i)] += c;
        }
    }
    coeffs
}

/// `(p(z), p'(z))` for the monic polynomial with coefficients `coeffs`.
fn horner(coeffs: &[Complex], z: Complex) -> (Complex, Complex) {
    let mut p = Complex::new(1.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of the monic polynomial `z^n + c[0] z^(n-1) + ... + c[n-1]`.
pub fn polynomial_roots(coeffs: &[Complex]) -> Vec<Complex> {
    const MAX_SWEEPS: usize = 500;
    let n = coeffs.len();
    if n == 0 {
        return Vec::new();
    }
    // Roots lie inside the Cauchy radius 1 + max |c_k|.
    let radius = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let centre = -coeffs[0] / n as f64;
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            centre + Complex::from_polar(0.5 * radius, angle)
        })
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut largest_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = horner(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                largest_step = largest_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if largest_step < 1e-15 {
            break;
        }
    }
    for root in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *root);
            if dp.norm() == 0.0 {
                break;
            }
            let next = *root - p / dp;
            if horner(coeffs, next).0.norm() < p.norm() {
                *root = next;
            } else {
                break;
            }
        }
    }
    z
}

/// Eigenvalues of `a` via its characteristic polynomial.
pub fn eigenvalues(a: &ComplexMatrix) -> Vec<Complex> {
    polynomial_roots(&characteristic_polynomial(a))
}

/// Assignment minimizing the total cost of the square matrix `cost`
/// (`cost[i][j]` for row `i`, column `j`). Returns the column of each row.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    // Potentials and matching with 1-based sentinel column 0.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        if row_of[j] > 0 {
            assignment[row_of[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Largest distance between paired entries of `a` and `b` under the pairing
/// minimizing the summed distance. `None` if the lengths differ.
pub fn paired_distance(a: &[Complex], b: &[Complex]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let cost: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let assignment = hungarian(&cost);
    Some(
        assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| cost[i][j])
            .fold(0.0, f64::max),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn polynomial_of_a_two_by_two() {
        // [[1, 2], [3, 4]]: z^2 - 5z - 2
        let a = ComplexMatrix::new(2, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        let p = characteristic_polynomial(&a);
        assert_eq!(p, vec![c(-5.0, 0.0), c(-2.0, 0.0)]);
    }

    #[test]
    fn roots_of_known_polynomials() {
        // (z - 1)(z + 2)(z - i) = z^3 + (1 - i) z^2 + (-2 - i) z + 2i
        let roots = polynomial_roots(&[c(1.0, -1.0), c(-2.0, -1.0), c(0.0, 2.0)]);
        let want = [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0)];
        assert!(paired_distance(&roots, &want).unwrap() < 1e-13);
        assert!(polynomial_roots(&[]).is_empty());
    }

    #[test]
    fn companion_roundtrip() {
        let coeffs = [c(0.3, 0.1), c(-1.0, 0.0), c(0.0, 0.5), c(2.0, -1.0)];
        let m = ComplexMatrix::companion(&coeffs);
        let back = characteristic_polynomial(&m);
        for (x, y) in back.iter().zip(&coeffs) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn hungarian_finds_the_cheapest_assignment() {
        let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        let a = hungarian(&cost);
        let total: f64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        assert_eq!(total, 5.0);
        let mut cols = a.clone();
        cols.sort_unstable();
        assert_eq!(cols, vec![0, 1, 2]);
    }

    #[test]
    fn pairing_ignores_order() {
        let a = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 1.0)];
        let b = [c(3.0, 1.0), c(1.0, 1e-9), c(2.0, 0.0)];
        assert!(paired_distance(&a, &b).unwrap() <= 1e-9);
        assert_eq!(paired_distance(&a, &b[..2]), None);
    }
}
