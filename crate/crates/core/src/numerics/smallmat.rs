//! Dense symmetric linear algebra for small matrices (dimension ≤ 8):
//! Cholesky factorization, triangular solves, Jacobi eigenvalues, and the
//! smallest eigenvalue of a definite pencil (A, B).

/// Cholesky factor L (row-major lower triangle, full n×n storage) of an SPD
/// matrix, or `None` if the matrix is not positive definite.
pub fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Solves L y = b (forward substitution).
pub fn forward_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    y
}

/// Solves Lᵀ x = y (backward substitution).
pub fn backward_solve_t(l: &[f64], n: usize, y: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    x
}

/// Solves A x = b given the Cholesky factor of A.
pub fn chol_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    backward_solve_t(l, n, &forward_solve(l, n, b))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn sym_eigvals(a_in: &[f64], n: usize) -> Vec<f64> {
    let mut a = a_in.to_vec();
    for _sweep in 0..64 {
        let mut offdiag = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                offdiag += a[p * n + q].abs();
            }
        }
        if offdiag < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (a[q * n + q] - a[p * n + p]) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Smallest generalized eigenvalue of A y = λ B y with B SPD, via the
/// congruence M = L⁻¹ A L⁻ᵀ (B = LLᵀ). Returns `None` if B is not SPD.
pub fn pencil_min_eig(a: &[f64], b: &[f64], n: usize) -> Option<f64> {
    let l = cholesky(b, n)?;
    // Columns of C = A L⁻ᵀ: solve Lᵀ row-wise, i.e. C = A · L⁻ᵀ means
    // Cᵀ = L⁻¹ Aᵀ = L⁻¹ A, so compute column j of L⁻¹A then apply again.
    let mut m = vec![0.0; n * n];
    // X = L⁻¹ A (A symmetric): forward-solve each column of A.
    let mut x = vec![0.0; n * n];
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| a[i * n + j]).collect();
        let sol = forward_solve(&l, n, &col);
        for i in 0..n {
            x[i * n + j] = sol[i];
        }
    }
    // M = X L⁻ᵀ = (L⁻¹ Xᵀ)ᵀ: forward-solve each row of X.
    for i in 0..n {
        let row: Vec<f64> = (0..n).map(|j| x[i * n + j]).collect();
        let sol = forward_solve(&l, n, &row);
        for j in 0..n {
            m[i * n + j] = sol[j];
        }
    }
    // Symmetrize against roundoff before the Jacobi sweep.
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = avg;
            m[j * n + i] = avg;
        }
    }
    Some(sym_eigvals(&m, n)[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cholesky_solve_roundtrip() {
        let a = [4.0, 1.0, 1.0, 3.0];
        let l = cholesky(&a, 2).unwrap();
        let x = chol_solve(&l, 2, &[1.0, 2.0]);
        // A x should reproduce b.
        assert_abs_diff_eq!(4.0 * x[0] + x[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[0] + 3.0 * x[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = [1.0, 2.0, 2.0, 1.0];
        assert!(cholesky(&a, 2).is_none());
    }

    #[test]
    fn jacobi_eigenvalues_2x2() {
        let a = [2.0, 1.0, 1.0, 2.0];
        let ev = sym_eigvals(&a, 2);
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn pencil_reduces_to_standard_for_identity_b() {
        let a = [2.0, 1.0, 1.0, 2.0];
        let b = [1.0, 0.0, 0.0, 1.0];
        assert_abs_diff_eq!(pencil_min_eig(&a, &b, 2).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pencil_scales_with_b() {
        // A y = λ B y with B = 4I halves... quarters the eigenvalues.
        let a = [2.0, 1.0, 1.0, 2.0];
        let b = [4.0, 0.0, 0.0, 4.0];
        assert_abs_diff_eq!(pencil_min_eig(&a, &b, 2).unwrap(), 0.25, epsilon = 1e-12);
    }
}
