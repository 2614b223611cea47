//! Finite-difference weights on arbitrary node sets (Fornberg's algorithm).

/// Weights for approximating derivatives at `x0` from samples at `xs`.
///
/// Returns `w` with `w[k][j]` such that `f^(k)(x0) ≈ Σ_j w[k][j]·f(xs[j])`
/// for `k = 0..=max_order`. The weights are exact for polynomials of degree
/// `xs.len() - 1`, so a five-point stencil yields fourth-order first and
/// second derivatives on smoothly varying meshes.
pub fn fd_weights(x0: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    assert!(n > max_order, "need more nodes than the derivative order");
    let m = max_order;
    // c[j][k]: weight of node j for derivative k, built incrementally.
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    // Transpose into per-derivative rows.
    (0..=m)
        .map(|k| (0..n).map(|j| c[j][k]).collect())
        .collect()
}

/// Convenience: first and second derivative of tabulated values at `x0`
/// using the full stencil `xs`/`fs`.
pub fn differentiate_2(x0: f64, xs: &[f64], fs: &[f64]) -> (f64, f64) {
    debug_assert_eq!(xs.len(), fs.len());
    let w = fd_weights(x0, xs, 2);
    let d1 = w[1].iter().zip(fs).map(|(wi, fi)| wi * fi).sum();
    let d2 = w[2].iter().zip(fs).map(|(wi, fi)| wi * fi).sum();
    (d1, d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_on_polynomials() {
        // f(x) = 3x^4 - 2x^3 + x - 5 on an irregular stencil.
        let xs = [0.1, 0.35, 0.4, 0.7, 1.1];
        let f = |x: f64| 3.0 * x.powi(4) - 2.0 * x.powi(3) + x - 5.0;
        let fp = |x: f64| 12.0 * x.powi(3) - 6.0 * x.powi(2) + 1.0;
        let fpp = |x: f64| 36.0 * x.powi(2) - 12.0 * x;
        let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let x0 = 0.4;
        let (d1, d2) = differentiate_2(x0, &xs, &fs);
        assert_abs_diff_eq!(d1, fp(x0), epsilon = 1e-10);
        assert_abs_diff_eq!(d2, fpp(x0), epsilon = 1e-9);
    }

    #[test]
    fn interpolation_row_sums_to_one() {
        let xs = [-1.0, 0.0, 2.0, 3.5];
        let w = fd_weights(0.7, &xs, 1);
        let s: f64 = w[0].iter().sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-13);
        let s1: f64 = w[1].iter().sum();
        assert_abs_diff_eq!(s1, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn fourth_order_on_smooth_function() {
        let h = 1e-2;
        let xs = [-2.0 * h, -h, 0.0, h, 2.0 * h];
        let fs: Vec<f64> = xs.iter().map(|&x: &f64| (1.3 * x).sin()).collect();
        let (d1, d2) = differentiate_2(0.0, &xs, &fs);
        // Truncation is O(h⁴·f⁽⁵⁾) ≈ 1.2e-9 for d1 at h = 1e-2.
        assert_abs_diff_eq!(d1, 1.3, epsilon = 1e-8);
        assert_abs_diff_eq!(d2, 0.0, epsilon = 1e-8);
    }
}
