//! Symmetric tridiagonal eigenvalue tools: Sturm-sequence bisection for the
//! smallest eigenvalue and inverse iteration for its eigenvector.

/// Symmetric tridiagonal matrix; `off` holds the n−1 off-diagonal entries.
#[derive(Clone, Debug)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len());
        SymTridiag { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Solves T x = b in place by the LDLᵀ recurrence (no pivoting; tiny
    /// pivots are nudged, which is adequate for the shifted definite
    /// systems this library assembles).
    pub fn solve_in_place(&self, b: &mut [f64]) {
        solve_shifted(&self.diag, &self.off, 0.0, b);
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * v[i];
            if i > 0 {
                s += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * v[i + 1];
            }
            out[i] = s;
        }
        out
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm count via the
    /// LDLᵀ sign recurrence of T − xI).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.n();
        let mut count = 0usize;
        let mut d = self.diag[0] - x;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let e2 = self.off[i - 1] * self.off[i - 1];
            let denom = if d == 0.0 { f64::MIN_POSITIVE } else { d };
            d = self.diag[i] - x - e2 / denom;
            if !d.is_finite() {
                // Overflowed pivot: the next step recovers (e2/∓∞ → 0).
                d = -f64::MAX;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Smallest eigenvalue by bisection, certified by the Sturm count.
    /// The stopping criterion is relative to the eigenvalue itself, not to
    /// the Gershgorin span, so badly scaled matrices (spectra spanning many
    /// decades) still resolve their low end to full precision.
    pub fn smallest_eigenvalue(&self) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Smallest eigenvalue together with a unit eigenvector (inverse
    /// iteration with a shift a relative hair below the certified
    /// eigenvalue; an absolute-scale shift would stall on badly scaled
    /// matrices). Converged when the Rayleigh quotient stabilizes.
    pub fn smallest_eigenpair(&self) -> (f64, Vec<f64>) {
        let n = self.n();
        let lambda = self.smallest_eigenvalue();
        let shift = lambda - 1e-12 * lambda.abs() - 1e-300;
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        let mut prev_rho = f64::NAN;
        for _ in 0..12 {
            let mut w = v.clone();
            solve_shifted(&self.diag, &self.off, shift, &mut w);
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                break;
            }
            for x in &mut w {
                *x /= norm;
            }
            let tv = self.matvec(&w);
            let rho: f64 = w.iter().zip(&tv).map(|(a, b)| a * b).sum();
            v = w;
            if (rho - prev_rho).abs() <= 4.0 * f64::EPSILON * rho.abs() {
                break;
            }
            prev_rho = rho;
        }
        (lambda, v)
    }
}

/// Solves (T − shift·I) x = b in place by the LDLᵀ recurrence.
/// Near-singular pivots are nudged; inverse iteration tolerates this.
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, b: &mut [f64]) {
    let n = diag.len();
    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    let tiny = f64::MIN_POSITIVE.sqrt();
    d[0] = diag[0] - shift;
    if d[0].abs() < tiny {
        d[0] = tiny;
    }
    for i in 1..n {
        l[i - 1] = off[i - 1] / d[i - 1];
        d[i] = diag[i] - shift - l[i - 1] * off[i - 1];
        if d[i].abs() < tiny {
            d[i] = tiny;
        }
    }
    for i in 1..n {
        b[i] -= l[i - 1] * b[i - 1];
    }
    b[n - 1] /= d[n - 1];
    for i in (0..n - 1).rev() {
        b[i] = b[i] / d[i] - l[i] * b[i + 1];
    }
}
