//! Banded LU factorization with partial pivoting (compact storage),
//! for the pentadiagonal Jacobians arising from five-point collocation.

use crate::error::{Error, Result};

/// Band matrix with `m1` subdiagonals and `m2` superdiagonals.
/// Compact storage: `a[i][j]` holds A[i, i−m1+j] for j = 0..m1+m2.
#[derive(Clone, Debug)]
pub struct Banded {
    n: usize,
    m1: usize,
    m2: usize,
    a: Vec<f64>,
}

impl Banded {
    pub fn new(n: usize, m1: usize, m2: usize) -> Self {
        Banded {
            n,
            m1,
            m2,
            a: vec![0.0; n * (m1 + m2 + 1)],
        }
    }

    fn width(&self) -> usize {
        self.m1 + self.m2 + 1
    }

    /// Sets A[i, j]; panics if (i, j) lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let w = self.width();
        let col = (j + self.m1)
            .checked_sub(i)
            .filter(|&c| c < w)
            .expect("entry outside band");
        self.a[i * w + col] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let w = self.width();
        let col = (j + self.m1)
            .checked_sub(i)
            .filter(|&c| c < w)
            .expect("entry outside band");
        self.a[i * w + col] += v;
    }

    /// Matrix-vector product (used by tests and residual checks).
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let w = self.width();
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for c in 0..w {
                let j = (i + c) as isize - self.m1 as isize;
                if j >= 0 && (j as usize) < self.n {
                    y[i] += self.a[i * w + c] * x[j as usize];
                }
            }
        }
        y
    }

    /// Solves A x = b in place, destroying the factor. Returns an error on a
    /// structurally singular pivot.
    pub fn solve(mut self, b: &mut [f64]) -> Result<()> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let m1 = self.m1;
        let w = self.width();
        let a = &mut self.a;
        // Left-justify the truncated top rows.
        for i in 0..m1.min(n) {
            let shift = m1 - i;
            for j in shift..w {
                a[i * w + j - shift] = a[i * w + j];
            }
            for j in w - shift..w {
                a[i * w + j] = 0.0;
            }
        }
        let mut al = vec![0.0; n * m1];
        let mut indx = vec![0usize; n];
        let mut l = m1;
        for k in 0..n {
            let mut piv = a[k * w];
            let mut ip = k;
            if l < n {
                l += 1;
            }
            for j in k + 1..l {
                if a[j * w].abs() > piv.abs() {
                    piv = a[j * w];
                    ip = j;
                }
            }
            indx[k] = ip;
            if piv == 0.0 {
                return Err(Error::invalid("banded solve: singular pivot"));
            }
            if ip != k {
                for j in 0..w {
                    a.swap(k * w + j, ip * w + j);
                }
            }
            for i in k + 1..l {
                let dum = a[i * w] / a[k * w];
                al[k * m1 + (i - k - 1)] = dum;
                for j in 1..w {
                    a[i * w + j - 1] = a[i * w + j] - dum * a[k * w + j];
                }
                a[i * w + w - 1] = 0.0;
            }
        }
        // Forward substitution with the stored multipliers.
        let mut l = m1;
        for k in 0..n {
            let ip = indx[k];
            if ip != k {
                b.swap(k, ip);
            }
            if l < n {
                l += 1;
            }
            for i in k + 1..l {
                b[i] -= al[k * m1 + (i - k - 1)] * b[k];
            }
        }
        // Back substitution.
        let mut l = 1;
        for i in (0..n).rev() {
            let mut dum = b[i];
            for k in 1..l {
                dum -= a[i * w + k] * b[k + i];
            }
            b[i] = dum / a[i * w];
            if l < w {
                l += 1;
            }
        }
        Ok(())
    }
}
