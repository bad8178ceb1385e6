//! Small dense LU factorization with partial pivoting.
//!
//! Facet bases are at most `d + 1` columns wide, so everything here is a
//! plain row-major `Vec<f64>`; a fresh factorization per pivot is cheap.

use crate::error::Singular;

/// `P A = L U` for a square matrix, with a hard threshold on the scaled
/// pivot magnitude.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    /// Packed factors: strict lower part is `L` (unit diagonal), upper is `U`.
    lu: Vec<f64>,
    /// `perm[k]` is the original row stored at position `k`.
    perm: Vec<usize>,
}

impl Lu {
    /// Factor the matrix whose columns are `cols` (each of length `cols.len()`).
    pub fn from_columns<C: AsRef<[f64]>>(cols: &[C], eps_singular: f64) -> Result<Self, Singular> {
        let n = cols.len();
        let mut a = vec![0.0; n * n];
        for (j, c) in cols.iter().enumerate() {
            let c = c.as_ref();
            debug_assert_eq!(c.len(), n);
            for i in 0..n {
                a[i * n + j] = c[i];
            }
        }
        Self::factor(n, a, eps_singular)
    }

    /// Factor a row-major `n x n` matrix.
    pub fn factor(n: usize, mut a: Vec<f64>, eps_singular: f64) -> Result<Self, Singular> {
        assert_eq!(a.len(), n * n);
        let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Singular);
        }
        let threshold = eps_singular * scale;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= threshold {
                return Err(Singular);
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        a[i * n + j] -= f * a[k * n + j];
                    }
                }
            }
        }
        Ok(Lu { n, lu: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solve `A x = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Solve `A^T x = rhs`.
    pub fn solve_transpose(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        // A^T = U^T L^T P, so solve U^T y = rhs, L^T w = y, then x = P^T w.
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[j * n + i] * y[j];
            }
            y[i] = s / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[j * n + i] * y[j];
            }
            y[i] = s;
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }
}

#[inline]
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[inline]
pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

#[inline]
pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn scale(x: &[f64], s: f64) -> Vec<f64> {
    x.iter().map(|v| v * s).collect()
}

/// `x + s * y`
pub fn axpy(x: &[f64], s: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a + s * b).collect()
}

pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}
