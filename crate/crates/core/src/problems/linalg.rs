use crate::error::{Error, Result};
use crate::lmo::{top_singular_pair, POWER_MAX_ITER, POWER_TOL};
use crate::vector::Vector;

/// Row-major dense matrix. Small utility for the benchmark builders; not a
/// general linear-algebra type.
#[derive(Clone, Debug)]
pub struct DenseMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// `A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            out[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// `A^T y`.
    pub fn t_matvec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows, "t_matvec dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let yi = y[i];
            for j in 0..self.cols {
                out[j] += row[j] * yi;
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Largest singular value via the shared power-iteration routine.
    pub fn sigma_max(&self) -> Result<f64> {
        let v = Vector::new(self.data.clone())?;
        Ok(top_singular_pair(&v, self.rows, self.cols, POWER_TOL, POWER_MAX_ITER)?.sigma)
    }

    /// `A^T A`, for forming normal equations at desk scale.
    pub fn gram(&self) -> DenseMat {
        let n = self.cols;
        let mut g = DenseMat::zeros(n, n);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for a in 0..n {
                let ra = row[a];
                if ra == 0.0 {
                    continue;
                }
                for b in a..n {
                    g.data[a * n + b] += ra * row[b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                g.data[a * n + b] = g.data[b * n + a];
            }
        }
        g
    }

    /// `A A^T`.
    pub fn outer_gram(&self) -> DenseMat {
        let m = self.rows;
        let mut g = DenseMat::zeros(m, m);
        for a in 0..m {
            let ra = &self.data[a * self.cols..(a + 1) * self.cols];
            for b in a..m {
                let rb = &self.data[b * self.cols..(b + 1) * self.cols];
                let dot: f64 = ra.iter().zip(rb).map(|(p, q)| p * q).sum();
                g.data[a * m + b] = dot;
                g.data[b * m + a] = dot;
            }
        }
        g
    }
}

/// Solves `M x = rhs` for symmetric positive definite `M` by Cholesky
/// factorization. Fails if a pivot is not strictly positive.
pub fn cholesky_solve(m: &DenseMat, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = m.rows;
    if m.cols != n || rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }
    // Lower-triangular factor, stored dense.
    let mut l = vec![0.0_f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not positive definite (pivot {s:.3e} at {i})"
                    )));
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    // Forward then back substitution.
    let mut y = vec![0.0_f64; n];
    for i in 0..n {
        let mut s = rhs[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0_f64; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_a_known_system() {
        // M = [[4, 2], [2, 3]], rhs = [2, 5] has solution [-0.5, 2].
        let mut m = DenseMat::zeros(2, 2);
        m.set(0, 0, 4.0);
        m.set(0, 1, 2.0);
        m.set(1, 0, 2.0);
        m.set(1, 1, 3.0);
        let x = cholesky_solve(&m, &[2.0, 5.0]).unwrap();
        assert!((x[0] - -0.5).abs() < 1e-12);
        assert!((x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite_input() {
        let mut m = DenseMat::zeros(2, 2);
        m.set(0, 0, 1.0);
        m.set(1, 1, -1.0);
        assert!(cholesky_solve(&m, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn gram_and_matvec_agree() {
        let mut a = DenseMat::zeros(3, 2);
        for (idx, v) in [1.0, 2.0, 3.0, -1.0, 0.5, 4.0].iter().enumerate() {
            a.data[idx] = *v;
        }
        let g = a.gram();
        let x = [2.0, -1.0];
        let direct = a.t_matvec(&a.matvec(&x));
        let via_gram = g.matvec(&x);
        for i in 0..2 {
            assert!((direct[i] - via_gram[i]).abs() < 1e-12);
        }
    }
}
