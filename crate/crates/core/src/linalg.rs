//! Small dense complex matrices and a one-sided Jacobi SVD.
//!
//! State classification only ever needs singular values and the dominant
//! singular pair of matricizations with a few dozen rows or columns, so a
//! dependency-free kernel is enough. One-sided Jacobi is used because it
//! delivers small singular values with high *relative* accuracy: for an exact
//! rank-1 matrix it leaves `sigma_2 / sigma_1` at machine-epsilon scale,
//! comfortably below the 1e-9 decision threshold, whereas forming the Gram
//! matrix first would square away that margin.

use num_complex::Complex64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must be rows*cols");
        CMat { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Thin singular value decomposition `A = U diag(sigma) V^H`.
pub struct Svd {
    /// `rows x k` with orthonormal columns, `k = min(rows, cols)`.
    pub u: CMat,
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    /// `cols x k` with orthonormal columns.
    pub v: CMat,
}

/// One-sided Jacobi SVD. Orthogonalizes the columns of the (possibly
/// transposed) matrix by complex plane rotations; column norms converge to the
/// singular values.
pub fn svd(a: &CMat) -> Svd {
    // Work on the orientation with fewer columns.
    if a.cols() > a.rows() {
        let t = svd(&a.conj_transpose()); // A^H = U' S V'^H  =>  A = V' S U'^H
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let rows = a.rows();
    let cols = a.cols();
    let mut w = a.clone(); // becomes U * diag(sigma)
    let mut v = CMat::identity(cols);
    let eps = 1e-14;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = Complex64::new(0.0, 0.0);
                for i in 0..rows {
                    let x = w[(i, p)];
                    let y = w[(i, q)];
                    app += x.norm_sqr();
                    aqq += y.norm_sqr();
                    apq += x.conj() * y;
                }
                let off = apq.norm();
                if off <= eps * (app * aqq).sqrt() || off == 0.0 {
                    continue;
                }
                rotated = true;
                // Phase-align column q, then apply the real Jacobi rotation
                // that zeroes the (p, q) entry of the implicit Gram matrix.
                let phase = apq / off;
                let tau = (aqq - app) / (2.0 * off);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let x = w[(i, p)];
                    let y = w[(i, q)] * phase.conj();
                    w[(i, p)] = c * x - s * y;
                    w[(i, q)] = (s * x + c * y) * phase;
                }
                for i in 0..cols {
                    let x = v[(i, p)];
                    let y = v[(i, q)] * phase.conj();
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = (s * x + c * y) * phase;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite norms"));
    let mut u = CMat::zeros(rows, cols);
    let mut vs = CMat::zeros(cols, cols);
    let mut sigma = Vec::with_capacity(cols);
    for (dst, &src) in order.iter().enumerate() {
        let n = norms[src];
        sigma.push(n);
        for i in 0..rows {
            u[(i, dst)] = if n > 0.0 {
                w[(i, src)] / n
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        for i in 0..cols {
            vs[(i, dst)] = v[(i, src)];
        }
    }
    Svd { u, sigma, v: vs }
}
