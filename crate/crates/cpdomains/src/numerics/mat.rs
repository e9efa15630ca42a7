use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{CpError, Result};

pub type C64 = Complex64;

/// Dense complex matrix, row-major storage.
///
/// Zero-dimensional matrices (`rows == 0` or `cols == 0`) are legal and
/// behave as empty operators: products with them yield correctly shaped
/// empty or zero results.
#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix unit E_ij of the given shape.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::zeros(rows, cols);
        m[(i, j)] = C64::new(1.0, 0.0);
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CpError::InvalidInput(format!(
                "entries length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(CpError::InvalidInput("ragged rows".into()));
            }
            data.extend_from_slice(row);
        }
        Ok(Mat { rows: r, cols: c, data })
    }

    /// Real-entry convenience constructor.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Mat {
            rows,
            cols,
            data: entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    /// Row-major flattening of the matrix into a length rows*cols vector.
    pub fn vectorize(&self) -> Vec<C64> {
        self.data.clone()
    }

    /// Inverse of `vectorize`.
    pub fn from_vectorized(rows: usize, cols: usize, v: &[C64]) -> Result<Self> {
        Mat::from_vec(rows, cols, v.to_vec())
    }

    pub fn adjoint(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Mat {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in matmul: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let lhs = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(lhs.iter()) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Kronecker product; index layout (i,m) -> i*other.rows + m on rows,
    /// matching the row-major vectorization convention.
    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for m in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + m, j * other.cols + l)] = a * other[(m, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius inner product tr(A* B).
    pub fn frob_inner(&self, other: &Mat) -> C64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Deviation from Hermitian symmetry, Frobenius norm of m - m*.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self - &self.adjoint()).frob_norm()
    }

    /// Matrix-vector product.
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            out[i] = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn set_block(&mut self, top: usize, left: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(top + i, left + j)] = block[(i, j)];
            }
        }
    }

    pub fn block(&self, top: usize, left: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(top + i, left + j)];
            }
        }
        out
    }

    /// Builds a matrix column by column from a linear map acting on the
    /// matrix units of an `in_rows x in_cols` space. Column (i,j) (row-major
    /// unit order) is the vectorized image of E_ij. Every kernel-style
    /// domain computation in this crate is built on top of this.
    pub fn of_linear_map<F>(in_rows: usize, in_cols: usize, mut f: F) -> Mat
    where
        F: FnMut(usize, usize) -> Mat,
    {
        let d = in_rows * in_cols;
        let mut out: Option<Mat> = None;
        for i in 0..in_rows {
            for j in 0..in_cols {
                let img = f(i, j).vectorize();
                let m = out.get_or_insert_with(|| Mat::zeros(img.len(), d));
                assert_eq!(m.rows, img.len(), "inconsistent image size");
                for (r, z) in img.iter().enumerate() {
                    m[(r, i * in_cols + j)] = *z;
                }
            }
        }
        out.unwrap_or_else(|| Mat::zeros(0, d))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, other: &Mat) -> Mat {
        self.matmul(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vectorization_identity() {
        // Row-major convention: the linear map a -> P a Q has matrix
        // kron(P, Q^T) on vectorized inputs. All domain kernels depend
        // on this identity.
        let p = Mat::from_rows(&[vec![c(1.0, 2.0), c(0.0, -1.0)], vec![c(3.0, 0.0), c(1.0, 1.0)]])
            .unwrap();
        let q = Mat::from_rows(&[vec![c(0.5, 0.0), c(2.0, -3.0)], vec![c(1.0, 4.0), c(0.0, 0.0)]])
            .unwrap();
        let a = Mat::from_rows(&[vec![c(1.0, -1.0), c(2.0, 2.0)], vec![c(0.0, 3.0), c(5.0, 0.0)]])
            .unwrap();
        let direct = &(&p * &a) * &q;
        let big = p.kron(&q.transpose());
        let v = big.apply_vec(&a.vectorize());
        let via_vec = Mat::from_vectorized(2, 2, &v).unwrap();
        assert!((&direct - &via_vec).frob_norm() < 1e-12);
    }

    #[test]
    fn empty_matrices_are_first_class() {
        let a = Mat::zeros(0, 3);
        let b = Mat::zeros(3, 2);
        let ab = &a * &b;
        assert_eq!(ab.shape(), (0, 2));
        let c = Mat::zeros(2, 0);
        let bc = &b * &c;
        assert_eq!(bc.shape(), (3, 0));
        assert_eq!(bc.frob_norm(), 0.0);
    }

    #[test]
    fn kron_identity_layout_matches_tensor_index() {
        // (x (x) I_r) on index (i,m) = i*r + m.
        let x = Mat::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)]]).unwrap(); // 1x2
        let k = x.kron(&Mat::identity(3));
        assert_eq!(k.shape(), (3, 6));
        assert_eq!(k[(0, 0)], c(1.0, 0.0));
        assert_eq!(k[(0, 3)], c(2.0, 0.0));
        assert_eq!(k[(1, 4)], c(2.0, 0.0));
    }
}
