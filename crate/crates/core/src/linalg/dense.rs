use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hermitian::{DenseHermitian, MatrixKind};

/// Square dense complex matrix in row-major order.
///
/// Used for factors that are not Hermitian: eigenbases and products of
/// rotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_hermitian(a: &DenseHermitian) -> Self {
        let n = a.n();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = a.get(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||self - I||_F`.
    pub fn dist_to_identity(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let e = if i == j { self.data[i * n + j] - ONE } else { self.data[i * n + j] };
                acc += e.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `||self^* self - I||_F`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint().matmul(self).dist_to_identity()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self.data[i * self.n + j]).collect()
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// `self * h * self^*`, returned as a Hermitian matrix of `kind`.
    ///
    /// The diagonal is taken as the real part and the upper triangle is
    /// stored; the lower triangle is implied.
    pub fn conjugate(&self, h: &DenseHermitian, kind: MatrixKind) -> DenseHermitian {
        let full = DenseMatrix::from_hermitian(h);
        let prod = self.matmul(&full).matmul(&self.adjoint());
        let mut out = DenseHermitian::zeros(self.n, kind);
        for i in 0..self.n {
            for j in i..self.n {
                out.set(i, j, prod[(i, j)]);
            }
        }
        out
    }

    /// Embeds `block` at rows/columns `offset..offset + block.n()`.
    pub fn embed(&mut self, block: &DenseMatrix, offset: usize) {
        for i in 0..block.n {
            for j in 0..block.n {
                self[(offset + i, offset + j)] = block[(i, j)];
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}
