use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Scalar field of a [`DenseHermitian`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixKind {
    #[serde(rename = "sym")]
    RealSymmetric,
    #[serde(rename = "herm")]
    ComplexHermitian,
}

/// Dense real-symmetric or complex-Hermitian matrix in packed upper storage.
///
/// Entry `(i, j)` with `i <= j` lives at row-major offset
/// `i * (2n - i + 1) / 2 + (j - i)`; the lower triangle is implied by
/// conjugation. Diagonal entries always have a zero imaginary part, and a
/// real-symmetric matrix never stores a nonzero imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    n: usize,
    kind: MatrixKind,
    upper: Vec<Complex64>,
}

#[inline]
fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl DenseHermitian {
    pub fn zeros(n: usize, kind: MatrixKind) -> Self {
        Self {
            n,
            kind,
            upper: vec![Complex64::new(0.0, 0.0); packed_len(n)],
        }
    }

    pub fn identity(n: usize, kind: MatrixKind) -> Self {
        Self::from_diagonal(&vec![1.0; n], kind)
    }

    pub fn from_diagonal(diag: &[f64], kind: MatrixKind) -> Self {
        let mut m = Self::zeros(diag.len(), kind);
        for (i, &v) in diag.iter().enumerate() {
            m.set_diag(i, v);
        }
        m
    }

    /// Builds a matrix from packed upper-triangle storage, validating the
    /// kind constraints.
    pub fn from_packed(n: usize, kind: MatrixKind, upper: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if upper.len() != packed_len(n) {
            return Err(Error::DimensionMismatch {
                expected: packed_len(n),
                found: upper.len(),
            });
        }
        let m = Self { n, kind, upper };
        for i in 0..n {
            for j in i..n {
                let v = m.upper[m.offset(i, j)];
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::InvalidMatrix(format!("non-finite entry at ({i}, {j})")));
                }
                if i == j && v.im != 0.0 {
                    return Err(Error::InvalidMatrix(format!("diagonal entry {i} has nonzero imaginary part")));
                }
                if kind == MatrixKind::RealSymmetric && v.im != 0.0 {
                    return Err(Error::KindMismatch("complex entry in a real-symmetric matrix"));
                }
            }
        }
        Ok(m)
    }

    /// Builds a real-symmetric matrix from full row-major rows; only the
    /// upper triangle is read.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut upper = Vec::with_capacity(packed_len(n));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            upper.extend(row[i..].iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_packed(n, MatrixKind::RealSymmetric, upper)
    }

    /// Builds a Hermitian matrix from full row-major rows; only the upper
    /// triangle is read.
    pub fn from_complex_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut upper = Vec::with_capacity(packed_len(n));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            upper.extend_from_slice(&row[i..]);
        }
        Self::from_packed(n, MatrixKind::ComplexHermitian, upper)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    #[inline]
    pub fn is_complex(&self) -> bool {
        self.kind == MatrixKind::ComplexHermitian
    }

    pub fn packed(&self) -> &[Complex64] {
        &self.upper
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j < self.n);
        i * (2 * self.n - i + 1) / 2 + (j - i)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i <= j {
            self.upper[self.offset(i, j)]
        } else {
            self.upper[self.offset(j, i)].conj()
        }
    }

    /// Stores `v` at `(i, j)` and its conjugate at `(j, i)`.
    ///
    /// Diagonal writes keep only the real part; real-symmetric matrices keep
    /// only the real part everywhere.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let v = if i == j || self.kind == MatrixKind::RealSymmetric {
            Complex64::new(v.re, 0.0)
        } else {
            v
        };
        if i <= j {
            let k = self.offset(i, j);
            self.upper[k] = v;
        } else {
            let k = self.offset(j, i);
            self.upper[k] = v.conj();
        }
    }

    #[inline]
    pub fn diag_entry(&self, i: usize) -> f64 {
        self.upper[self.offset(i, i)].re
    }

    #[inline]
    pub fn set_diag(&mut self, i: usize, v: f64) {
        let k = self.offset(i, i);
        self.upper[k] = Complex64::new(v, 0.0);
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.diag_entry(i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.diag_entry(i)).sum()
    }

    /// Frobenius norm over the full (not packed) matrix.
    pub fn fro_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let w = if i == j { 1.0 } else { 2.0 };
                acc += w * self.get(i, j).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.upper.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Principal submatrix on `idx` (in the given order).
    pub fn principal_submatrix(&self, idx: &[usize]) -> DenseHermitian {
        let mut out = DenseHermitian::zeros(idx.len(), self.kind);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate().skip(a) {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    /// The same entries re-tagged as complex Hermitian.
    pub fn to_hermitian_kind(&self) -> DenseHermitian {
        DenseHermitian {
            n: self.n,
            kind: MatrixKind::ComplexHermitian,
            upper: self.upper.clone(),
        }
    }

    /// Full row-major rows.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub(crate) fn check_same_shape(&self, other: &DenseHermitian) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.kind != other.kind {
            return Err(Error::KindMismatch("operands have different kinds"));
        }
        Ok(())
    }
}

/// Frobenius distance `||a - b||_F`.
pub fn fro_dist(a: &DenseHermitian, b: &DenseHermitian) -> Result<f64> {
    a.check_same_shape(b)?;
    Ok(fro_dist_unchecked(a, b))
}

/// Frobenius distance ignoring the kind tag (dimensions must agree).
pub(crate) fn fro_dist_unchecked(a: &DenseHermitian, b: &DenseHermitian) -> f64 {
    debug_assert_eq!(a.n, b.n);
    let mut acc = 0.0;
    for i in 0..a.n {
        for j in i..a.n {
            let w = if i == j { 1.0 } else { 2.0 };
            acc += w * (a.get(i, j) - b.get(i, j)).norm_sqr();
        }
    }
    acc.sqrt()
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    kind: MatrixKind,
    upper: Vec<Vec<f64>>,
}

impl Serialize for DenseHermitian {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let upper = self
            .upper
            .iter()
            .map(|z| match self.kind {
                MatrixKind::RealSymmetric => vec![z.re],
                MatrixKind::ComplexHermitian => vec![z.re, z.im],
            })
            .collect();
        MatrixJson { n: self.n, kind: self.kind, upper }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DenseHermitian {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatrixJson::deserialize(d)?;
        let mut upper = Vec::with_capacity(raw.upper.len());
        for (k, e) in raw.upper.iter().enumerate() {
            let z = match e.as_slice() {
                [re] => Complex64::new(*re, 0.0),
                [re, im] => Complex64::new(*re, *im),
                _ => return Err(D::Error::custom(format!("entry {k} must be [re] or [re, im]"))),
            };
            upper.push(z);
        }
        DenseHermitian::from_packed(raw.n, raw.kind, upper).map_err(D::Error::custom)
    }
}
