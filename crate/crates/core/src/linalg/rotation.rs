use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dense::DenseMatrix;
use super::hermitian::{DenseHermitian, MatrixKind};
use crate::error::{Error, Result};

/// A plane rotation acting on coordinates `i < j`.
///
/// Embedded in the identity, the active 2x2 block is
///
/// ```text
/// [  e^{iφ} cos θ    e^{iψ} sin θ ]
/// [ -e^{-iψ} sin θ   e^{-iφ} cos θ ]
/// ```
///
/// which is the ordinary real rotation `[[c, s], [-s, c]]` when both phases
/// vanish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GivensParams {
    pub i: usize,
    pub j: usize,
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub psi: f64,
}

impl GivensParams {
    /// Rotation whose first row acts on `first` and second row on `second`.
    ///
    /// The stored form always has `i < j`; swapping the roles negates all
    /// three angles, which yields the same embedded matrix.
    pub fn new(first: usize, second: usize, theta: f64, phi: f64, psi: f64) -> Self {
        assert_ne!(first, second, "rotation plane needs two distinct indices");
        if first < second {
            Self { i: first, j: second, theta, phi, psi }
        } else {
            Self { i: second, j: first, theta: -theta, phi: -phi, psi: -psi }
        }
    }

    pub fn real(first: usize, second: usize, theta: f64) -> Self {
        Self::new(first, second, theta, 0.0, 0.0)
    }

    pub fn identity(i: usize, j: usize) -> Self {
        Self::real(i, j, 0.0)
    }

    pub fn has_phase(&self) -> bool {
        self.phi != 0.0 || self.psi != 0.0
    }

    /// Same rotation with indices passed through `map` (re-oriented if needed).
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Self {
        Self::new(map(self.i), map(self.j), self.theta, self.phi, self.psi)
    }

    /// Entries `(g_ii, g_ij, g_ji, g_jj)` of the active block.
    pub fn block(&self) -> [Complex64; 4] {
        let (s, c) = self.theta.sin_cos();
        let e_phi = phase(self.phi);
        let e_psi = phase(self.psi);
        [
            e_phi * c,
            e_psi * s,
            -(e_psi.conj()) * s,
            e_phi.conj() * c,
        ]
    }

    /// `tan θ`; infinite for a quarter turn.
    pub fn tangent(&self) -> f64 {
        if self.theta.abs() == FRAC_PI_2 {
            f64::INFINITY.copysign(self.theta)
        } else {
            self.theta.tan()
        }
    }

    /// The rotation embedded in an `n x n` identity.
    pub fn to_dense(&self, n: usize) -> DenseMatrix {
        let mut g = DenseMatrix::identity(n);
        let [gii, gij, gji, gjj] = self.block();
        g[(self.i, self.i)] = gii;
        g[(self.i, self.j)] = gij;
        g[(self.j, self.i)] = gji;
        g[(self.j, self.j)] = gjj;
        g
    }
}

#[inline]
fn phase(angle: f64) -> Complex64 {
    if angle == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, angle)
    }
}

/// Computes `G A G^*`, touching only rows and columns `g.i` and `g.j`.
pub fn conjugate_by_givens(a: &DenseHermitian, g: &GivensParams) -> Result<DenseHermitian> {
    let mut out = a.clone();
    conjugate_in_place(&mut out, g)?;
    Ok(out)
}

/// In-place form of [`conjugate_by_givens`].
pub fn conjugate_in_place(a: &mut DenseHermitian, g: &GivensParams) -> Result<()> {
    let n = a.n();
    let (i, j) = (g.i, g.j);
    if i >= j || j >= n {
        return Err(Error::IndexOutOfBounds { i, j, n });
    }
    if a.kind() == MatrixKind::RealSymmetric && g.has_phase() {
        return Err(Error::KindMismatch("phased rotation applied to a real-symmetric matrix"));
    }
    let [gii, gij, gji, gjj] = g.block();

    for k in (0..n).filter(|&k| k != i && k != j) {
        let aik = a.get(i, k);
        let ajk = a.get(j, k);
        a.set(i, k, gii * aik + gij * ajk);
        a.set(j, k, gji * aik + gjj * ajk);
    }

    let b11 = Complex64::new(a.diag_entry(i), 0.0);
    let b22 = Complex64::new(a.diag_entry(j), 0.0);
    let b12 = a.get(i, j);
    let b21 = b12.conj();
    let gb11 = gii * b11 + gij * b21;
    let gb12 = gii * b12 + gij * b22;
    let gb21 = gji * b11 + gjj * b21;
    let gb22 = gji * b12 + gjj * b22;
    let m11 = gb11 * gii.conj() + gb12 * gij.conj();
    let m12 = gb11 * gji.conj() + gb12 * gjj.conj();
    let m22 = gb21 * gji.conj() + gb22 * gjj.conj();
    a.set_diag(i, m11.re);
    a.set_diag(j, m22.re);
    a.set(i, j, m12);
    Ok(())
}
