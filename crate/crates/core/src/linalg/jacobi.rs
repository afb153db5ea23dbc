use num_complex::Complex64;

use super::dense::DenseMatrix;
use super::hermitian::{DenseHermitian, MatrixKind};
use crate::error::{Error, Result};

/// Default relative tolerance for [`eig_sym`].
pub const DEFAULT_EIG_TOL: f64 = 1e-13;

/// Sweep budget of the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 30;

/// `A = basis * diag(eigenvalues) * basis^*` with eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors, in the order of `eigenvalues`.
    pub basis: DenseMatrix,
    /// Frobenius norm of `A - basis * diag(eigenvalues) * basis^*`.
    pub residual: f64,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.n() - 1]
    }

    /// `basis * diag(values) * basis^*`, with `values` aligned to the columns.
    pub fn reconstruct(&self, values: &[f64], kind: MatrixKind) -> DenseHermitian {
        assert_eq!(values.len(), self.n());
        let lam = DenseHermitian::from_diagonal(values, kind);
        self.basis.conjugate(&lam, kind)
    }
}

fn off_norm(w: &DenseMatrix) -> f64 {
    let n = w.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += w[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic two-sided Jacobi eigensolver for symmetric and Hermitian matrices.
///
/// Converged when the off-diagonal Frobenius mass is at most
/// `tol * ||A||_F`. Complex pivots are first rotated onto the real axis by a
/// diagonal phase, so a real-valued Hermitian input follows exactly the
/// arithmetic of the real-symmetric path. Ties in the final ordering are
/// broken by the original column index.
pub fn eig_sym(a: &DenseHermitian, tol: f64) -> Result<SpectralDecomposition> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = a.n();
    let norm = a.fro_norm();
    let mut w = DenseMatrix::from_hermitian(a);
    let mut v = DenseMatrix::identity(n);

    let mut converged = off_norm(&w) <= tol * norm;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence { sweeps, off_norm: off_norm(&w) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate_pivot(&mut w, &mut v, p, q);
            }
        }
        converged = off_norm(&w) <= tol * norm;
    }

    let raw: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| raw[x].total_cmp(&raw[y]).then(x.cmp(&y)));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| raw[k]).collect();
    let mut basis = DenseMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            basis[(r, dst)] = v[(r, src)];
        }
    }

    let mut out = SpectralDecomposition { eigenvalues, basis, residual: 0.0 };
    let rebuilt = out.reconstruct(&out.eigenvalues, a.kind());
    out.residual = super::hermitian::fro_dist_unchecked(a, &rebuilt);
    Ok(out)
}

/// Annihilates `w[p][q]` by `w <- J^* w J`, accumulating `v <- v J`.
fn rotate_pivot(w: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = w[(p, q)];
    if apq.re == 0.0 && apq.im == 0.0 {
        return;
    }
    // Diagonal phase so the pivot becomes real: (D^* w D)_pq = b.
    let (b, e) = if apq.im == 0.0 {
        (apq.re, Complex64::new(1.0, 0.0))
    } else {
        let r = apq.norm();
        (r, apq / r)
    };
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta.is_infinite() {
        0.0
    } else if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -e.conj() * s;
    let jqq = e.conj() * c;

    let n = w.n();
    for k in 0..n {
        let x = w[(k, p)];
        let y = w[(k, q)];
        w[(k, p)] = x * jpp + y * jqp;
        w[(k, q)] = x * jpq + y * jqq;
    }
    for k in 0..n {
        let x = w[(p, k)];
        let y = w[(q, k)];
        w[(p, k)] = jpp.conj() * x + jqp.conj() * y;
        w[(q, k)] = jpq.conj() * x + jqq.conj() * y;
    }
    w[(p, q)] = Complex64::new(0.0, 0.0);
    w[(q, p)] = Complex64::new(0.0, 0.0);
    w[(p, p)] = Complex64::new(w[(p, p)].re, 0.0);
    w[(q, q)] = Complex64::new(w[(q, q)].re, 0.0);
    for k in 0..n {
        let x = v[(k, p)];
        let y = v[(k, q)];
        v[(k, p)] = x * jpp + y * jqp;
        v[(k, q)] = x * jpq + y * jqq;
    }
}
