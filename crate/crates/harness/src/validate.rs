use serde::{Deserialize, Serialize};

use schur_horn::{eig_sym, CorrectionCertificate, DenseHermitian, DenseMatrix, Transform};

/// Relative thresholds; each is multiplied by `1 + max(||d||∞, ||λ̃||∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationTolerances {
    pub diag: f64,
    pub spectrum: f64,
    pub chain: f64,
    pub orthogonality: f64,
}

impl Default for ValidationTolerances {
    fn default() -> Self {
        Self { diag: 1e-10, spectrum: 1e-8, chain: 1e-10, orthogonality: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub diag_ok: bool,
    pub spectrum_ok: bool,
    pub chain_ok: bool,
    pub orthogonality_ok: bool,
    pub diag_residual: f64,
    pub spectrum_residual: f64,
    pub chain_residual: f64,
    pub orthogonality_defect: f64,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.diag_ok && self.spectrum_ok && self.chain_ok && self.orthogonality_ok
    }
}

/// Checks `cert` against `(a, lambda_tilde)` from scratch.
///
/// The chain is multiplied out densely and applied to
/// `diag(initial_spectrum)`; diagonal and spectrum are read off that product,
/// not off the stored result, so a corrupted factor shows up in both.
pub fn validate_certificate(
    a: &DenseHermitian,
    lambda_tilde: &[f64],
    cert: &CorrectionCertificate,
    tol: ValidationTolerances,
) -> ValidationReport {
    let n = a.n();
    let inf = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let scale = 1.0 + inf(&a.diagonal()).max(inf(lambda_tilde));

    let shapes_match = cert.n() == n && cert.initial_spectrum.len() == n && lambda_tilde.len() == n;
    if !shapes_match {
        return ValidationReport {
            diag_ok: false,
            spectrum_ok: false,
            chain_ok: false,
            orthogonality_ok: false,
            diag_residual: f64::INFINITY,
            spectrum_residual: f64::INFINITY,
            chain_residual: f64::INFINITY,
            orthogonality_defect: f64::INFINITY,
        };
    }

    let mut product = DenseMatrix::identity(n);
    let mut orthogonality_defect = 0.0_f64;
    for t in &cert.chain {
        let m = t.to_dense(n);
        if let Transform::Basis(_) = t {
            orthogonality_defect = orthogonality_defect.max(m.unitarity_defect());
        }
        product = m.matmul(&product);
    }
    orthogonality_defect = orthogonality_defect.max(product.unitarity_defect());

    let start = DenseHermitian::from_diagonal(&cert.initial_spectrum, cert.kind());
    let rebuilt = product.conjugate(&start, cert.kind());

    let chain_residual = schur_horn::fro_dist(&rebuilt, &cert.result).unwrap_or(f64::INFINITY);
    let diag_residual = rebuilt
        .diagonal()
        .iter()
        .zip(a.diagonal())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));

    let mut target = lambda_tilde.to_vec();
    target.sort_by(f64::total_cmp);
    let spectrum_residual = match eig_sym(&rebuilt, 1e-13) {
        Ok(e) => e.eigenvalues.iter().zip(&target).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs())),
        Err(_) => f64::INFINITY,
    };

    ValidationReport {
        diag_ok: diag_residual <= tol.diag * scale,
        spectrum_ok: spectrum_residual <= tol.spectrum * scale,
        chain_ok: chain_residual <= tol.chain * scale,
        orthogonality_ok: orthogonality_defect <= tol.orthogonality * n as f64,
        diag_residual,
        spectrum_residual,
        chain_residual,
        orthogonality_defect,
    }
}
