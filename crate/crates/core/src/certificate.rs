use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{
    conjugate_in_place, eig_sym, fro_dist, DenseHermitian, DenseMatrix, GivensParams, MatrixKind,
    DEFAULT_EIG_TOL,
};
use crate::majorization::{inf_norm, sorted_ascending};
use crate::strong_sh::BlockPartition;

/// One factor of the conjugation chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Transform {
    Givens(GivensParams),
    Basis(DenseMatrix),
}

impl Transform {
    /// `m <- T m T^*`.
    pub fn apply(&self, m: &mut DenseHermitian) -> Result<()> {
        match self {
            Transform::Givens(g) => conjugate_in_place(m, g),
            Transform::Basis(q) => {
                *m = q.conjugate(m, m.kind());
                Ok(())
            }
        }
    }

    pub fn to_dense(&self, n: usize) -> DenseMatrix {
        match self {
            Transform::Givens(g) => g.to_dense(n),
            Transform::Basis(q) => q.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    /// Queue step on individual diagonal entries.
    Diagonal,
    /// Queue step moving trace between blocks.
    BlockBalance,
    /// Pre-rotation fixing the trace split of two merged blocks.
    Compensation,
    /// Leaf-to-parent elimination on a spanning tree.
    TreeElimination,
}

/// A rotation on `(i, j)` that fixes entry `i`, leaving `updated_perturbations`
/// as the remaining offsets `(h_i, h_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionStep {
    pub i: usize,
    pub j: usize,
    pub rotation: GivensParams,
    pub updated_perturbations: (f64, f64),
    pub kind: StepKind,
}

/// A witness matrix together with the transforms that produced it.
///
/// `result = T_m ... T_1 diag(initial_spectrum) T_1^* ... T_m^*` where
/// `chain = [T_1, ..., T_m]`. Rotations before the (single) basis factor
/// form `G1`, those after it form `G2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionCertificate {
    pub result: DenseHermitian,
    pub initial_spectrum: Vec<f64>,
    pub chain: Vec<Transform>,
    pub steps: Vec<CorrectionStep>,
    pub target_diagonal: Vec<f64>,
    /// Ascending.
    pub target_spectrum: Vec<f64>,
    /// `max_i |result_ii - d_i|`.
    pub diag_residual: f64,
    /// `max_k |eig_k(result) - λ̃↑_k|`.
    pub spectrum_residual: f64,
    /// `||result - A||_F`.
    pub distance_to_original: f64,
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<BlockPartition>,
}

impl CorrectionCertificate {
    /// Fills in residuals for a finished `result` against the original `a`.
    pub fn finish(
        result: DenseHermitian,
        initial_spectrum: Vec<f64>,
        chain: Vec<Transform>,
        steps: Vec<CorrectionStep>,
        original: &DenseHermitian,
        lambda_tilde: &[f64],
    ) -> Result<Self> {
        let target_diagonal = original.diagonal();
        let target_spectrum = sorted_ascending(lambda_tilde);
        let diag_residual = result
            .diagonal()
            .iter()
            .zip(&target_diagonal)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        let eig = eig_sym(&result, DEFAULT_EIG_TOL)?;
        let spectrum_residual = eig
            .eigenvalues
            .iter()
            .zip(&target_spectrum)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        let distance_to_original = fro_dist(&result, original)?;
        let scale = 1.0 + inf_norm(&target_diagonal).max(inf_norm(&target_spectrum));
        Ok(Self {
            result,
            initial_spectrum,
            chain,
            steps,
            target_diagonal,
            target_spectrum,
            diag_residual,
            spectrum_residual,
            distance_to_original,
            scale,
            partition: None,
        })
    }

    pub fn n(&self) -> usize {
        self.result.n()
    }

    pub fn kind(&self) -> MatrixKind {
        self.result.kind()
    }

    /// Replays the chain on `diag(initial_spectrum)` using sparse updates.
    pub fn replay(&self) -> Result<DenseHermitian> {
        let mut m = DenseHermitian::from_diagonal(&self.initial_spectrum, self.kind());
        for t in &self.chain {
            t.apply(&mut m)?;
        }
        Ok(m)
    }

    fn basis_position(&self) -> Option<usize> {
        self.chain.iter().position(|t| matches!(t, Transform::Basis(_)))
    }

    fn product(&self, factors: &[Transform]) -> DenseMatrix {
        let n = self.n();
        factors
            .iter()
            .fold(DenseMatrix::identity(n), |acc, t| t.to_dense(n).matmul(&acc))
    }

    /// `G1`: product of the rotations applied before the basis factor.
    pub fn g1(&self) -> DenseMatrix {
        let end = self.basis_position().unwrap_or(self.chain.len());
        self.product(&self.chain[..end])
    }

    /// `Q`: the basis factor, or the identity if there is none.
    pub fn q(&self) -> DenseMatrix {
        match self.basis_position() {
            Some(p) => self.chain[p].to_dense(self.n()),
            None => DenseMatrix::identity(self.n()),
        }
    }

    /// `G2`: product of the rotations applied after the basis factor.
    pub fn g2(&self) -> DenseMatrix {
        match self.basis_position() {
            Some(p) => self.product(&self.chain[p + 1..]),
            None => DenseMatrix::identity(self.n()),
        }
    }

    /// `(||G1 - I||_F, ||G2 - I||_F)`.
    pub fn factor_norms(&self) -> (f64, f64) {
        (self.g1().dist_to_identity(), self.g2().dist_to_identity())
    }

    pub fn rotation_count(&self) -> usize {
        self.chain.iter().filter(|t| matches!(t, Transform::Givens(_))).count()
    }
}
