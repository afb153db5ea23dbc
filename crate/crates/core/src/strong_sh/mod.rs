mod block;
mod decompose;
mod violation;
mod window;

pub use block::{absorb_scalar, correct_irreducible, merge_blocks, merge_blocks_certificate, StrongBlock};
pub use decompose::{block_decompose, block_decompose_with, Block, BlockPartition, BlockTag, ComponentSpan};
pub use violation::gen_violation_perturbation;
pub use window::{connected_components, default_tau_struct, is_irreducible, spectrum_window, SpectrumWindow};

pub(crate) use block::BlockCorrection;

use crate::certificate::{CorrectionCertificate, CorrectionStep, Transform};
use crate::diag_correct::correct_diagonal_with;
use crate::diag_correct::{DiagOptions, MinIndex};
use crate::error::{Error, Result};
use crate::linalg::{eig_sym, DenseHermitian, DenseMatrix, DEFAULT_EIG_TOL};
use crate::majorization::{check_majorization_default, classify_strictness, Strictness, Tolerances};

/// Builds the strong block for block `b` of `part` by folding its components
/// left to right.
pub(crate) fn build_block(a: &DenseHermitian, part: &BlockPartition, b: usize) -> Result<StrongBlock> {
    let mut acc: Option<StrongBlock> = None;
    for span in &part.blocks[b].components {
        let idx = &part.permutation[span.start..span.end];
        let next = if idx.len() == 1 {
            StrongBlock::Scalar { value: a.diag_entry(idx[0]) }
        } else {
            StrongBlock::irreducible(a.principal_submatrix(idx))?
        };
        acc = Some(match acc {
            None => next,
            Some(prev) => merge_blocks(prev, next)?,
        });
    }
    Ok(acc.expect("partition block without components"))
}

/// `P Q P^T` for a matrix given in permuted coordinates.
pub(crate) fn unpermute_matrix(q: &DenseMatrix, perm: &[usize]) -> DenseMatrix {
    let n = q.n();
    let mut out = DenseMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            out[(perm[r], perm[c])] = q[(r, c)];
        }
    }
    out
}

pub(crate) fn unpermute_step(s: &CorrectionStep, perm: &[usize]) -> CorrectionStep {
    CorrectionStep { i: perm[s.i], j: perm[s.j], rotation: s.rotation.remap(|k| perm[k]), ..s.clone() }
}

/// Chain, initial spectrum and steps of a permuted-coordinate certificate,
/// expressed in original coordinates.
pub(crate) fn unpermute_certificate(
    c: &CorrectionCertificate,
    perm: &[usize],
) -> (Vec<f64>, Vec<Transform>, Vec<CorrectionStep>) {
    let mut initial = vec![0.0; perm.len()];
    for (k, &v) in c.initial_spectrum.iter().enumerate() {
        initial[perm[k]] = v;
    }
    let chain = c
        .chain
        .iter()
        .map(|t| match t {
            Transform::Givens(g) => Transform::Givens(g.remap(|k| perm[k])),
            Transform::Basis(q) => Transform::Basis(unpermute_matrix(q, perm)),
        })
        .collect();
    let steps = c.steps.iter().map(|s| unpermute_step(s, perm)).collect();
    (initial, chain, steps)
}

pub(crate) fn replay(initial: &[f64], chain: &[Transform], kind: crate::linalg::MatrixKind) -> Result<DenseHermitian> {
    let mut m = DenseHermitian::from_diagonal(initial, kind);
    for t in chain {
        t.apply(&mut m)?;
    }
    Ok(m)
}

/// `a` is `c I` up to the default tolerances.
pub(crate) fn scalar_value(a: &DenseHermitian) -> Option<f64> {
    let d = a.diagonal();
    let tol = Tolerances::for_target(&d).tau_maj;
    let c = d[0];
    let flat = d.iter().all(|x| (x - c).abs() <= tol);
    let tau = default_tau_struct(a);
    let diagonal = (0..a.n()).all(|i| (i + 1..a.n()).all(|j| a.get(i, j).norm() <= tau));
    (flat && diagonal).then_some(c)
}

/// Strong correction of a scalar, irreducible, or decomposable-into-one-block
/// matrix.
///
/// The chain has the form `G1`, `Basis(Q)`, `G2`. A scalar matrix `c I` takes
/// any eigenbasis, so `Q` is chosen to carry `diag(λ̃)` onto diagonal `c`
/// and both `G1` and `G2` are the identity.
pub fn strong_sh_correct(a: &DenseHermitian, lambda_tilde: &[f64]) -> Result<CorrectionCertificate> {
    let n = a.n();
    if lambda_tilde.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: lambda_tilde.len() });
    }
    let residual = lambda_tilde.iter().sum::<f64>() - a.trace();
    if residual.abs() > Tolerances::for_target(&a.diagonal()).tau_trace {
        return Err(Error::TraceMismatch { residual });
    }

    if let Some(c) = scalar_value(a) {
        let mut policy = MinIndex;
        let mut never = || false;
        let d = vec![c; n];
        let opts = DiagOptions { kind: a.kind(), policy: &mut policy, negative_root: &mut never };
        let dc = correct_diagonal_with(&d, lambda_tilde, opts)?;
        let q = dc.g1();
        let chain = vec![Transform::Basis(q)];
        let m = replay(&dc.initial_spectrum, &chain, a.kind())?;
        return CorrectionCertificate::finish(m, dc.initial_spectrum, chain, vec![], a, lambda_tilde);
    }

    let part = block_decompose(a)?;
    if part.blocks.len() > 1 {
        let eig = eig_sym(a, DEFAULT_EIG_TOL)?;
        let d = a.diagonal();
        let report = check_majorization_default(&eig.eigenvalues, &d)?;
        let k = match classify_strictness(&report, &eig.eigenvalues, &d) {
            Ok(Strictness::NonStrictCase(k)) => k,
            _ => part.blocks[0].len(),
        };
        return Err(Error::NotStronglyCorrectable { k });
    }

    let block = build_block(a, &part, 0)?;
    let local = block.certificate(lambda_tilde, a.kind())?;
    let (initial, chain, steps) = unpermute_certificate(&local, &part.permutation);
    let m = replay(&initial, &chain, a.kind())?;
    let mut cert = CorrectionCertificate::finish(m, initial, chain, steps, a, lambda_tilde)?;
    cert.partition = Some(part);
    Ok(cert)
}
