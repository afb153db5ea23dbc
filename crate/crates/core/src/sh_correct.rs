use crate::certificate::{CorrectionCertificate, CorrectionStep, StepKind, Transform};
use crate::diag_correct::{run_queue, MinIndex, PopPolicy};
use crate::error::{Error, Result};
use crate::givens::{solve_in_plane, TwoByTwoProblem};
use crate::linalg::{conjugate_in_place, DenseHermitian, DenseMatrix, MatrixKind};
use crate::majorization::{blockwise_majorization, sorted_ascending, Tolerances};
use crate::strong_sh::{
    block_decompose, build_block, replay, unpermute_matrix, unpermute_step, BlockCorrection, StrongBlock,
};

/// Corrects a real-symmetric `a` to a matrix with the same diagonal and
/// spectrum `lambda_tilde`.
///
/// The matrix is split into blocks with ordered spectrum windows, `λ̃↑` is
/// cut into consecutive chunks of the block sizes, trace offsets between
/// blocks are cancelled by a queue over the blocks, and each block is then
/// corrected strongly. Fails with `MajorizationViolated { k }` when the
/// block-level partial traces of `λ̃` exceed those of `a` at block `k`.
pub fn schur_horn_correct(a: &DenseHermitian, lambda_tilde: &[f64]) -> Result<CorrectionCertificate> {
    if a.kind() != MatrixKind::RealSymmetric {
        return Err(Error::KindMismatch("schur_horn_correct expects a real-symmetric matrix"));
    }
    correct_with(a, lambda_tilde, &mut MinIndex)
}

/// Hermitian counterpart of [`schur_horn_correct`]; real-symmetric input is
/// promoted to the Hermitian kind.
pub fn schur_horn_correct_hermitian(a: &DenseHermitian, lambda_tilde: &[f64]) -> Result<CorrectionCertificate> {
    correct_with(&a.to_hermitian_kind(), lambda_tilde, &mut MinIndex)
}

/// [`schur_horn_correct`] with a caller-chosen block queue discipline. The
/// solver variant follows the kind of `a`.
pub fn correct_with(
    a: &DenseHermitian,
    lambda_tilde: &[f64],
    policy: &mut dyn PopPolicy,
) -> Result<CorrectionCertificate> {
    let n = a.n();
    if lambda_tilde.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: lambda_tilde.len() });
    }
    let kind = a.kind();
    let hermitian = kind == MatrixKind::ComplexHermitian;
    let tol = Tolerances::for_target(&a.diagonal());

    let part = block_decompose(a)?;
    let traces = part.block_traces(a);
    blockwise_majorization(lambda_tilde, &traces, &part, tol)?.into_result()?;

    let blocks: Vec<StrongBlock> = (0..part.blocks.len()).map(|b| build_block(a, &part, b)).collect::<Result<_>>()?;

    // Working values in permuted eigen coordinates.
    let lam = sorted_ascending(lambda_tilde);
    let mut values = Vec::with_capacity(n);
    for (b, blk) in part.blocks.iter().enumerate() {
        values.extend(blocks[b].align(&lam[blk.range()])?);
    }
    let initial = values.clone();

    let mut w = DenseHermitian::from_diagonal(&values, kind);
    let mut balance = Vec::new();
    let mut steps = Vec::new();
    let mut h: Vec<f64> =
        part.blocks.iter().zip(&traces).map(|(blk, t)| lam[blk.range()].iter().sum::<f64>() - t).collect();

    run_queue(&mut h, tol.tau_trace, policy, |i, j, h| {
        let (bi, bj) = (&part.blocks[i], &part.blocks[j]);
        let (ca, cb, d1) = if bi.len() == 1 && bj.len() == 1 {
            (bi.start, bj.start, traces[i])
        } else {
            let ca = bi.range().min_by(|&x, &y| w.diag_entry(x).total_cmp(&w.diag_entry(y))).unwrap();
            let cb = bj.range().max_by(|&x, &y| w.diag_entry(x).total_cmp(&w.diag_entry(y))).unwrap();
            (ca, cb, w.diag_entry(ca) - h[i])
        };
        let d2 = w.diag_entry(ca) + w.diag_entry(cb) - d1;
        let prob = TwoByTwoProblem::complex(w.diag_entry(ca), w.get(ca, cb), w.diag_entry(cb), d1, d2);
        let g = solve_in_plane(&prob, ca, cb, hermitian)?;
        conjugate_in_place(&mut w, &g)?;
        balance.push(g);
        steps.push(CorrectionStep {
            i: ca,
            j: cb,
            rotation: g,
            updated_perturbations: (0.0, h[i] + h[j]),
            kind: StepKind::BlockBalance,
        });
        Ok(())
    })?;

    let mut g1 = balance;
    let mut g2 = Vec::new();
    let mut q = DenseMatrix::zeros(n);
    for (b, blk) in part.blocks.iter().enumerate() {
        let vals: Vec<f64> = blk.range().map(|k| w.diag_entry(k)).collect();
        let mut bc: BlockCorrection = blocks[b].correct(&vals, hermitian, tol.tau_trace)?;
        bc.shift(blk.start);
        q.embed(&bc.q, blk.start);
        g1.extend(bc.g1);
        g2.extend(bc.g2);
        steps.extend(bc.steps);
    }

    let perm = &part.permutation;
    let mut start = vec![0.0; n];
    for (k, &v) in initial.iter().enumerate() {
        start[perm[k]] = v;
    }
    let mut chain: Vec<Transform> = g1.iter().map(|g| Transform::Givens(g.remap(|k| perm[k]))).collect();
    chain.push(Transform::Basis(unpermute_matrix(&q, perm)));
    chain.extend(g2.iter().map(|g| Transform::Givens(g.remap(|k| perm[k]))));
    let steps = steps.iter().map(|s| unpermute_step(s, perm)).collect();

    let result = replay(&start, &chain, kind)?;
    let mut cert = CorrectionCertificate::finish(result, start, chain, steps, a, lambda_tilde)?;
    cert.partition = Some(part);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_sym, DEFAULT_EIG_TOL};
    use num_complex::Complex64;

    fn sym(rows: &[&[f64]]) -> DenseHermitian {
        DenseHermitian::from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn unperturbed_returns_input() {
        let a = sym(&[&[1.0, 0.3, 0.0], &[0.3, 2.0, 0.0], &[0.0, 0.0, 7.0]]);
        let lam = eig_sym(&a, DEFAULT_EIG_TOL).unwrap().eigenvalues;
        let c = schur_horn_correct(&a, &lam).unwrap();
        assert!(c.distance_to_original < 1e-10);
    }

    #[test]
    fn diagonal_square_root_distance() {
        let eps = 1e-6;
        let a = DenseHermitian::from_diagonal(&[1.0, 2.0, 3.0], MatrixKind::RealSymmetric);
        let c = schur_horn_correct(&a, &[1.0 - eps, 2.0, 3.0 + eps]).unwrap();
        assert!(c.diag_residual < 1e-12);
        let want = 2.0 * eps.sqrt();
        assert!((c.distance_to_original - want).abs() < 0.2 * want);
    }

    #[test]
    fn blockwise_sign_matters() {
        let a = sym(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 5.0]]);
        let h = 1e-4;
        // Raising the first block's trace breaks the first block relation.
        let e = schur_horn_correct(&a, &[-1.0, 1.0 + h, 5.0 - h]).unwrap_err();
        assert!(matches!(e, Error::MajorizationViolated { k: 1, .. }));
        let c = schur_horn_correct(&a, &[-1.0 - h, 1.0, 5.0 + h]).unwrap();
        assert!(c.diag_residual < 1e-10);
        assert!(c.spectrum_residual < 1e-10);
    }

    #[test]
    fn hermitian_imaginary_pair() {
        let eps = 1e-3;
        let rows = vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0)],
        ];
        let a = DenseHermitian::from_complex_rows(&rows).unwrap();
        let c = schur_horn_correct_hermitian(&a, &[-1.0 - eps, 1.0 + eps]).unwrap();
        assert!(c.diag_residual < 1e-12);
        assert!(c.spectrum_residual < 1e-12);
        assert!(c.distance_to_original <= 10.0 * eps);
    }

    #[test]
    fn real_input_matches_hermitian_pipeline() {
        let a = sym(&[&[0.0, 1.0, 0.0, 0.0], &[1.0, 0.5, 0.0, 0.0], &[0.0, 0.0, 3.0, 0.2], &[0.0, 0.0, 0.2, 4.0]]);
        let lam = eig_sym(&a, DEFAULT_EIG_TOL).unwrap().eigenvalues;
        let eps = 1e-5;
        let lt = [lam[0] - eps, lam[1] + eps, lam[2] - eps, lam[3] + eps];
        let r = schur_horn_correct(&a, &lt).unwrap();
        let h = schur_horn_correct_hermitian(&a, &lt).unwrap();
        assert!((r.diag_residual - h.diag_residual).abs() < 1e-10);
        assert!((r.spectrum_residual - h.spectrum_residual).abs() < 1e-10);
        assert!((r.distance_to_original - h.distance_to_original).abs() < 1e-10);
    }

    #[test]
    fn idempotent_on_own_output() {
        let a = sym(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.5]]);
        let h = 1e-4;
        let c = schur_horn_correct(&a, &[-1.0, 0.5 - h, 1.0 + h]).unwrap();
        let again = schur_horn_correct(&c.result, &c.target_spectrum).unwrap();
        assert_eq!(again.rotation_count(), 0);
        assert!(crate::linalg::fro_dist(&again.result, &c.result).unwrap() < 1e-10);
    }
}
