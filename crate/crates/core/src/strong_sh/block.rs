use std::collections::VecDeque;

use super::window::{connected_components, default_tau_struct, SpectrumWindow};
use crate::certificate::{CorrectionCertificate, CorrectionStep, StepKind, Transform};
use crate::error::{Error, Result};
use crate::givens::{solve_in_plane, TwoByTwoProblem};
use crate::linalg::{
    conjugate_in_place, eig_sym, DenseHermitian, DenseMatrix, GivensParams, MatrixKind,
    SpectralDecomposition, DEFAULT_EIG_TOL,
};
use crate::majorization::inf_norm;

/// A matrix that can be corrected strongly, i.e. with both factors `G1`,
/// `G2` close to the identity.
///
/// Coordinates of a block are its eigen coordinates: position `k` pairs with
/// the `k`-th entry of [`StrongBlock::eigenvalues`]. For a merged block these
/// are the left coordinates followed by the right ones.
#[derive(Debug, Clone)]
pub enum StrongBlock {
    Scalar { value: f64 },
    Irreducible { matrix: DenseHermitian, eig: SpectralDecomposition },
    Merged { left: Box<StrongBlock>, right: Box<StrongBlock>, window: SpectrumWindow },
}

/// Factors of a block correction, in block-local coordinates.
#[derive(Debug, Clone)]
pub(crate) struct BlockCorrection {
    pub g1: Vec<GivensParams>,
    pub q: DenseMatrix,
    pub g2: Vec<GivensParams>,
    pub steps: Vec<CorrectionStep>,
}

impl BlockCorrection {
    pub(crate) fn shift(&mut self, offset: usize) {
        let by = |k: usize| k + offset;
        for g in self.g1.iter_mut().chain(self.g2.iter_mut()) {
            *g = g.remap(by);
        }
        for s in &mut self.steps {
            s.i += offset;
            s.j += offset;
            s.rotation = s.rotation.remap(by);
        }
    }
}

fn trace_tol(values: &[f64]) -> f64 {
    1e-12 * values.len().max(1) as f64 * (1.0 + inf_norm(values))
}

impl StrongBlock {
    /// Irreducible block from `matrix`; fails if its graph is disconnected.
    pub fn irreducible(matrix: DenseHermitian) -> Result<Self> {
        let comps = connected_components(&matrix, default_tau_struct(&matrix)).len();
        if comps != 1 {
            return Err(Error::NotIrreducible { components: comps });
        }
        let eig = eig_sym(&matrix, DEFAULT_EIG_TOL)?;
        Ok(Self::Irreducible { matrix, eig })
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Scalar { .. } => 1,
            Self::Irreducible { matrix, .. } => matrix.n(),
            Self::Merged { left, right, .. } => left.n() + right.n(),
        }
    }

    pub fn window(&self) -> SpectrumWindow {
        match self {
            Self::Scalar { value } => SpectrumWindow::point(*value),
            Self::Irreducible { eig, .. } => SpectrumWindow::of_sorted(&eig.eigenvalues),
            Self::Merged { window, .. } => *window,
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            Self::Scalar { value } => *value,
            Self::Irreducible { matrix, .. } => matrix.trace(),
            Self::Merged { left, right, .. } => left.trace() + right.trace(),
        }
    }

    /// Eigenvalues in eigen-coordinate order (ascending within each leaf).
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self {
            Self::Scalar { value } => vec![*value],
            Self::Irreducible { eig, .. } => eig.eigenvalues.clone(),
            Self::Merged { left, right, .. } => {
                let mut v = left.eigenvalues();
                v.extend(right.eigenvalues());
                v
            }
        }
    }

    /// The block as a matrix in its own coordinates.
    pub fn matrix(&self, kind: MatrixKind) -> DenseHermitian {
        let n = self.n();
        let mut out = DenseHermitian::zeros(n, kind);
        self.write_matrix(&mut out, 0);
        out
    }

    fn write_matrix(&self, out: &mut DenseHermitian, offset: usize) {
        match self {
            Self::Scalar { value } => out.set_diag(offset, *value),
            Self::Irreducible { matrix, .. } => {
                for i in 0..matrix.n() {
                    for j in i..matrix.n() {
                        out.set(offset + i, offset + j, matrix.get(i, j));
                    }
                }
            }
            Self::Merged { left, right, .. } => {
                left.write_matrix(out, offset);
                right.write_matrix(out, offset + left.n());
            }
        }
    }

    /// Pairs `lambda_tilde` with the eigen coordinates by rank.
    pub fn align(&self, lambda_tilde: &[f64]) -> Result<Vec<f64>> {
        let eigs = self.eigenvalues();
        if lambda_tilde.len() != eigs.len() {
            return Err(Error::DimensionMismatch { expected: eigs.len(), found: lambda_tilde.len() });
        }
        let mut rank: Vec<usize> = (0..eigs.len()).collect();
        rank.sort_by(|&x, &y| eigs[x].total_cmp(&eigs[y]).then(x.cmp(&y)));
        let mut lam = lambda_tilde.to_vec();
        lam.sort_by(f64::total_cmp);
        let mut out = vec![0.0; eigs.len()];
        for (r, &coord) in rank.iter().enumerate() {
            out[coord] = lam[r];
        }
        Ok(out)
    }

    /// Corrects `diag(values)` (eigen coordinates) to a matrix whose diagonal
    /// equals that of the block.
    /// `tau` bounds the trace offsets treated as zero; it must be at least the
    /// threshold the caller used to stop balancing.
    pub(crate) fn correct(&self, values: &[f64], hermitian: bool, tau: f64) -> Result<BlockCorrection> {
        assert_eq!(values.len(), self.n());
        match self {
            Self::Scalar { value } => {
                let residual = values[0] - value;
                if residual.abs() > tau {
                    return Err(Error::TraceMismatch { residual });
                }
                Ok(BlockCorrection { g1: vec![], q: DenseMatrix::identity(1), g2: vec![], steps: vec![] })
            }
            Self::Irreducible { matrix, eig } => tree_correction(matrix, eig, values, hermitian),
            Self::Merged { left, right, .. } => merged_correction(left, right, values, hermitian, tau),
        }
    }

    /// Full certificate for `lambda_tilde`, paired by rank.
    pub fn certificate(&self, lambda_tilde: &[f64], kind: MatrixKind) -> Result<CorrectionCertificate> {
        let values = self.align(lambda_tilde)?;
        self.certificate_aligned(values, kind)
    }

    pub(crate) fn certificate_aligned(&self, values: Vec<f64>, kind: MatrixKind) -> Result<CorrectionCertificate> {
        let original = self.matrix(kind);
        let residual = values.iter().sum::<f64>() - self.trace();
        let tau = trace_tol(&original.diagonal());
        if residual.abs() > tau {
            return Err(Error::TraceMismatch { residual });
        }
        let bc = self.correct(&values, kind == MatrixKind::ComplexHermitian, tau)?;
        assemble(&original, values, bc)
    }
}

fn assemble(original: &DenseHermitian, values: Vec<f64>, bc: BlockCorrection) -> Result<CorrectionCertificate> {
    let mut chain: Vec<Transform> = bc.g1.into_iter().map(Transform::Givens).collect();
    chain.push(Transform::Basis(bc.q));
    chain.extend(bc.g2.into_iter().map(Transform::Givens));
    let mut m = DenseHermitian::from_diagonal(&values, original.kind());
    for t in &chain {
        t.apply(&mut m)?;
    }
    CorrectionCertificate::finish(m, values.clone(), chain, bc.steps, original, &values)
}

/// Spanning-tree elimination on `B = Q diag(values) Q^*`.
fn tree_correction(
    a: &DenseHermitian,
    eig: &SpectralDecomposition,
    values: &[f64],
    hermitian: bool,
) -> Result<BlockCorrection> {
    let n = a.n();
    let tau_struct = default_tau_struct(a);
    let tau_skip = 1e-12 * (1.0 + a.fro_norm());
    let mut b = eig.reconstruct(values, a.kind());
    let mut g2 = Vec::new();
    let mut steps = Vec::new();

    let (parent, order) = bfs_tree(a, tau_struct);
    for v in order {
        let p = parent[v];
        let f = a.diag_entry(v) - b.diag_entry(v);
        if f.abs() <= tau_skip {
            continue;
        }
        let b12 = b.get(v, p);
        if b12.norm() <= tau_struct {
            return Err(Error::EdgeVanished { i: v, j: p, value: b12.norm() });
        }
        let d2 = b.diag_entry(v) + b.diag_entry(p) - a.diag_entry(v);
        let prob = TwoByTwoProblem::complex(b.diag_entry(v), b12, b.diag_entry(p), a.diag_entry(v), d2);
        let g = solve_in_plane(&prob, v, p, hermitian)?;
        conjugate_in_place(&mut b, &g)?;
        g2.push(g);
        steps.push(CorrectionStep {
            i: v,
            j: p,
            rotation: g,
            updated_perturbations: (b.diag_entry(v) - a.diag_entry(v), b.diag_entry(p) - a.diag_entry(p)),
            kind: StepKind::TreeElimination,
        });
    }
    debug_assert_eq!(b.n(), n);
    Ok(BlockCorrection { g1: vec![], q: eig.basis.clone(), g2, steps })
}

/// BFS tree from vertex 0; returns parents and the non-root vertices ordered
/// deepest first, ties by index.
fn bfs_tree(a: &DenseHermitian, tau_struct: f64) -> (Vec<usize>, Vec<usize>) {
    let n = a.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for w in 0..n {
            if depth[w] == usize::MAX && a.get(v, w).norm() > tau_struct {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by(|&x, &y| depth[y].cmp(&depth[x]).then(x.cmp(&y)));
    (parent, order)
}

/// Compensation rotation followed by independent sub-block corrections.
fn merged_correction(
    left: &StrongBlock,
    right: &StrongBlock,
    values: &[f64],
    hermitian: bool,
    tau: f64,
) -> Result<BlockCorrection> {
    let nl = left.n();
    let mut vals = values.to_vec();
    let h = vals[..nl].iter().sum::<f64>() - left.trace();
    let mut g1 = Vec::new();
    let mut steps = Vec::new();

    if h.abs() > tau {
        let (l, r) = vals.split_at(nl);
        let (a, b) = if h > 0.0 { (argmax(l), argmin(r)) } else { (argmin(l), argmax(r)) };
        let (ia, ib) = (a, nl + b);
        let d1 = vals[ia] - h;
        let d2 = vals[ib] + h;
        let prob = TwoByTwoProblem::real(vals[ia], 0.0, vals[ib], d1, d2);
        let g = solve_in_plane(&prob, ia, ib, false)?;
        vals[ia] = d1;
        vals[ib] = d2;
        g1.push(g);
        steps.push(CorrectionStep {
            i: ia,
            j: ib,
            rotation: g,
            updated_perturbations: (0.0, 0.0),
            kind: StepKind::Compensation,
        });
    }

    let lc = left.correct(&vals[..nl], hermitian, tau)?;
    let mut rc = right.correct(&vals[nl..], hermitian, tau)?;
    rc.shift(nl);

    let mut q = DenseMatrix::zeros(values.len());
    q.embed(&lc.q, 0);
    q.embed(&rc.q, nl);
    g1.extend(lc.g1);
    g1.extend(rc.g1);
    steps.extend(lc.steps);
    steps.extend(rc.steps);
    let mut g2 = lc.g2;
    g2.extend(rc.g2);
    Ok(BlockCorrection { g1, q, g2, steps })
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |best, k| if v[k] > v[best] { k } else { best })
}

fn argmin(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |best, k| if v[k] < v[best] { k } else { best })
}

/// Combines two blocks whose windows overlap in positive length. A scalar on
/// either side must instead lie strictly inside the other window.
pub fn merge_blocks(left: StrongBlock, right: StrongBlock) -> Result<StrongBlock> {
    let (wl, wr) = (left.window(), right.window());
    match (&left, &right) {
        (StrongBlock::Scalar { value }, other) | (other, StrongBlock::Scalar { value })
            if !matches!(other, StrongBlock::Scalar { .. }) =>
        {
            let w = other.window();
            if !w.contains_open(*value) {
                return Err(Error::ScalarOutsideWindow { value: *value, lo: w.lo, hi: w.hi });
            }
        }
        _ => {
            let overlap = wl.overlap(&wr);
            if overlap <= 0.0 {
                return Err(Error::WindowsDisjoint { overlap });
            }
        }
    }
    let window = wl.hull(&wr);
    Ok(StrongBlock::Merged { left: Box::new(left), right: Box::new(right), window })
}

/// Appends the scalar `d2` to `block`; `d2` must lie strictly inside the
/// block window.
pub fn absorb_scalar(block: StrongBlock, d2: f64) -> Result<StrongBlock> {
    let w = block.window();
    if !w.contains_open(d2) {
        return Err(Error::ScalarOutsideWindow { value: d2, lo: w.lo, hi: w.hi });
    }
    merge_blocks(block, StrongBlock::Scalar { value: d2 })
}

/// Certificate for an irreducible `a` and target spectrum `lambda_tilde`.
///
/// The chain is `Basis(Q)` followed by one leaf-to-parent rotation per
/// spanning-tree edge that needs correcting.
pub fn correct_irreducible(a: &DenseHermitian, lambda_tilde: &[f64]) -> Result<CorrectionCertificate> {
    let block = StrongBlock::irreducible(a.clone())?;
    block.certificate(lambda_tilde, a.kind())
}

/// Certificate for a merged block given the spectra of its two halves.
pub fn merge_blocks_certificate(
    left: StrongBlock,
    right: StrongBlock,
    lambda_tilde_left: &[f64],
    lambda_tilde_right: &[f64],
    kind: MatrixKind,
) -> Result<CorrectionCertificate> {
    let mut values = left.align(lambda_tilde_left)?;
    values.extend(right.align(lambda_tilde_right)?);
    let merged = merge_blocks(left, right)?;
    merged.certificate_aligned(values, kind)
}
