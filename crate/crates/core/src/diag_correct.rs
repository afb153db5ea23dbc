use std::collections::BTreeSet;

use crate::certificate::{CorrectionCertificate, CorrectionStep, StepKind, Transform};
use crate::error::Result;
use crate::givens::{solve_in_plane, TwoByTwoProblem};
use crate::linalg::{conjugate_in_place, DenseHermitian, MatrixKind};
use crate::majorization::{check_majorization_default, sorted_ascending, Tolerances};

/// Chooses which enqueued index to pop next.
pub trait PopPolicy {
    fn pop(&mut self, queue: &BTreeSet<usize>) -> usize;
}

/// Pops the smallest enqueued index.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinIndex;

impl PopPolicy for MinIndex {
    fn pop(&mut self, queue: &BTreeSet<usize>) -> usize {
        *queue.first().expect("pop from empty queue")
    }
}

/// Scans offsets `h` in order and cancels every surplus against earlier
/// deficits.
///
/// `rotate(i, j, h)` must move `h[i]` onto `j`; the driver then records
/// `h[j] += h[i]`, `h[i] = 0`. Offsets with `|h| <= tau` count as zero. If a
/// surplus has no deficit left to pair with, it is left in place.
pub(crate) fn run_queue(
    h: &mut [f64],
    tau: f64,
    policy: &mut dyn PopPolicy,
    mut rotate: impl FnMut(usize, usize, &[f64]) -> Result<()>,
) -> Result<()> {
    let mut queue = BTreeSet::new();
    for j in 0..h.len() {
        if h[j].abs() <= tau {
            continue;
        }
        if h[j] < 0.0 {
            queue.insert(j);
            continue;
        }
        while h[j] > tau && !queue.is_empty() {
            let i = policy.pop(&queue);
            queue.remove(&i);
            rotate(i, j, h)?;
            h[j] += h[i];
            h[i] = 0.0;
        }
        if h[j] < -tau {
            queue.insert(j);
        }
    }
    Ok(())
}

/// Knobs for [`correct_diagonal_with`].
pub struct DiagOptions<'a> {
    pub kind: MatrixKind,
    pub policy: &'a mut dyn PopPolicy,
    /// Use the negative root whenever the pair is uncoupled.
    pub negative_root: &'a mut dyn FnMut() -> bool,
}

/// Builds a matrix with diagonal `d` and spectrum `λ̃`, starting from
/// `diag(λ̃)` aligned to the ascending order of `d`.
pub fn correct_diagonal(d: &[f64], lambda_tilde: &[f64]) -> Result<CorrectionCertificate> {
    let mut policy = MinIndex;
    let mut never = || false;
    correct_diagonal_with(
        d,
        lambda_tilde,
        DiagOptions { kind: MatrixKind::RealSymmetric, policy: &mut policy, negative_root: &mut never },
    )
}

pub fn correct_diagonal_with(
    d: &[f64],
    lambda_tilde: &[f64],
    opts: DiagOptions<'_>,
) -> Result<CorrectionCertificate> {
    check_majorization_default(lambda_tilde, d)?.into_result()?;
    let n = d.len();
    let tol = Tolerances::for_target(d);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let lam = sorted_ascending(lambda_tilde);

    let mut initial = vec![0.0; n];
    for (k, &orig) in order.iter().enumerate() {
        initial[orig] = lam[k];
    }
    let mut h: Vec<f64> = (0..n).map(|k| lam[k] - d[order[k]]).collect();

    let mut m = DenseHermitian::from_diagonal(&initial, opts.kind);
    let mut chain = Vec::new();
    let mut steps = Vec::new();
    let hermitian = opts.kind == MatrixKind::ComplexHermitian;
    let negative_root = opts.negative_root;

    run_queue(&mut h, tol.tau_trace, opts.policy, |i, j, h| {
        let (oi, oj) = (order[i], order[j]);
        let p = TwoByTwoProblem::complex(m.diag_entry(oi), m.get(oi, oj), m.diag_entry(oj), d[oi], d[oj]);
        let mut g = solve_in_plane(&p, oi, oj, hermitian)?;
        if p.b12.norm() == 0.0 && negative_root() {
            g.theta = -g.theta;
        }
        conjugate_in_place(&mut m, &g)?;
        chain.push(Transform::Givens(g));
        steps.push(CorrectionStep {
            i: oi,
            j: oj,
            rotation: g,
            updated_perturbations: (0.0, h[i] + h[j]),
            kind: StepKind::Diagonal,
        });
        Ok(())
    })?;

    let original = DenseHermitian::from_diagonal(d, opts.kind);
    CorrectionCertificate::finish(m, initial, chain, steps, &original, lambda_tilde)
}

/// The step sequence of [`correct_diagonal`].
pub fn correction_trace(d: &[f64], lambda_tilde: &[f64]) -> Result<Vec<CorrectionStep>> {
    Ok(correct_diagonal(d, lambda_tilde)?.steps)
}
