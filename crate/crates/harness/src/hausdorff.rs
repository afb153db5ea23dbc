use std::collections::BTreeSet;

use schur_horn::{
    check_majorization_default, correct_diagonal_with, fro_dist, schur_horn_correct, DenseHermitian, DiagOptions,
    MatrixKind, PopPolicy,
};

use crate::error::{HarnessError, Result};
use crate::rng::SplitMix64;

/// Pops a uniformly random enqueued index.
pub struct RandomPop(pub SplitMix64);

impl PopPolicy for RandomPop {
    fn pop(&mut self, queue: &BTreeSet<usize>) -> usize {
        *queue.iter().nth(self.0.below(queue.len())).expect("pop from empty queue")
    }
}

/// A random real member with diagonal `d` and spectrum `lambda`: a diagonal
/// correction with random queue order and root signs, then a random sign
/// similarity.
pub fn random_member(d: &[f64], lambda: &[f64], rng: &mut SplitMix64) -> Result<DenseHermitian> {
    let mut policy = RandomPop(SplitMix64::new(rng.next_u64()));
    let mut roots = SplitMix64::new(rng.next_u64());
    let mut negative_root = || roots.coin();
    let cert = correct_diagonal_with(
        d,
        lambda,
        DiagOptions { kind: MatrixKind::RealSymmetric, policy: &mut policy, negative_root: &mut negative_root },
    )?;
    let mut x = cert.result;
    let signs: Vec<f64> = (0..d.len()).map(|_| rng.sign()).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let v = x.get(i, j) * (signs[i] * signs[j]);
            x.set(i, j, v);
        }
    }
    Ok(x)
}

/// Upper-bound surrogate for `sup_{X in [A1]} inf_{Y in [A2]} ||X - Y||_F`
/// over matrices with diagonal `d`.
///
/// Each of `samples` random members of the class of `lambda1` is corrected
/// to `lambda2` and the largest distance is returned. Each inner infimum is
/// replaced by one feasible member, so the value bounds the one-sided term
/// from above. Swap the spectra for the other term.
pub fn hausdorff_upper_bound(lambda1: &[f64], lambda2: &[f64], d: &[f64], samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(HarnessError::EmptySample);
    }
    check_majorization_default(lambda1, d)?.into_result()?;
    check_majorization_default(lambda2, d)?.into_result()?;
    let mut rng = SplitMix64::new(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let x = random_member(d, lambda1, &mut rng)?;
        let y = schur_horn_correct(&x, lambda2)?;
        worst = worst.max(fro_dist(&x, &y.result)?);
    }
    Ok(worst)
}
