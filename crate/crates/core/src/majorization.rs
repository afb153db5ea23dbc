use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerances for the partial-sum and trace comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tau_maj: f64,
    pub tau_trace: f64,
}

impl Tolerances {
    pub const REL: f64 = 1e-12;

    /// Scale-aware defaults derived from the target vector `d`.
    pub fn for_target(d: &[f64]) -> Self {
        let scale = 1.0 + inf_norm(d);
        Self {
            tau_maj: Self::REL * scale,
            tau_trace: Self::REL * d.len().max(1) as f64 * scale,
        }
    }

    pub fn exact() -> Self {
        Self { tau_maj: 0.0, tau_trace: 0.0 }
    }
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Outcome of comparing `λ ≺ d` through ascending partial sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationReport {
    /// `slack_k = D_k - Λ_k` for `k = 1..n-1`.
    pub k_slacks: Vec<f64>,
    /// `Σ d - Σ λ`.
    pub trace_residual: f64,
    pub holds: bool,
    /// `slack_k > tau_maj`, per `k`.
    pub strict: Vec<bool>,
    /// Prefix sums of `λ↑`, length `n`.
    pub lambda_partial: Vec<f64>,
    /// Prefix sums of `d↑`, length `n`.
    pub d_partial: Vec<f64>,
    pub tolerances: Tolerances,
}

impl MajorizationReport {
    pub fn n(&self) -> usize {
        self.d_partial.len()
    }

    /// Smallest 1-based `k` whose relation fails; `n` denotes the trace.
    pub fn first_violation(&self) -> Option<(usize, f64)> {
        for (idx, &s) in self.k_slacks.iter().enumerate() {
            if s < -self.tolerances.tau_maj {
                return Some((idx + 1, s));
            }
        }
        if self.trace_residual.abs() > self.tolerances.tau_trace {
            return Some((self.n(), self.trace_residual));
        }
        None
    }

    pub fn into_result(self) -> Result<Self> {
        match self.first_violation() {
            Some((k, slack)) => Err(Error::MajorizationViolated { k, slack }),
            None => Ok(self),
        }
    }

    fn from_partials(lambda_partial: Vec<f64>, d_partial: Vec<f64>, tolerances: Tolerances) -> Self {
        let n = d_partial.len();
        let k_slacks: Vec<f64> =
            (0..n.saturating_sub(1)).map(|k| d_partial[k] - lambda_partial[k]).collect();
        let trace_residual = if n == 0 { 0.0 } else { d_partial[n - 1] - lambda_partial[n - 1] };
        let strict = k_slacks.iter().map(|&s| s > tolerances.tau_maj).collect();
        let holds = k_slacks.iter().all(|&s| s >= -tolerances.tau_maj)
            && trace_residual.abs() <= tolerances.tau_trace;
        Self { k_slacks, trace_residual, holds, strict, lambda_partial, d_partial, tolerances }
    }
}

pub(crate) fn sorted_ascending(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Checks `λ ≺ d`: ascending partial sums of `λ` bounded by those of `d`,
/// with equal totals.
pub fn check_majorization(
    lambda: &[f64],
    d: &[f64],
    tau_maj: f64,
    tau_trace: f64,
) -> Result<MajorizationReport> {
    if lambda.len() != d.len() {
        return Err(Error::DimensionMismatch { expected: d.len(), found: lambda.len() });
    }
    if d.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    assert!(tau_maj >= 0.0 && tau_trace >= 0.0, "tolerances must be non-negative");
    Ok(MajorizationReport::from_partials(
        prefix_sums(&sorted_ascending(lambda)),
        prefix_sums(&sorted_ascending(d)),
        Tolerances { tau_maj, tau_trace },
    ))
}

/// [`check_majorization`] with [`Tolerances::for_target`].
pub fn check_majorization_default(lambda: &[f64], d: &[f64]) -> Result<MajorizationReport> {
    let tol = Tolerances::for_target(d);
    check_majorization(lambda, d, tol.tau_maj, tol.tau_trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strictness {
    ScalarMatrixCase,
    StrictCase,
    /// Smallest 1-based index whose relation holds with equality.
    NonStrictCase(usize),
}

pub fn classify_strictness(report: &MajorizationReport, lambda: &[f64], d: &[f64]) -> Result<Strictness> {
    if !report.holds {
        return Err(Error::MajorizationFails);
    }
    let tau = report.tolerances.tau_maj;
    let c = d[0];
    if lambda.iter().chain(d).all(|&x| (x - c).abs() <= tau) {
        return Ok(Strictness::ScalarMatrixCase);
    }
    match report.strict.iter().position(|&s| !s) {
        Some(idx) => Ok(Strictness::NonStrictCase(idx + 1)),
        None => Ok(Strictness::StrictCase),
    }
}

/// Block-level majorization: `λ̃↑` is cut into consecutive chunks of
/// `block_sizes`, and the chunk sums are compared with `block_traces` by
/// prefix sums in block order (no re-sorting at the block level).
pub fn blockwise_majorization_sizes(
    lambda_tilde: &[f64],
    block_traces: &[f64],
    block_sizes: &[usize],
    tol: Tolerances,
) -> Result<MajorizationReport> {
    if block_traces.len() != block_sizes.len() {
        return Err(Error::PartitionMismatch(format!(
            "{} block traces for {} blocks",
            block_traces.len(),
            block_sizes.len()
        )));
    }
    if block_sizes.is_empty() || block_sizes.contains(&0) {
        return Err(Error::PartitionMismatch("empty block".into()));
    }
    let total: usize = block_sizes.iter().sum();
    if total != lambda_tilde.len() {
        return Err(Error::PartitionMismatch(format!(
            "blocks cover {total} indices, spectrum has {}",
            lambda_tilde.len()
        )));
    }
    let sorted = sorted_ascending(lambda_tilde);
    let mut sums = Vec::with_capacity(block_sizes.len());
    let mut at = 0;
    for &m in block_sizes {
        sums.push(sorted[at..at + m].iter().sum::<f64>());
        at += m;
    }
    Ok(MajorizationReport::from_partials(prefix_sums(&sums), prefix_sums(block_traces), tol))
}

/// [`blockwise_majorization_sizes`] over the blocks of `partition`.
pub fn blockwise_majorization(
    lambda_tilde: &[f64],
    block_traces: &[f64],
    partition: &crate::strong_sh::BlockPartition,
    tol: Tolerances,
) -> Result<MajorizationReport> {
    blockwise_majorization_sizes(lambda_tilde, block_traces, &partition.block_sizes(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(l: &[f64], d: &[f64]) -> MajorizationReport {
        check_majorization_default(l, d).unwrap()
    }

    #[test]
    fn textbook_holds() {
        let r = check(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]);
        assert!(r.holds);
        assert_eq!(r.k_slacks, vec![1.0, 1.0]);
        assert_eq!(r.trace_residual, 0.0);
    }

    #[test]
    fn remark_counterexample_fails_first_relation() {
        let r = check(&[1.01, 1.99], &[1.0, 2.0]);
        assert!(!r.holds);
        assert!((r.k_slacks[0] + 0.01).abs() < 1e-15);
        assert_eq!(r.first_violation().unwrap().0, 1);
    }

    #[test]
    fn equal_vectors_have_zero_slack() {
        let r = check(&[5.0; 3], &[5.0; 3]);
        assert!(r.holds);
        assert_eq!(r.k_slacks, vec![0.0, 0.0]);
        assert_eq!(r.strict, vec![false, false]);
    }

    #[test]
    fn trace_violation_reported_at_n() {
        let r = check(&[1.0, 2.0], &[1.0, 2.5]);
        assert!(!r.holds);
        assert_eq!(r.first_violation().unwrap().0, 2);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            check_majorization(&[1.0], &[1.0, 2.0], 0.0, 0.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn strictness_classes() {
        let c = |l: &[f64], d: &[f64]| classify_strictness(&check(l, d), l, d).unwrap();
        assert_eq!(c(&[2.0, 2.0], &[2.0, 2.0]), Strictness::ScalarMatrixCase);
        assert_eq!(c(&[-1.0, 1.0], &[0.0, 0.0]), Strictness::StrictCase);
        assert_eq!(c(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), Strictness::NonStrictCase(1));
        let bad = check(&[1.01, 1.99], &[1.0, 2.0]);
        assert_eq!(classify_strictness(&bad, &[1.01, 1.99], &[1.0, 2.0]), Err(Error::MajorizationFails));
    }

    #[test]
    fn blockwise_examples() {
        let eps = 1e-3;
        let tol = Tolerances::for_target(&[3.0, 7.0]);
        let single = blockwise_majorization_sizes(&[1.0, 2.0, 3.0], &[6.0], &[3], tol).unwrap();
        assert!(single.holds && single.k_slacks.is_empty());

        // Two blocks of size 1 with traces 3 and 7.
        let ok = blockwise_majorization_sizes(&[3.0 - eps, 7.0 + eps], &[3.0, 7.0], &[1, 1], tol).unwrap();
        assert!(ok.holds);
        assert!((ok.k_slacks[0] - eps).abs() < 1e-12);
        let bad = blockwise_majorization_sizes(&[3.0 + eps, 7.0 - eps], &[3.0, 7.0], &[1, 1], tol).unwrap();
        assert!(!bad.holds);
        assert!((bad.k_slacks[0] + eps).abs() < 1e-12);
    }

    #[test]
    fn blockwise_rejects_bad_partition() {
        let tol = Tolerances::exact();
        assert!(matches!(
            blockwise_majorization_sizes(&[1.0, 2.0], &[3.0], &[1], tol),
            Err(Error::PartitionMismatch(_))
        ));
        assert!(matches!(
            blockwise_majorization_sizes(&[1.0, 2.0], &[1.0, 2.0], &[2, 0], tol),
            Err(Error::PartitionMismatch(_))
        ));
    }
}
