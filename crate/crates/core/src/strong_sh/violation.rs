use crate::error::{Error, Result};
use crate::majorization::{check_majorization_default, sorted_ascending};

/// Trace-preserving perturbation of `lambda` that breaks the `i`-th
/// majorization relation against `d`, where that relation holds with equality.
///
/// `i` is 1-based and must be below `n`. With `λ` ascending and `λ_i < λ_n`,
/// the entries equal to `λ_i` are raised by `eps` and the entries equal to
/// `λ_n` pay for it, so the `i`-th partial sum grows by `(i - ℓ) eps` where
/// `ℓ = #{λ < λ_i}`. With `λ_i = λ_n`, the entries equal to `λ_1` are raised
/// and every entry equal to `λ_n` is lowered by `eps`, growing the `i`-th
/// partial sum by `(n - i) eps`.
pub fn gen_violation_perturbation(lambda: &[f64], d: &[f64], i: usize, eps: f64) -> Result<Vec<f64>> {
    let n = lambda.len();
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfBounds { i, j: i, n });
    }
    let report = check_majorization_default(lambda, d)?;
    if !report.holds {
        return Err(Error::MajorizationFails);
    }
    let slack = report.k_slacks[i - 1];
    if slack > report.tolerances.tau_maj {
        return Err(Error::NoEqualityAtI { k: i, slack });
    }
    let lam = sorted_ascending(lambda);
    let (first, last, li) = (lam[0], lam[n - 1], lam[i - 1]);
    if first == last {
        return Err(Error::ScalarSpectrum);
    }
    let below_last = lam.iter().filter(|&&x| x < last).count();
    let mut out = lam.clone();
    if li < last {
        let ell = lam.iter().filter(|&&x| x < li).count();
        let r = lam.iter().filter(|&&x| x <= li).count();
        let share = (r - ell) as f64 / (n - below_last) as f64 * eps;
        for x in &mut out[ell..r] {
            *x += eps;
        }
        for x in &mut out[below_last..] {
            *x -= share;
        }
    } else {
        let r = lam.iter().filter(|&&x| x == first).count();
        let share = (n - below_last) as f64 / r as f64 * eps;
        for x in &mut out[..r] {
            *x += share;
        }
        for x in &mut out[below_last..] {
            *x -= eps;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::check_majorization_default;

    #[test]
    fn two_by_two_example() {
        let lt = gen_violation_perturbation(&[1.0, 2.0], &[1.0, 2.0], 1, 1e-3).unwrap();
        assert!((lt[0] - 1.001).abs() < 1e-15 && (lt[1] - 1.999).abs() < 1e-15);
        let r = check_majorization_default(&lt, &[1.0, 2.0]).unwrap();
        assert_eq!(r.first_violation().unwrap().0, 1);
    }

    #[test]
    fn repeated_lower_values() {
        let eps = 1e-3;
        let lt = gen_violation_perturbation(&[0.0, 0.0, 3.0], &[0.0, 0.0, 3.0], 2, eps).unwrap();
        assert_eq!(lt, vec![eps, eps, 3.0 - 2.0 * eps]);
        let r = check_majorization_default(&lt, &[0.0, 0.0, 3.0]).unwrap();
        assert_eq!(r.first_violation().unwrap().0, 1);
        assert!((r.k_slacks[1] + 2.0 * eps).abs() < 1e-15);
    }

    #[test]
    fn top_group_case() {
        let eps = 1e-3;
        let lam = [0.0, 2.0, 2.0];
        let lt = gen_violation_perturbation(&lam, &lam, 2, eps).unwrap();
        assert_eq!(lt, vec![2.0 * eps, 2.0 - eps, 2.0 - eps]);
        let r = check_majorization_default(&lt, &lam).unwrap();
        assert!((r.k_slacks[1] + eps).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert_eq!(gen_violation_perturbation(&[1.0, 1.0], &[1.0, 1.0], 1, 1e-3), Err(Error::ScalarSpectrum));
        assert!(matches!(
            gen_violation_perturbation(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0], 1, 1e-3),
            Err(Error::NoEqualityAtI { k: 1, .. })
        ));
    }
}
