use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::GivensParams;

/// The 2x2 problem: rotate `[[b11, b12], [conj(b12), b22]]` so that its
/// `(1,1)` entry becomes `d1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoByTwoProblem {
    pub b11: f64,
    pub b22: f64,
    pub b12: Complex64,
    pub d1: f64,
    pub d2: f64,
}

impl TwoByTwoProblem {
    pub fn real(b11: f64, b12: f64, b22: f64, d1: f64, d2: f64) -> Self {
        Self { b11, b22, b12: Complex64::new(b12, 0.0), d1, d2 }
    }

    pub fn complex(b11: f64, b12: Complex64, b22: f64, d1: f64, d2: f64) -> Self {
        Self { b11, b22, b12, d1, d2 }
    }

    /// `f = d1 - b11`.
    pub fn f(&self) -> f64 {
        self.d1 - self.b11
    }

    /// `g = b22 - d2`.
    pub fn g(&self) -> f64 {
        self.b22 - self.d2
    }

    /// Quarter discriminant `|b12|^2 + (b22 - d1)(d1 - b11)`.
    pub fn discriminant(&self) -> f64 {
        self.b12.norm_sqr() + (self.b22 - self.d1) * self.f()
    }

    pub fn tau_disc(&self) -> f64 {
        let s = 1.0 + self.b11.abs() + self.b22.abs() + self.b12.norm();
        1e-12 * s * s
    }

    pub fn is_feasible(&self) -> bool {
        self.discriminant() >= -self.tau_disc()
    }
}

/// Tangent of the correcting angle for a real off-diagonal `b12`.
fn solve_tangent(b11: f64, b12: f64, b22: f64, d1: f64, tau: f64) -> Result<f64> {
    let f = d1 - b11;
    if f == 0.0 {
        return Ok(0.0);
    }
    let a = b22 - d1;
    let q = b12 * b12 + a * f;
    if q < -tau {
        return Err(Error::Infeasible { discriminant: q });
    }
    if b12 == 0.0 {
        // t^2 = f / a; take the non-negative root. A negative ratio passed the
        // tolerance check, so d1 sits on one of b11, b22 up to rounding; pick
        // the nearer one.
        return Ok(if a * f >= 0.0 && a != 0.0 {
            (f / a).sqrt()
        } else if f.abs() <= a.abs() {
            0.0
        } else {
            f64::INFINITY
        });
    }
    let root = q.max(0.0).sqrt();
    let den = b12 + b12.signum() * root;
    Ok(if den == 0.0 { f64::INFINITY } else { f / den })
}

fn angle(t: f64) -> f64 {
    if t.is_infinite() {
        FRAC_PI_2
    } else {
        t.atan()
    }
}

/// Real rotation in the plane `(0, 1)` putting `d1` in the `(1,1)` slot.
///
/// Of the two roots the one of smaller magnitude is returned; with
/// `b12 = 0` the non-negative root is used.
pub fn solve_correction_angle(p: &TwoByTwoProblem) -> Result<GivensParams> {
    if p.b12.im != 0.0 {
        return Err(Error::KindMismatch("complex off-diagonal passed to the real solver"));
    }
    let t = solve_tangent(p.b11, p.b12.re, p.b22, p.d1, p.tau_disc())?;
    Ok(GivensParams::real(0, 1, angle(t)))
}

/// Complex rotation in the plane `(0, 1)` putting `d1` in the `(1,1)` slot.
///
/// With phases `(0, 0)` the rotation sees `Re b12`; with `ψ = π/2` it sees
/// `Im b12`. The dominant component picks the branch. If that branch is
/// infeasible while the full problem is not, `ψ = arg b12` is used, under
/// which the rotation sees `|b12|`. Only `ψ` carries a phase, so the
/// rotation tends to the identity with `θ`.
pub fn solve_correction_angle_hermitian(p: &TwoByTwoProblem) -> Result<GivensParams> {
    let tau = p.tau_disc();
    let (re, im) = (p.b12.re, p.b12.im);
    let (b12, psi) = if re.abs() >= im.abs() { (re, 0.0) } else { (im, FRAC_PI_2) };
    match solve_tangent(p.b11, b12, p.b22, p.d1, tau) {
        Ok(t) => Ok(GivensParams::new(0, 1, angle(t), 0.0, psi)),
        Err(e) => {
            if !p.is_feasible() || p.b12.norm() == 0.0 {
                return Err(e);
            }
            let t = solve_tangent(p.b11, p.b12.norm(), p.b22, p.d1, tau)?;
            Ok(GivensParams::new(0, 1, angle(t), 0.0, p.b12.arg()))
        }
    }
}

/// Solves the problem and places the rotation on `(first, second)` of a
/// larger matrix, `first` taking the role of the `(1,1)` slot.
pub fn solve_in_plane(p: &TwoByTwoProblem, first: usize, second: usize, hermitian: bool) -> Result<GivensParams> {
    let g = if hermitian { solve_correction_angle_hermitian(p)? } else { solve_correction_angle(p)? };
    Ok(GivensParams::new(first, second, g.theta, g.phi, g.psi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScenarioCase {
    B12Nonzero,
    ZeroOffDistinct,
    ZeroOffEqualAlphaGtBeta,
    ZeroOffEqualAlphaLeBeta,
}

/// Row of the scenario table: `|θ(ε)| = Θ(ε^γ)` and `‖B̃ - B‖ = O(ε^δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectionScenario {
    pub case_id: ScenarioCase,
    pub gamma: f64,
    pub delta: f64,
}

/// Matches `p` against the four scenario rows, given `f = Θ(ε^α)` and
/// `g = Θ(ε^β)`.
pub fn classify_scenario(p: &TwoByTwoProblem, alpha: f64, beta: f64) -> CorrectionScenario {
    let tol = 1e-12 * (1.0 + p.d1.abs() + p.d2.abs());
    let (case_id, gamma, delta) = if p.b12.norm() > tol {
        (ScenarioCase::B12Nonzero, alpha, alpha)
    } else if (p.d1 - p.d2).abs() > tol {
        (ScenarioCase::ZeroOffDistinct, alpha / 2.0, alpha / 2.0)
    } else if alpha > beta {
        (ScenarioCase::ZeroOffEqualAlphaGtBeta, (alpha - beta) / 2.0, (alpha + beta) / 2.0)
    } else {
        (ScenarioCase::ZeroOffEqualAlphaLeBeta, 0.0, alpha)
    };
    CorrectionScenario { case_id, gamma, delta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{conjugate_by_givens, DenseHermitian, MatrixKind};

    fn apply(p: &TwoByTwoProblem, g: &GivensParams) -> DenseHermitian {
        let kind = if p.b12.im != 0.0 || g.has_phase() {
            MatrixKind::ComplexHermitian
        } else {
            MatrixKind::RealSymmetric
        };
        let mut b = DenseHermitian::from_diagonal(&[p.b11, p.b22], kind);
        b.set(0, 1, p.b12);
        conjugate_by_givens(&b, g).unwrap()
    }

    #[test]
    fn nothing_to_correct() {
        let p = TwoByTwoProblem::real(0.5, 1.0, 2.0, 0.5, 2.0);
        assert_eq!(solve_correction_angle(&p).unwrap().theta, 0.0);
    }

    #[test]
    fn nonzero_coupling_small_root() {
        let p = TwoByTwoProblem::real(-1e-4, 1.0, 1.0 + 1e-4, 0.0, 1.0);
        let g = solve_correction_angle(&p).unwrap();
        assert!((g.theta.tan() - 4.99987e-5).abs() < 1e-9);
        assert!(apply(&p, &g).diag_entry(0).abs() < 1e-12);
    }

    #[test]
    fn zero_coupling_non_negative_root() {
        let p = TwoByTwoProblem::real(-1e-4, 0.0, 1.0, 0.0, 1.0);
        let g = solve_correction_angle(&p).unwrap();
        let t = g.theta.tan();
        assert!(t > 0.0);
        // t^2 = f / (b22 - d1) = 1e-4 / 1.
        assert!((t - 1e-2).abs() < 1e-12);
        assert!(apply(&p, &g).diag_entry(0).abs() < 1e-12);
    }

    #[test]
    fn quarter_turn_when_slots_swap() {
        let p = TwoByTwoProblem::real(1.0, 0.0, 3.0, 3.0, 1.0);
        let g = solve_correction_angle(&p).unwrap();
        assert_eq!(g.theta, FRAC_PI_2);
        assert!((apply(&p, &g).diag_entry(0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_target() {
        // d1 outside [b11, b22] with no coupling.
        let p = TwoByTwoProblem::real(0.0, 0.0, 1.0, 2.0, -1.0);
        assert!(matches!(solve_correction_angle(&p), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn hermitian_real_input_matches_real_solver() {
        let p = TwoByTwoProblem::real(-1e-4, 1.0, 1.0 + 1e-4, 0.0, 1.0);
        let r = solve_correction_angle(&p).unwrap();
        let h = solve_correction_angle_hermitian(&p).unwrap();
        assert_eq!(r, h);
    }

    #[test]
    fn hermitian_imaginary_coupling() {
        let p = TwoByTwoProblem::complex(-1e-4, Complex64::new(0.0, 1.0), 1.0 + 1e-4, 0.0, 1.0);
        let g = solve_correction_angle_hermitian(&p).unwrap();
        assert_eq!((g.phi, g.psi), (0.0, FRAC_PI_2));
        assert!((g.theta.abs() - 5.0e-5).abs() < 1e-8);
        let out = apply(&p, &g);
        assert!(out.diag_entry(0).abs() < 1e-12);
        assert!((out.get(0, 1) - p.b12).norm() < 1e-3);
    }

    #[test]
    fn uncoupled_target_one_ulp_outside() {
        // f is a rounding-level negative; the clamp must not turn it into a swap.
        let b11 = -3.9909176005932756;
        let p = TwoByTwoProblem::real(b11, 0.0, 3.81293392748786, b11 - 4.440892098500626e-16, 3.8129339274878604);
        let g = solve_correction_angle(&p).unwrap();
        assert_eq!(g.theta, 0.0);
    }

    #[test]
    fn uncoupled_target_one_ulp_past_b22() {
        let (b11, b22) = (2.5, -1.25);
        let d1 = b22 - f64::EPSILON;
        let p = TwoByTwoProblem::real(b11, 0.0, b22, d1, b11 + b22 - d1);
        let g = solve_correction_angle(&p).unwrap();
        assert!((apply(&p, &g).diag_entry(0) - d1).abs() < 1e-14);
    }

    #[test]
    fn imaginary_coupling_moves_by_order_eps() {
        for eps in [1e-3, 1e-5, 1e-7] {
            let b12 = Complex64::new(0.1, -0.9);
            let p = TwoByTwoProblem::complex(-eps, b12, 1.0 + eps, 0.0, 1.0);
            let g = solve_correction_angle_hermitian(&p).unwrap();
            let mut b = DenseHermitian::from_diagonal(&[p.b11, p.b22], MatrixKind::ComplexHermitian);
            b.set(0, 1, b12);
            let moved = crate::linalg::fro_dist(&apply(&p, &g), &b).unwrap();
            assert!(moved < 10.0 * eps, "eps {eps}: moved {moved}");
        }
    }

    #[test]
    fn hermitian_falls_back_to_full_phase() {
        // Each component alone is too weak: re^2 + a f < 0 but |b12|^2 + a f > 0.
        let b12 = Complex64::new(1.2, 1.2);
        let p = TwoByTwoProblem::complex(0.0, b12, -1.0, 1.0, -2.0);
        assert!(p.is_feasible());
        let g = solve_correction_angle_hermitian(&p).unwrap();
        assert!((apply(&p, &g).diag_entry(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn table_rows() {
        let row = |p: TwoByTwoProblem, a, b| classify_scenario(&p, a, b);
        let s = row(TwoByTwoProblem::real(0.0, 1.0, 1.0, 0.0, 1.0), 1.0, 1.0);
        assert_eq!((s.case_id, s.gamma, s.delta), (ScenarioCase::B12Nonzero, 1.0, 1.0));
        let s = row(TwoByTwoProblem::real(0.0, 0.0, 1.0, 0.0, 1.0), 1.0, 1.0);
        assert_eq!((s.case_id, s.gamma, s.delta), (ScenarioCase::ZeroOffDistinct, 0.5, 0.5));
        let s = row(TwoByTwoProblem::real(0.0, 0.0, 0.0, 0.0, 0.0), 2.0, 1.0);
        assert_eq!((s.case_id, s.gamma, s.delta), (ScenarioCase::ZeroOffEqualAlphaGtBeta, 0.5, 1.5));
        let s = row(TwoByTwoProblem::real(0.0, 0.0, 0.0, 0.0, 0.0), 1.0, 1.0);
        assert_eq!((s.case_id, s.gamma, s.delta), (ScenarioCase::ZeroOffEqualAlphaLeBeta, 0.0, 1.0));
    }
}
