use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use schur_horn::{
    classify_scenario, conjugate_by_givens, fro_dist, solve_correction_angle, solve_correction_angle_hermitian,
    DenseHermitian, MatrixKind, ScenarioCase, TwoByTwoProblem,
};

use crate::error::Result;
use crate::fit::fit_loglog;

/// One row of the 2x2 scenario table, realized with `f = ε^α` and `g = ε^β`:
/// `B = [[d1 - f, b12], [b12*, d2 + g]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRow {
    pub case_id: ScenarioCase,
    pub b12: Complex64,
    pub d1: f64,
    pub d2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub hermitian: bool,
}

impl ScenarioRow {
    pub fn problem(&self, eps: f64) -> TwoByTwoProblem {
        let b11 = self.d1 - eps.powf(self.alpha);
        let b22 = self.d2 + eps.powf(self.beta);
        TwoByTwoProblem::complex(b11, self.b12, b22, self.d1, self.d2)
    }
}

/// Representative rows of both tables: the real rows, then the same rows
/// through the complex solver, plus purely imaginary and general-phase
/// couplings.
pub fn scenario_rows() -> Vec<ScenarioRow> {
    let row = |case_id, b12: Complex64, d: (f64, f64), alpha, beta, hermitian| ScenarioRow {
        case_id,
        b12,
        d1: d.0,
        d2: d.1,
        alpha,
        beta,
        hermitian,
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut rows = Vec::new();
    for hermitian in [false, true] {
        rows.push(row(ScenarioCase::B12Nonzero, one, (0.0, 1.0), 1.0, 1.0, hermitian));
        rows.push(row(ScenarioCase::ZeroOffDistinct, zero, (0.0, 1.0), 1.0, 1.0, hermitian));
        rows.push(row(ScenarioCase::ZeroOffEqualAlphaGtBeta, zero, (1.0, 1.0), 2.0, 1.0, hermitian));
        rows.push(row(ScenarioCase::ZeroOffEqualAlphaLeBeta, zero, (1.0, 1.0), 1.0, 2.0, hermitian));
    }
    rows.push(row(ScenarioCase::B12Nonzero, Complex64::new(0.0, 1.0), (0.0, 1.0), 1.0, 1.0, true));
    rows.push(row(ScenarioCase::B12Nonzero, Complex64::from_polar(0.8, 1.0), (0.0, 1.0), 2.0, 1.0, true));
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentCheck {
    pub row: ScenarioRow,
    pub gamma: f64,
    pub delta: f64,
    pub theta_slope: f64,
    pub distance_slope: f64,
}

impl ExponentCheck {
    pub fn within(&self, tol: f64) -> bool {
        (self.theta_slope - self.gamma).abs() <= tol && (self.distance_slope - self.delta).abs() <= tol
    }
}

/// Slopes of `|θ(ε)|` and `||B̃ - B||_F` over `grid`, next to the
/// exponents predicted for the row.
pub fn exponent_check(row: &ScenarioRow, grid: &[f64]) -> Result<ExponentCheck> {
    let kind = if row.hermitian { MatrixKind::ComplexHermitian } else { MatrixKind::RealSymmetric };
    let mut thetas = Vec::with_capacity(grid.len());
    let mut dists = Vec::with_capacity(grid.len());
    for &eps in grid {
        let p = row.problem(eps);
        let g = if row.hermitian { solve_correction_angle_hermitian(&p)? } else { solve_correction_angle(&p)? };
        let mut b = DenseHermitian::from_diagonal(&[p.b11, p.b22], kind);
        b.set(0, 1, p.b12);
        let bt = conjugate_by_givens(&b, &g)?;
        thetas.push(g.theta.abs());
        dists.push(fro_dist(&bt, &b)?);
    }
    let scenario = classify_scenario(&row.problem(grid[0]), row.alpha, row.beta);
    let theta_slope = fit_loglog(grid, &thetas)?.slope;
    let distance_slope = fit_loglog(grid, &dists)?.slope;
    Ok(ExponentCheck { row: *row, gamma: scenario.gamma, delta: scenario.delta, theta_slope, distance_slope })
}
