//! Diagonal-preserving spectral corrections for real-symmetric and Hermitian
//! matrices.
//!
//! Given a matrix `A` and a perturbed spectrum `λ̃`, the routines here build a
//! matrix with the diagonal of `A` and eigenvalues `λ̃`, together with a
//! certificate listing the plane rotations and eigenbasis that produce it.

pub mod certificate;
pub mod diag_correct;
pub mod error;
pub mod givens;
pub mod linalg;
pub mod majorization;
pub mod sh_correct;
pub mod strong_sh;

pub use certificate::{CorrectionCertificate, CorrectionStep, StepKind, Transform};
pub use diag_correct::{correct_diagonal, correct_diagonal_with, correction_trace, DiagOptions, MinIndex, PopPolicy};
pub use error::{Error, Result};
pub use givens::{
    classify_scenario, solve_correction_angle, solve_correction_angle_hermitian, CorrectionScenario, ScenarioCase,
    TwoByTwoProblem,
};
pub use linalg::{
    conjugate_by_givens, eig_sym, fro_dist, DenseHermitian, DenseMatrix, GivensParams, MatrixKind,
    SpectralDecomposition,
};
pub use majorization::{
    blockwise_majorization, check_majorization, check_majorization_default, classify_strictness,
    MajorizationReport, Strictness, Tolerances,
};
pub use sh_correct::{schur_horn_correct, schur_horn_correct_hermitian};
pub use strong_sh::{
    block_decompose, connected_components, correct_irreducible, gen_violation_perturbation, spectrum_window,
    strong_sh_correct, BlockPartition, SpectrumWindow, StrongBlock,
};
