use thiserror::Error;

/// Errors produced by the construction and analysis routines.
///
/// Majorization indices `k` count prefix lengths: `k = 1` is the first
/// partial-sum relation, `k = n` the trace equality.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix kind mismatch: {0}")]
    KindMismatch(&'static str),

    #[error("index out of bounds: ({i}, {j}) for dimension {n}")]
    IndexOutOfBounds { i: usize, j: usize, n: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off_norm:e})")]
    NonConvergence { sweeps: usize, off_norm: f64 },

    #[error("2x2 correction infeasible: discriminant {discriminant:e} below tolerance")]
    Infeasible { discriminant: f64 },

    #[error("majorization does not hold; classification undefined")]
    MajorizationFails,

    #[error("majorization violated at k = {k} (slack {slack:e})")]
    MajorizationViolated { k: usize, slack: f64 },

    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),

    #[error("matrix is not irreducible ({components} components)")]
    NotIrreducible { components: usize },

    #[error("trace mismatch: residual {residual:e}")]
    TraceMismatch { residual: f64 },

    #[error("tree edge ({i}, {j}) vanished: |b_ij| = {value:e}")]
    EdgeVanished { i: usize, j: usize, value: f64 },

    #[error("spectrum windows do not overlap in measure (overlap {overlap:e})")]
    WindowsDisjoint { overlap: f64 },

    #[error("scalar {value} not inside open window ({lo}, {hi})")]
    ScalarOutsideWindow { value: f64, lo: f64, hi: f64 },

    #[error("relation k = {k} is strict (slack {slack:e}); no equality to break")]
    NoEqualityAtI { k: usize, slack: f64 },

    #[error("spectrum is constant; no violating perturbation exists")]
    ScalarSpectrum,

    #[error("matrix is not strongly Schur-Horn correctable (non-strict relation at k = {k})")]
    NotStronglyCorrectable { k: usize },
}

impl Error {
    /// True for errors that signal an infeasible input rather than an internal failure.
    pub fn is_feasibility(&self) -> bool {
        matches!(
            self,
            Error::Infeasible { .. }
                | Error::MajorizationFails
                | Error::MajorizationViolated { .. }
                | Error::TraceMismatch { .. }
                | Error::EdgeVanished { .. }
                | Error::WindowsDisjoint { .. }
                | Error::ScalarOutsideWindow { .. }
                | Error::NoEqualityAtI { .. }
                | Error::ScalarSpectrum
                | Error::NotStronglyCorrectable { .. }
                | Error::NotIrreducible { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
