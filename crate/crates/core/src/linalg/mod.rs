mod dense;
mod hermitian;
mod jacobi;
mod rotation;

pub use dense::DenseMatrix;
pub use hermitian::{fro_dist, DenseHermitian, MatrixKind};
pub use jacobi::{eig_sym, SpectralDecomposition, DEFAULT_EIG_TOL, MAX_SWEEPS};
pub use rotation::{conjugate_by_givens, conjugate_in_place, GivensParams};
