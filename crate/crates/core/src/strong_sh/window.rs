use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{eig_sym, DenseHermitian, DEFAULT_EIG_TOL};

/// The interval `[λ_min, λ_max]` of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumWindow {
    pub lo: f64,
    pub hi: f64,
}

impl SpectrumWindow {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "window bounds out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Window of an ascending spectrum.
    pub fn of_sorted(eigenvalues: &[f64]) -> Self {
        Self::new(eigenvalues[0], eigenvalues[eigenvalues.len() - 1])
    }

    pub fn measure(&self) -> f64 {
        self.hi - self.lo
    }

    /// Length of the intersection, zero when disjoint.
    pub fn overlap(&self, other: &SpectrumWindow) -> f64 {
        (self.hi.min(other.hi) - self.lo.max(other.lo)).max(0.0)
    }

    /// `x` lies in the open interval `(lo, hi)`.
    pub fn contains_open(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn hull(&self, other: &SpectrumWindow) -> SpectrumWindow {
        Self { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }
}

pub fn spectrum_window(a: &DenseHermitian) -> Result<SpectrumWindow> {
    let e = eig_sym(a, DEFAULT_EIG_TOL)?;
    Ok(SpectrumWindow::of_sorted(&e.eigenvalues))
}

/// Default structural-zero threshold `1e-12 ||A||_F`.
pub fn default_tau_struct(a: &DenseHermitian) -> f64 {
    1e-12 * a.fro_norm()
}

/// Components of the graph with an edge `(i, j)` whenever `|a_ij| > tau_struct`.
///
/// Members are ascending within a component; components are ordered by their
/// smallest member.
pub fn connected_components(a: &DenseHermitian, tau_struct: f64) -> Vec<Vec<usize>> {
    let n = a.n();
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for root in 0..n {
        if label[root] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[root] = id;
        let mut members = vec![root];
        let mut at = 0;
        while at < members.len() {
            let v = members[at];
            at += 1;
            for (w, l) in label.iter_mut().enumerate() {
                if w != v && *l == usize::MAX && a.get(v, w).norm() > tau_struct {
                    *l = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub fn is_irreducible(a: &DenseHermitian, tau_struct: f64) -> bool {
    connected_components(a, tau_struct).len() == 1
}
