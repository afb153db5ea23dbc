use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use schur_horn::{
    correct_diagonal, correct_irreducible, eig_sym, schur_horn_correct, schur_horn_correct_hermitian,
    CorrectionCertificate, DenseHermitian, MatrixKind,
};

use crate::error::{HarnessError, Result};
use crate::rng::SplitMix64;

const EIG_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    DiagonalDistinct,
    DiagonalRepeated,
    Irreducible,
    MixedBlock,
    HermitianIrreducible,
    HermitianMixedBlock,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::DiagonalDistinct,
        Family::DiagonalRepeated,
        Family::Irreducible,
        Family::MixedBlock,
        Family::HermitianIrreducible,
        Family::HermitianMixedBlock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::DiagonalDistinct => "diagonal-distinct",
            Family::DiagonalRepeated => "diagonal-repeated",
            Family::Irreducible => "irreducible",
            Family::MixedBlock => "mixed-block",
            Family::HermitianIrreducible => "hermitian-irreducible",
            Family::HermitianMixedBlock => "hermitian-mixed-block",
        }
    }

    pub fn is_hermitian(self) -> bool {
        matches!(self, Family::HermitianIrreducible | Family::HermitianMixedBlock)
    }

    fn is_diagonal(self) -> bool {
        matches!(self, Family::DiagonalDistinct | Family::DiagonalRepeated)
    }

    fn is_irreducible(self) -> bool {
        matches!(self, Family::Irreducible | Family::HermitianIrreducible)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| HarnessError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationStyle {
    /// Moves `ε` from the smallest eigenvalue to the largest.
    #[default]
    Adversarial,
    /// Random admissible direction for the family's pipeline.
    Generic,
}

/// A test matrix with its ascending spectrum.
#[derive(Debug, Clone)]
pub struct Instance {
    pub family: Family,
    pub matrix: DenseHermitian,
    pub spectrum: Vec<f64>,
}

/// `λ̃(ε) = λ + ε w` for a fixed direction `w` aligned with the ascending `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationGenerator {
    pub base: Vec<f64>,
    pub direction: Vec<f64>,
}

impl PerturbationGenerator {
    pub fn at(&self, eps: f64) -> Vec<f64> {
        self.base.iter().zip(&self.direction).map(|(l, w)| l + eps * w).collect()
    }
}

impl Instance {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Direction of perturbation respecting the contract of this family's
    /// pipeline.
    ///
    /// Diagonal and block families get transfers from lower to higher sorted
    /// positions, which keep every (block) partial sum at or below that of the
    /// input. Irreducible families only need the trace, so the generic
    /// direction there is any zero-sum vector.
    pub fn generator(&self, style: PerturbationStyle, rng: &mut SplitMix64) -> PerturbationGenerator {
        let n = self.n();
        let mut w = vec![0.0; n];
        match style {
            PerturbationStyle::Adversarial => {
                w[0] = -1.0;
                w[n - 1] += 1.0;
            }
            PerturbationStyle::Generic if self.family.is_irreducible() => {
                for x in &mut w {
                    *x = rng.uniform(-1.0, 1.0);
                }
                let mean = w.iter().sum::<f64>() / n as f64;
                for x in &mut w {
                    *x -= mean;
                }
            }
            PerturbationStyle::Generic => {
                for _ in 0..n.max(2) {
                    let (p, q) = (rng.below(n), rng.below(n));
                    if p == q {
                        continue;
                    }
                    let amount = rng.uniform(0.2, 1.0);
                    w[p.min(q)] -= amount;
                    w[p.max(q)] += amount;
                }
                if n >= 2 && w.iter().all(|&x| x == 0.0) {
                    w[0] = -1.0;
                    w[n - 1] = 1.0;
                }
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in &mut w {
                *x /= norm;
            }
        }
        PerturbationGenerator { base: self.spectrum.clone(), direction: w }
    }

    /// Runs the correction pipeline that this family exercises.
    pub fn correct(&self, lambda_tilde: &[f64]) -> schur_horn::Result<CorrectionCertificate> {
        match self.family {
            Family::DiagonalDistinct | Family::DiagonalRepeated => {
                correct_diagonal(&self.matrix.diagonal(), lambda_tilde)
            }
            Family::Irreducible | Family::HermitianIrreducible => correct_irreducible(&self.matrix, lambda_tilde),
            Family::MixedBlock => schur_horn_correct(&self.matrix, lambda_tilde),
            Family::HermitianMixedBlock => schur_horn_correct_hermitian(&self.matrix, lambda_tilde),
        }
    }
}

pub fn gen_instance_named(family: &str, n: usize, seed: u64) -> Result<Instance> {
    gen_instance(family.parse()?, n, seed)
}

/// Seeded instance of `family` with dimension `n`.
pub fn gen_instance(family: Family, n: usize, seed: u64) -> Result<Instance> {
    let min_n = if family.is_diagonal() { 1 } else { 2 };
    if n < min_n {
        return Err(HarnessError::InvalidConfig(format!("{family} needs n >= {min_n}, got {n}")));
    }
    let mut rng = SplitMix64::new(seed);
    let kind = if family.is_hermitian() { MatrixKind::ComplexHermitian } else { MatrixKind::RealSymmetric };
    let matrix = match family {
        Family::DiagonalDistinct => {
            let mut d: Vec<f64> = (0..n).map(|k| k as f64 + rng.uniform(0.0, 0.5)).collect();
            rng.shuffle(&mut d);
            DenseHermitian::from_diagonal(&d, kind)
        }
        Family::DiagonalRepeated => {
            let levels = (n / 2).max(1);
            let mut d: Vec<f64> = (0..n).map(|k| (k % levels) as f64).collect();
            if n >= 2 && levels == 1 {
                d[n - 1] = 1.0;
            }
            rng.shuffle(&mut d);
            DenseHermitian::from_diagonal(&d, kind)
        }
        Family::Irreducible | Family::HermitianIrreducible => {
            let mut a = DenseHermitian::zeros(n, kind);
            fill_tree(&mut a, &(0..n).collect::<Vec<_>>(), 0.0, &mut rng);
            a
        }
        Family::MixedBlock | Family::HermitianMixedBlock => mixed_block(n, kind, &mut rng),
    };
    let spectrum = eig_sym(&matrix, EIG_TOL)?.eigenvalues;
    Ok(Instance { family, matrix, spectrum })
}

fn coupling(kind: MatrixKind, rng: &mut SplitMix64) -> Complex64 {
    let w = rng.sign() * rng.uniform(0.3, 1.0);
    match kind {
        MatrixKind::RealSymmetric => Complex64::new(w, 0.0),
        MatrixKind::ComplexHermitian => Complex64::from_polar(w, rng.uniform(-std::f64::consts::PI, std::f64::consts::PI)),
    }
}

/// Random spanning tree over `idx` with a few extra edges, diagonal in
/// `offset + [0, 1)`.
fn fill_tree(a: &mut DenseHermitian, idx: &[usize], offset: f64, rng: &mut SplitMix64) {
    let kind = a.kind();
    for (k, &i) in idx.iter().enumerate() {
        a.set_diag(i, offset + rng.next_f64());
        if k > 0 {
            let p = idx[rng.below(k)];
            a.set(p, i, coupling(kind, rng));
        }
    }
    for (k, &i) in idx.iter().enumerate() {
        for &j in &idx[k + 1..] {
            if a.get(i, j).norm() == 0.0 && rng.below(4) == 0 {
                a.set(i, j, coupling(kind, rng));
            }
        }
    }
}

/// At least two groups with windows ten apart. Groups of three or more may
/// carry an isolated entry at the mean of the rest, inside its window.
fn mixed_block(n: usize, kind: MatrixKind, rng: &mut SplitMix64) -> DenseHermitian {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let cap = if sizes.is_empty() { left - 1 } else { left };
        let s = 1 + rng.below(cap.clamp(1, 4));
        sizes.push(s);
        left -= s;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);

    let mut a = DenseHermitian::zeros(n, kind);
    let mut start = 0;
    for (b, &s) in sizes.iter().enumerate() {
        let idx = &perm[start..start + s];
        let offset = 10.0 * b as f64;
        if s == 1 {
            a.set_diag(idx[0], offset + rng.next_f64());
        } else if s >= 3 && rng.coin() {
            let (tree, lone) = idx.split_at(s - 1);
            fill_tree(&mut a, tree, offset, rng);
            let mean = tree.iter().map(|&i| a.diag_entry(i)).sum::<f64>() / tree.len() as f64;
            a.set_diag(lone[0], mean);
        } else {
            fill_tree(&mut a, idx, offset, rng);
        }
        start += s;
    }
    a
}
