use serde::{Deserialize, Serialize};

use super::window::{connected_components, default_tau_struct, SpectrumWindow};
use crate::error::Result;
use crate::linalg::{eig_sym, DenseHermitian, SpectralDecomposition, DEFAULT_EIG_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockTag {
    Scalar,
    StrongSH,
}

/// An irreducible component, as a range of permuted positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpan {
    pub start: usize,
    pub end: usize,
    pub window: SpectrumWindow,
}

impl ComponentSpan {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// A diagonal block `start..end` of the permuted matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub tag: BlockTag,
    pub window: SpectrumWindow,
    pub components: Vec<ComponentSpan>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

/// `P^T A P = blkdiag(A_1, ..., A_p)` with `permutation[k]` the original
/// index placed at position `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockPartition {
    pub permutation: Vec<usize>,
    pub blocks: Vec<Block>,
    pub tau_struct: f64,
    /// Frobenius mass of the entries that were below `tau_struct` and
    /// therefore treated as zero.
    pub dropped_mass: f64,
}

impl BlockPartition {
    pub fn n(&self) -> usize {
        self.permutation.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Block::len).collect()
    }

    /// Original indices of block `b`.
    pub fn block_indices(&self, b: usize) -> &[usize] {
        &self.permutation[self.blocks[b].range()]
    }

    pub fn block_traces(&self, a: &DenseHermitian) -> Vec<f64> {
        (0..self.blocks.len())
            .map(|b| self.block_indices(b).iter().map(|&i| a.diag_entry(i)).sum())
            .collect()
    }

    /// Inverse permutation: original index to permuted position.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.n()];
        for (k, &i) in self.permutation.iter().enumerate() {
            pos[i] = k;
        }
        pos
    }
}

/// A component with its eigen-decomposition, in original indices.
#[derive(Debug, Clone)]
pub(crate) struct Component {
    pub members: Vec<usize>,
    pub eig: SpectralDecomposition,
}

impl Component {
    pub fn window(&self) -> SpectrumWindow {
        SpectrumWindow::of_sorted(&self.eig.eigenvalues)
    }

    pub fn is_scalar(&self) -> bool {
        self.members.len() == 1
    }
}

pub(crate) fn sorted_components(a: &DenseHermitian, tau_struct: f64) -> Result<Vec<Component>> {
    let mut comps = Vec::new();
    for members in connected_components(a, tau_struct) {
        let eig = eig_sym(&a.principal_submatrix(&members), DEFAULT_EIG_TOL)?;
        comps.push(Component { members, eig });
    }
    comps.sort_by(|x, y| {
        let (wx, wy) = (x.window(), y.window());
        wx.lo
            .total_cmp(&wy.lo)
            .then(wx.hi.total_cmp(&wy.hi))
            .then(x.members[0].cmp(&y.members[0]))
    });
    Ok(comps)
}

/// Groups the components into blocks.
///
/// Components are sorted by `(λ_min, λ_max)`. A block opened by an
/// irreducible component keeps absorbing the next component while that one
/// is irreducible with an overlapping window of positive length, or is a
/// scalar strictly inside the block window. A scalar never opens a block that
/// absorbs anything.
pub fn block_decompose(a: &DenseHermitian) -> Result<BlockPartition> {
    block_decompose_with(a, default_tau_struct(a))
}

pub fn block_decompose_with(a: &DenseHermitian, tau_struct: f64) -> Result<BlockPartition> {
    let comps = sorted_components(a, tau_struct)?;
    Ok(partition_from_components(a, &comps, tau_struct))
}

pub(crate) fn partition_from_components(
    a: &DenseHermitian,
    comps: &[Component],
    tau_struct: f64,
) -> BlockPartition {
    let mut permutation = Vec::with_capacity(a.n());
    let mut blocks: Vec<Block> = Vec::new();
    let mut open = false;
    for c in comps {
        let w = c.window();
        let span = ComponentSpan { start: permutation.len(), end: permutation.len() + c.members.len(), window: w };
        permutation.extend_from_slice(&c.members);
        let joins = open
            && blocks.last().is_some_and(|b| {
                if c.is_scalar() {
                    b.window.contains_open(w.lo)
                } else {
                    b.window.overlap(&w) > 0.0
                }
            });
        if joins {
            let b = blocks.last_mut().unwrap();
            b.end = span.end;
            b.window = b.window.hull(&w);
            b.components.push(span);
        } else {
            open = !c.is_scalar();
            let tag = if c.is_scalar() { BlockTag::Scalar } else { BlockTag::StrongSH };
            blocks.push(Block { start: span.start, end: span.end, tag, window: w, components: vec![span] });
        }
    }
    let dropped_mass = dropped_mass(a, comps);
    BlockPartition { permutation, blocks, tau_struct, dropped_mass }
}

fn dropped_mass(a: &DenseHermitian, comps: &[Component]) -> f64 {
    let n = a.n();
    let mut label = vec![0; n];
    for (id, c) in comps.iter().enumerate() {
        for &m in &c.members {
            label[m] = id;
        }
    }
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j && label[i] != label[j] {
                acc += a.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}
