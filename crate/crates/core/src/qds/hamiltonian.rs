//! Three-level system coupled through λ3 and λ8 to two discretized baths.
//!
//! Basis index = `level · bath_dim + bath_index`; the bath index is the
//! mixed-radix number over `(channel, mode)` slots in the order
//! `(3, k1), …, (3, kN), (8, k1), …, (8, kN)`, most significant first.

use super::bath::BathDiscretization;
use super::params::QdsParams;
use crate::error::{Error, Result};
use crate::linalg::{SparseOperator, C64};
use crate::su3::{build_basis, fundamental_weights, MatrixC3};

/// Default limit on the total Hilbert-space dimension.
pub const DEFAULT_DIM_CAP: usize = 4_000_000;

/// `ε3λ3 + ε8λ8 + Δ(λ1 + λ4 + cos ζ λ6 + sin ζ λ7)`.
pub fn impurity_block(q: &QdsParams) -> MatrixC3 {
    let g = build_basis();
    let r = |x: f64| C64::from(x);
    g.get(3).scale(r(q.eps3))
        + g.get(8).scale(r(q.eps8))
        + (*g.get(1) + *g.get(4) + g.get(6).scale(r(q.zeta.cos())) + g.get(7).scale(r(q.zeta.sin())))
            .scale(r(q.delta))
}

/// Layout of the product space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QdsLayout {
    pub n_modes: usize,
    pub levels_per_mode: usize,
    pub bath_dim: usize,
}

impl QdsLayout {
    pub fn new(b: &BathDiscretization, cap: usize) -> Result<Self> {
        let levels = b.n_max() + 1;
        let slots = 2 * b.n_modes();
        let bath_dim = (0..slots).try_fold(1usize, |acc, _| acc.checked_mul(levels));
        match bath_dim.and_then(|d| d.checked_mul(3)) {
            Some(dim) if dim <= cap => Ok(Self { n_modes: b.n_modes(), levels_per_mode: levels, bath_dim: dim / 3 }),
            Some(dim) => Err(Error::CapExceeded { dim, cap }),
            None => Err(Error::CapExceeded { dim: usize::MAX, cap }),
        }
    }

    pub fn dim(&self) -> usize {
        3 * self.bath_dim
    }

    /// Stride of slot `s` (0..2N) in the bath index.
    pub fn stride(&self, slot: usize) -> usize {
        self.levels_per_mode.pow((2 * self.n_modes - 1 - slot) as u32)
    }

    pub fn occupation(&self, bath_index: usize, slot: usize) -> usize {
        bath_index / self.stride(slot) % self.levels_per_mode
    }

    pub fn index(&self, level: usize, occupations: &[usize]) -> usize {
        debug_assert_eq!(occupations.len(), 2 * self.n_modes);
        level * self.bath_dim + occupations.iter().enumerate().map(|(s, &n)| n * self.stride(s)).sum::<usize>()
    }
}

/// Sparse Hamiltonian with the default dimension cap.
pub fn assemble_hamiltonian(q: &QdsParams, b: &BathDiscretization) -> Result<SparseOperator> {
    assemble_hamiltonian_with_cap(q, b, DEFAULT_DIM_CAP)
}

pub fn assemble_hamiltonian_with_cap(q: &QdsParams, b: &BathDiscretization, cap: usize) -> Result<SparseOperator> {
    let q = q.validated()?;
    let layout = QdsLayout::new(b, cap)?;
    let imp = impurity_block(&q);
    let weights = fundamental_weights();
    let nm = layout.n_modes;
    let mut triplets = Vec::new();

    for j in 0..layout.bath_dim {
        let boson_energy: f64 = (0..2 * nm).map(|s| b.omegas()[s % nm] * layout.occupation(j, s) as f64).sum();
        for level in 0..3 {
            let row = level * layout.bath_dim + j;
            // impurity part ⊗ identity
            for other in 0..3 {
                let mut v = imp[(level, other)];
                if other == level {
                    v += boson_energy;
                }
                if v != C64::from(0.0) {
                    triplets.push((row, other * layout.bath_dim + j, v));
                }
            }
            // λ3 (b3 + b3†) and λ8 (b8 + b8†): raise occupations, add both orientations
            let (m, y) = weights[level];
            for s in 0..2 * nm {
                let n = layout.occupation(j, s);
                if n + 1 >= layout.levels_per_mode {
                    continue;
                }
                let weight = if s < nm { m } else { y };
                let v = C64::from(b.couplings()[s % nm] * weight * ((n + 1) as f64).sqrt());
                if v != C64::from(0.0) {
                    let col = row + layout.stride(s);
                    triplets.push((row, col, v));
                    triplets.push((col, row, v));
                }
            }
        }
    }
    Ok(SparseOperator::from_triplets(layout.dim(), triplets))
}
