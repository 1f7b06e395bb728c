//! Coherent pointer states: per-branch field amplitudes in every output
//! and loss mode after a probe pass, and their overlaps.

use super::state::DensityMatrix;
use crate::C64;

/// ⟨bra|ket⟩ for coherent states:
/// exp(−(|bra|² + |ket|²)/2 + conj(bra)·ket).
pub fn coherent_overlap(bra: C64, ket: C64) -> C64 {
    (-(bra.norm_sqr() + ket.norm_sqr()) / 2.0 + bra.conj() * ket).exp()
}

/// ⟨bra|0⟩⟨0|ket⟩
pub fn vacuum_projection(bra: C64, ket: C64) -> f64 {
    (-(bra.norm_sqr() + ket.norm_sqr()) / 2.0).exp()
}

/// Field amplitudes of one two-dipole branch after both nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPointer {
    /// Waveguide 1 output.
    pub even: C64,
    /// Waveguide 2 output.
    pub odd: C64,
    /// [A cavity, A dipole, B cavity, B dipole]
    pub losses: [C64; 4],
}

impl BranchPointer {
    pub fn flux(&self) -> f64 {
        self.even.norm_sqr() + self.odd.norm_sqr() + self.losses.iter().map(|l| l.norm_sqr()).sum::<f64>()
    }

    pub fn herald_flux(&self) -> f64 {
        self.even.norm_sqr() + self.odd.norm_sqr()
    }
}

/// Pointer amplitudes for each basis branch gg, gm, mg, mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerRecord {
    /// Coherent amplitude of the probe entering waveguide 1.
    pub alpha: C64,
    pub branches: [BranchPointer; 4],
}

impl PointerRecord {
    /// Product of loss-mode overlaps ⟨E_t|E_s⟩ between branches s and t.
    pub fn loss_overlap(&self, s: usize, t: usize) -> C64 {
        self.branches[s]
            .losses
            .iter()
            .zip(&self.branches[t].losses)
            .map(|(&ks, &bt)| coherent_overlap(bt, ks))
            .product()
    }

    /// Reduced dipole state after all field modes are traced out.
    pub fn trace_out(&self, rho: &DensityMatrix) -> DensityMatrix {
        let mut out = DensityMatrix::zero();
        for s in 0..4 {
            for t in 0..4 {
                let (bs, bt) = (&self.branches[s], &self.branches[t]);
                out[(s, t)] = rho[(s, t)]
                    * self.loss_overlap(s, t)
                    * coherent_overlap(bt.even, bs.even)
                    * coherent_overlap(bt.odd, bs.odd);
            }
        }
        out
    }
}
