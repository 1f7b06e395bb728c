//! The dipole-controlled routing gate.
//!
//! A dipole in |g⟩ makes its node transparent (the probe stays in its
//! waveguide); a dipole in |m⟩ is decoupled, and the node acts as a drop
//! filter sending the probe to the other waveguide with a sign flip.

use super::state::Level;
use crate::scattering::{scatter_coefficients, ProbeDetuning, SystemParams};
use crate::{Result, C64};

/// Per-unit-amplitude output of one node for one dipole level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Routing {
    /// Stays in the input waveguide.
    pub through: C64,
    /// Transferred to the other waveguide.
    pub drop: C64,
    /// √κ·b, amplitude leaked through the cavity loss channel.
    pub cavity_loss: C64,
    /// √τ·σ, amplitude leaked through the dipole loss channel.
    pub dipole_loss: C64,
}

impl Routing {
    pub fn flux(&self) -> f64 {
        self.through.norm_sqr() + self.drop.norm_sqr() + self.cavity_loss.norm_sqr() + self.dipole_loss.norm_sqr()
    }
}

/// A cavity-dipole node as seen by the protocols.
pub trait Node: Sync {
    fn route(&self, level: Level, probe: ProbeDetuning) -> Result<Routing>;
}

/// Routing through a physical node: |g⟩ uses the node's coupling, |m⟩
/// the same node with g = 0.
pub fn conditional_route(node: &SystemParams, level: Level, probe: ProbeDetuning) -> Result<Routing> {
    let params = match level {
        Level::G => *node,
        Level::M => node.with_g(0.0),
    };
    let c = scatter_coefficients(&params, probe)?;
    Ok(Routing {
        through: c.t_through,
        drop: c.t_drop,
        cavity_loss: params.kappa.sqrt() * c.b_amp,
        dipole_loss: params.tau.sqrt() * c.sigma_amp,
    })
}

impl Node for SystemParams {
    fn route(&self, level: Level, probe: ProbeDetuning) -> Result<Routing> {
        conditional_route(self, level, probe)
    }
}

/// Lossless node with perfect transparency and perfect dropping,
/// independent of detuning.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IdealNode;

impl Node for IdealNode {
    fn route(&self, level: Level, _probe: ProbeDetuning) -> Result<Routing> {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        Ok(match level {
            Level::G => Routing {
                through: one,
                drop: zero,
                cavity_loss: zero,
                dipole_loss: zero,
            },
            Level::M => Routing {
                through: zero,
                drop: -one,
                cavity_loss: zero,
                dipole_loss: zero,
            },
        })
    }
}

impl<N: Node + ?Sized> Node for &N {
    fn route(&self, level: Level, probe: ProbeDetuning) -> Result<Routing> {
        (**self).route(level, probe)
    }
}
