//! Heralded entanglement of two remote dipoles.
//!
//! A weak coherent beam is split 50/50 and each half probes one node. The
//! two through outputs are recombined on one beamsplitter (ports f, g) and
//! the two drop outputs on another (ports h, i). Both recombiners are
//! phased so identical node responses interfere constructively in f and h;
//! a click in g or i can only come from a branch where the nodes responded
//! differently, and projects the dipoles onto (|g,m⟩ − |m,g⟩)/√2.
//!
//! The field is kept to first order in the probe amplitude (at most one
//! photon), so the heralded dipole state is pure.

use std::f64::consts::FRAC_1_SQRT_2;

use super::parity::check_mean_photons;
use super::routing::Node;
use super::state::{basis_levels, DensityMatrix, DipoleQubit, Level, ProtocolResult, TwoDipoleState};
use crate::scattering::ProbeDetuning;
use crate::{Result, C64};

/// Upper bound on the probe's mean photon number for the first-order
/// treatment to hold.
pub const MAX_HERALD_PHOTONS: f64 = 0.1;

/// 50/50 beamsplitter, [[1, i], [i, 1]]/√2.
fn beamsplitter(in0: C64, in1: C64) -> (C64, C64) {
    let i = C64::i();
    ((in0 + i * in1) * FRAC_1_SQRT_2, (i * in0 + in1) * FRAC_1_SQRT_2)
}

/// Dark ports of the two recombiners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeraldPort {
    /// Through-output recombiner (partner of f).
    G,
    /// Drop-output recombiner (partner of h).
    I,
}

impl HeraldPort {
    pub fn name(self) -> &'static str {
        match self {
            HeraldPort::G => "g",
            HeraldPort::I => "i",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortHerald {
    pub port: HeraldPort,
    pub probability: f64,
    pub post_state: Option<DensityMatrix>,
    /// Fidelity of `post_state` with the singlet (0 if impossible).
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entanglement {
    /// Combined over both herald ports: probability of any herald,
    /// probability-weighted fidelity; `post_state` is the port-g state.
    pub herald: ProtocolResult,
    pub ports: [PortHerald; 2],
}

/// One-photon amplitudes at the dark ports, per two-dipole branch, for a
/// unit-amplitude input and dipoles prepared in `initial`.
pub fn herald_amplitudes<A: Node, B: Node>(
    node_a: &A,
    node_b: &B,
    initial: &TwoDipoleState,
    probe: ProbeDetuning,
) -> Result<[TwoDipoleState; 2]> {
    let route = |n: &dyn Fn(Level) -> Result<_>| -> Result<_> { Ok([n(Level::G)?, n(Level::M)?]) };
    let ra = route(&|l| node_a.route(l, probe))?;
    let rb = route(&|l| node_b.route(l, probe))?;
    let idx = |l| if l == Level::G { 0 } else { 1 };

    let (arm_a, arm_b) = beamsplitter(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let mut dark_g = [C64::new(0.0, 0.0); 4];
    let mut dark_i = [C64::new(0.0, 0.0); 4];
    for s in 0..4 {
        let (la, lb) = basis_levels(s);
        let (a, b) = (&ra[idx(la)], &rb[idx(lb)]);
        let (g, _f) = beamsplitter(a.through * arm_a, b.through * arm_b);
        let (i, _h) = beamsplitter(a.drop * arm_a, b.drop * arm_b);
        dark_g[s] = initial.amplitudes[s] * g;
        dark_i[s] = initial.amplitudes[s] * i;
    }
    Ok([
        TwoDipoleState::from_amplitudes(dark_g),
        TwoDipoleState::from_amplitudes(dark_i),
    ])
}

/// Both dipoles start in (|g⟩ + |m⟩)/√2; `mean_photons` ≤ 0.1.
pub fn entanglement_generation<A: Node, B: Node>(
    node_a: &A,
    node_b: &B,
    probe: ProbeDetuning,
    mean_photons: f64,
) -> Result<Entanglement> {
    let n = check_mean_photons(mean_photons, MAX_HERALD_PHOTONS)?;
    let initial = TwoDipoleState::product(&DipoleQubit::plus(), &DipoleQubit::plus());
    let amps = herald_amplitudes(node_a, node_b, &initial, probe)?;
    let singlet = TwoDipoleState::singlet();

    let ports = [HeraldPort::G, HeraldPort::I].map(|port| {
        let psi = &amps[port as usize];
        let probability = n * psi.norm_sqr();
        let post = psi.normalize().ok().filter(|_| probability > 0.0);
        PortHerald {
            port,
            probability,
            post_state: post.as_ref().map(DensityMatrix::from_pure),
            fidelity: post.map_or(0.0, |p| p.fidelity(&singlet)),
        }
    });

    let success_probability: f64 = ports.iter().map(|p| p.probability).sum();
    let fidelity = if success_probability > 0.0 {
        ports.iter().map(|p| p.probability * p.fidelity).sum::<f64>() / success_probability
    } else {
        0.0
    };
    Ok(Entanglement {
        herald: ProtocolResult {
            post_state: ports[0].post_state.or(ports[1].post_state),
            fidelity,
            success_probability,
        },
        ports,
    })
}
