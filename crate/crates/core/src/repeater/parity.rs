//! Coherent-probe parity measurement on two dipoles.
//!
//! Two nodes sit in series on the same pair of waveguides. A coherent
//! probe |α⟩ enters waveguide 1; each node keeps the light in its
//! waveguide when its dipole is in |g⟩ and swaps waveguides when it is in
//! |m⟩. Light leaving waveguide 1 signals even parity, waveguide 2 odd.
//! Every two-dipole branch maps the probe to a product of coherent states
//! over the two outputs and four loss channels; threshold detectors on the
//! outputs then project the dipoles while the loss modes are traced out.

use super::pointer::{coherent_overlap, vacuum_projection, BranchPointer, PointerRecord};
use super::routing::Node;
use super::state::{basis_index, basis_levels, DensityMatrix, Level, Parity};
use crate::scattering::{Axis, ProbeDetuning, SystemParams};
use crate::{Error, Execution, Result, C64};

/// Joint outcome of the even- and odd-port threshold detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectionEvent {
    EvenOnly,
    OddOnly,
    Both,
    Neither,
}

impl DetectionEvent {
    pub const ALL: [DetectionEvent; 4] = [
        DetectionEvent::EvenOnly,
        DetectionEvent::OddOnly,
        DetectionEvent::Both,
        DetectionEvent::Neither,
    ];

    /// (even clicks, odd clicks)
    pub fn name(self) -> &'static str {
        match self {
            DetectionEvent::EvenOnly => "even_only",
            DetectionEvent::OddOnly => "odd_only",
            DetectionEvent::Both => "both",
            DetectionEvent::Neither => "neither",
        }
    }

    pub fn clicks(self) -> (bool, bool) {
        match self {
            DetectionEvent::EvenOnly => (true, false),
            DetectionEvent::OddOnly => (false, true),
            DetectionEvent::Both => (true, true),
            DetectionEvent::Neither => (false, false),
        }
    }

    /// The parity heralded by an unambiguous click.
    pub fn herald(self) -> Option<Parity> {
        match self {
            DetectionEvent::EvenOnly => Some(Parity::Even),
            DetectionEvent::OddOnly => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn for_parity(parity: Parity) -> Self {
        match parity {
            Parity::Even => DetectionEvent::EvenOnly,
            Parity::Odd => DetectionEvent::OddOnly,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventBranch {
    pub event: DetectionEvent,
    pub probability: f64,
    /// Normalised dipole state given the event; `None` if impossible.
    pub post_state: Option<DensityMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityProbe {
    pub record: PointerRecord,
    /// Mean photon number reaching the even port.
    pub even_flux: f64,
    /// Mean photon number reaching the odd port.
    pub odd_flux: f64,
    /// One entry per [`DetectionEvent::ALL`], same order.
    pub events: [EventBranch; 4],
}

impl ParityProbe {
    pub fn event(&self, event: DetectionEvent) -> &EventBranch {
        self.events
            .iter()
            .find(|b| b.event == event)
            .expect("all events enumerated")
    }

    pub fn herald(&self, parity: Parity) -> &EventBranch {
        self.event(DetectionEvent::for_parity(parity))
    }

    /// Probability that at least one detector clicks.
    pub fn success_probability(&self) -> f64 {
        1.0 - self.event(DetectionEvent::Neither).probability
    }
}

pub(crate) fn check_mean_photons(mean_photons: f64, bound: f64) -> Result<f64> {
    if mean_photons.is_finite() && (0.0..=bound).contains(&mean_photons) {
        Ok(mean_photons)
    } else {
        Err(Error::InvalidRegime { mean_photons, bound })
    }
}

/// Pointer amplitudes for a probe of `mean_photons` through node A then B.
pub fn pointer_record<A: Node, B: Node>(
    node_a: &A,
    node_b: &B,
    probe: ProbeDetuning,
    mean_photons: f64,
) -> Result<PointerRecord> {
    let alpha = C64::new(check_mean_photons(mean_photons, f64::INFINITY)?.sqrt(), 0.0);
    let route_a = [node_a.route(Level::G, probe)?, node_a.route(Level::M, probe)?];
    let route_b = [node_b.route(Level::G, probe)?, node_b.route(Level::M, probe)?];
    let pick = |level| match level {
        Level::G => 0,
        Level::M => 1,
    };

    let branches = std::array::from_fn(|s| {
        let (la, lb) = basis_levels(s);
        let (ra, rb) = (&route_a[pick(la)], &route_b[pick(lb)]);
        let w1 = ra.through * alpha;
        let w2 = ra.drop * alpha;
        // node B is driven from both waveguides; its cavity sees the sum
        let into_b = w1 + w2;
        BranchPointer {
            even: rb.through * w1 + rb.drop * w2,
            odd: rb.drop * w1 + rb.through * w2,
            losses: [
                ra.cavity_loss * alpha,
                ra.dipole_loss * alpha,
                rb.cavity_loss * into_b,
                rb.dipole_loss * into_b,
            ],
        }
    });
    Ok(PointerRecord { alpha, branches })
}

fn port_factor(bra: C64, ket: C64, click: bool) -> C64 {
    let vac = vacuum_projection(bra, ket);
    if click {
        coherent_overlap(bra, ket) - vac
    } else {
        C64::new(vac, 0.0)
    }
}

/// Unnormalised dipole operator for one detection event.
pub fn project_event(record: &PointerRecord, state: &DensityMatrix, event: DetectionEvent) -> DensityMatrix {
    let (even_click, odd_click) = event.clicks();
    let mut out = DensityMatrix::zero();
    for s in 0..4 {
        for t in 0..4 {
            if state[(s, t)] == C64::new(0.0, 0.0) {
                continue;
            }
            let (bs, bt) = (&record.branches[s], &record.branches[t]);
            out[(s, t)] = state[(s, t)]
                * record.loss_overlap(s, t)
                * port_factor(bt.even, bs.even, even_click)
                * port_factor(bt.odd, bs.odd, odd_click);
        }
    }
    out
}

pub fn parity_probe<A: Node, B: Node>(
    node_a: &A,
    node_b: &B,
    state: &DensityMatrix,
    probe: ProbeDetuning,
    mean_photons: f64,
) -> Result<ParityProbe> {
    let record = pointer_record(node_a, node_b, probe, mean_photons)?;
    Ok(probe_with_record(record, state))
}

pub(crate) fn probe_with_record(record: PointerRecord, state: &DensityMatrix) -> ParityProbe {
    let weight = |s: usize| state[(s, s)].re;
    let even_flux = (0..4).map(|s| weight(s) * record.branches[s].even.norm_sqr()).sum();
    let odd_flux = (0..4).map(|s| weight(s) * record.branches[s].odd.norm_sqr()).sum();
    let norm = state.trace();
    let events = DetectionEvent::ALL.map(|event| {
        let rho = project_event(&record, state, event);
        let probability = (rho.trace() / norm).max(0.0);
        EventBranch {
            event,
            probability,
            post_state: if probability > 0.0 { rho.normalized() } else { None },
        }
    });
    ParityProbe {
        record,
        even_flux,
        odd_flux,
        events,
    }
}

/// Probability that an odd-parity state clicks the even port, per
/// detected photon: even-port flux over total output flux for
/// (|gm⟩ + |mg⟩)/√2. Lost photons are excluded.
pub fn false_even_probability<A: Node, B: Node>(node_a: &A, node_b: &B, probe: ProbeDetuning) -> Result<f64> {
    let record = pointer_record(node_a, node_b, probe, 1.0)?;
    let odd_branches = [basis_index(Level::G, Level::M), basis_index(Level::M, Level::G)];
    let even: f64 = odd_branches
        .iter()
        .map(|&s| 0.5 * record.branches[s].even.norm_sqr())
        .sum();
    let odd: f64 = odd_branches
        .iter()
        .map(|&s| 0.5 * record.branches[s].odd.norm_sqr())
        .sum();
    if !(even + odd > 0.0) {
        return Err(Error::InvalidState("no flux reaches either output port".into()));
    }
    Ok(even / (even + odd))
}

/// False-even probability with both nodes set to `base` with one rate
/// replaced, for each value. Rows keep input order; failures are kept
/// per row.
pub fn false_even_sweep(
    base: &SystemParams,
    axis: Axis,
    values: &[f64],
    probe: ProbeDetuning,
    exec: Execution,
) -> Vec<(f64, Result<f64>)> {
    exec.map(values, |&v| {
        let result = base
            .with_axis(axis, v)
            .and_then(|p| false_even_probability(&p, &p, probe));
        (v, result)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repeater::routing::IdealNode;
    use crate::repeater::state::{BellLabel, TwoDipoleState};
    use crate::THZ;

    #[test]
    fn ideal_parity_table() {
        let n = 2.0;
        let r = pointer_record(&IdealNode, &IdealNode, ProbeDetuning(0.0), n).unwrap();
        let alpha = C64::new(n.sqrt(), 0.0);
        let gg = &r.branches[basis_index(Level::G, Level::G)];
        let mm = &r.branches[basis_index(Level::M, Level::M)];
        assert_eq!(gg.even, alpha);
        assert_eq!(mm.even, alpha);
        for s in [basis_index(Level::G, Level::M), basis_index(Level::M, Level::G)] {
            assert_eq!(r.branches[s].even, C64::new(0.0, 0.0));
            assert!((r.branches[s].odd.norm_sqr() - n).abs() < 1e-15);
        }
    }

    #[test]
    fn branch_flux_is_conserved() {
        let p = SystemParams::reference().with_gamma(4.0 * THZ);
        for dw in [-0.5, 0.0, 0.02, 1.0] {
            let r = pointer_record(&p, &p.with_delta(0.01 * THZ), ProbeDetuning(dw * THZ), 3.0).unwrap();
            for b in &r.branches {
                assert!((b.flux() - 3.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn events_partition_the_probability() {
        let p = SystemParams::reference().with_gamma(2.0 * THZ);
        let psi = TwoDipoleState::from_amplitudes([
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.5),
            C64::new(-0.5, 0.0),
            C64::new(0.5, 0.0),
        ]);
        let probe = parity_probe(&p, &p, &DensityMatrix::from_pure(&psi), ProbeDetuning(0.0), 1.5).unwrap();
        let total: f64 = probe.events.iter().map(|e| e.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for e in &probe.events {
            let rho = e.post_state.unwrap();
            assert!(rho.is_hermitian(1e-12));
            assert!((rho.trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ideal_even_herald_leaves_phi_plus_untouched() {
        let rho = DensityMatrix::from_pure(&TwoDipoleState::bell(BellLabel::PhiPlus));
        let probe = parity_probe(&IdealNode, &IdealNode, &rho, ProbeDetuning(0.0), 3.0).unwrap();
        let even = probe.herald(Parity::Even);
        assert!((even.probability - (1.0 - (-3.0f64).exp())).abs() < 1e-15);
        assert!(even.post_state.unwrap().max_abs_diff(&rho) < 1e-15);
        assert_eq!(probe.herald(Parity::Odd).probability, 0.0);
        assert!(probe.herald(Parity::Odd).post_state.is_none());
        assert_eq!(probe.odd_flux, 0.0);
        assert!((probe.even_flux - 3.0).abs() < 1e-15);
    }

    #[test]
    fn false_even_ideal_is_zero_and_reference_is_small() {
        assert_eq!(
            false_even_probability(&IdealNode, &IdealNode, ProbeDetuning(0.0)).unwrap(),
            0.0
        );
        let p = SystemParams::reference().with_gamma(3.0 * THZ);
        let f = false_even_probability(&p, &p, ProbeDetuning(0.0)).unwrap();
        // numpy oracle: 9.251662534133594e-4
        assert!((f - 9.251_662_534_133_594e-4).abs() < 1e-12);
    }

    #[test]
    fn negative_photon_number_is_rejected() {
        let rho = DensityMatrix::from_pure(&TwoDipoleState::bell(BellLabel::PhiPlus));
        assert!(matches!(
            parity_probe(&IdealNode, &IdealNode, &rho, ProbeDetuning(0.0), -1.0),
            Err(Error::InvalidRegime { .. })
        ));
    }
}
