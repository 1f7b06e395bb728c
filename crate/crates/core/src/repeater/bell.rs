//! Two-round Bell measurement: parity, H⊗H, parity again.

use rand::Rng;

use super::parity::{pointer_record, probe_with_record};
use super::routing::Node;
use super::state::{BellLabel, BellOutcome, DensityMatrix, ProtocolResult, TwoDipoleState};
use crate::scattering::ProbeDetuning;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct BellBranch {
    pub outcome: BellOutcome,
    /// Joint probability of both heralds.
    pub probability: f64,
    /// Dipole state after both rounds, rotated back out of the Hadamard
    /// frame; `None` if the branch is impossible.
    pub post_state: Option<DensityMatrix>,
    /// Fidelity of `post_state` with the Bell state named by the outcome.
    pub fidelity: f64,
}

/// Full outcome distribution of one Bell measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BellMeasurement {
    /// One entry per parity pair, ordered as [`BellLabel::ALL`].
    pub branches: [BellBranch; 4],
    /// Either round produced no click or an ambiguous double click.
    pub failure_probability: f64,
}

impl BellMeasurement {
    pub fn branch(&self, label: BellLabel) -> &BellBranch {
        &self.branches[BellLabel::ALL.iter().position(|&l| l == label).expect("listed")]
    }

    pub fn success_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    pub fn most_likely(&self) -> Option<(BellOutcome, ProtocolResult)> {
        self.branches
            .iter()
            .filter(|b| b.probability > 0.0)
            .max_by(|a, b| a.probability.total_cmp(&b.probability))
            .map(|b| {
                (
                    b.outcome,
                    ProtocolResult {
                        post_state: b.post_state,
                        fidelity: b.fidelity,
                        success_probability: b.probability,
                    },
                )
            })
    }

    /// Draws one run; `None` means the measurement failed.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<&BellBranch> {
        let mut u: f64 = rng.random();
        for b in &self.branches {
            if u < b.probability {
                return Some(b);
            }
            u -= b.probability;
        }
        None
    }
}

pub fn bell_measurement<A: Node, B: Node>(
    node_a: &A,
    node_b: &B,
    state: &DensityMatrix,
    probe: ProbeDetuning,
    mean_photons: f64,
) -> Result<BellMeasurement> {
    let record = pointer_record(node_a, node_b, probe, mean_photons)?;
    let first = probe_with_record(record, state);

    let branches = BellLabel::ALL.map(|label| {
        let outcome = BellOutcome::from_parities(label.parities().0, label.parities().1);
        let empty = BellBranch {
            outcome,
            probability: 0.0,
            post_state: None,
            fidelity: 0.0,
        };
        let round1 = first.herald(outcome.first_parity);
        let Some(rho1) = round1.post_state else {
            return empty;
        };
        let second = probe_with_record(record, &rho1.hadamard_both());
        let round2 = second.herald(outcome.second_parity);
        let Some(rho2) = round2.post_state else {
            return empty;
        };
        let post = rho2.hadamard_both();
        BellBranch {
            outcome,
            probability: round1.probability * round2.probability,
            fidelity: post.fidelity(&TwoDipoleState::bell(label)),
            post_state: Some(post),
        }
    });
    let success: f64 = branches.iter().map(|b| b.probability).sum();
    Ok(BellMeasurement {
        branches,
        failure_probability: (1.0 - success).max(0.0),
    })
}
