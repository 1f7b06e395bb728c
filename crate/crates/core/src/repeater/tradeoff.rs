use super::parity::{pointer_record, probe_with_record};
use super::routing::Node;
use super::state::{BellLabel, DensityMatrix, TwoDipoleState};
use crate::scattering::ProbeDetuning;
use crate::{Execution, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffRow {
    pub mean_photons: f64,
    /// ⟨ψ|ρ|ψ⟩ of the dipole state given the correct parity herald.
    pub fidelity: f64,
    /// Probability that at least one photon is detected.
    pub success_probability: f64,
}

/// Fidelity and success of one parity measurement on φ+ over a grid of
/// probe strengths.
pub fn fidelity_success_tradeoff<A: Node, B: Node>(
    node_a: &A,
    node_b: &B,
    probe: ProbeDetuning,
    mean_photons_grid: &[f64],
) -> Result<Vec<TradeoffRow>> {
    tradeoff_for(
        node_a,
        node_b,
        probe,
        mean_photons_grid,
        BellLabel::PhiPlus,
        Execution::default(),
    )
}

pub fn tradeoff_for<A: Node, B: Node>(
    node_a: &A,
    node_b: &B,
    probe: ProbeDetuning,
    mean_photons_grid: &[f64],
    target: BellLabel,
    exec: Execution,
) -> Result<Vec<TradeoffRow>> {
    let psi = TwoDipoleState::bell(target);
    let rho = DensityMatrix::from_pure(&psi);
    let parity = target.parities().0;
    exec.map(mean_photons_grid, |&mean_photons| {
        let record = pointer_record(node_a, node_b, probe, mean_photons)?;
        if mean_photons == 0.0 {
            // no photons, no back-action
            return Ok(TradeoffRow {
                mean_photons,
                fidelity: 1.0,
                success_probability: 0.0,
            });
        }
        let probe = probe_with_record(record, &rho);
        let herald = probe.herald(parity);
        Ok(TradeoffRow {
            mean_photons,
            fidelity: herald.post_state.map_or(0.0, |r| r.fidelity(&psi)),
            success_probability: probe.success_probability(),
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repeater::routing::IdealNode;
    use crate::{SystemParams, THZ};

    #[test]
    fn zero_photons_means_no_measurement() {
        let p = SystemParams::reference();
        let rows = fidelity_success_tradeoff(&p, &p, ProbeDetuning(0.0), &[0.0]).unwrap();
        assert_eq!(rows[0].fidelity, 1.0);
        assert_eq!(rows[0].success_probability, 0.0);
    }

    #[test]
    fn matches_numpy_oracle_at_four_thz() {
        let p = SystemParams::reference().with_gamma(4.0 * THZ);
        let grid = [0.5, 1.0, 2.0, 3.0, 5.0];
        let rows = fidelity_success_tradeoff(&p, &p, ProbeDetuning(0.0), &grid).unwrap();
        // repeater_oracle.py, even-only herald
        let fid = [
            0.985_698_815_398_725_6,
            0.971_831_165_730_573_7,
            0.945_260_743_412_272_7,
            0.920_178_562_830_081,
            0.874_167_977_182_726_7,
        ];
        let succ = [
            0.375_630_219_911_763_4,
            0.610_151_908_497_344_9,
            0.848_002_140_375_859_5,
            0.940_731_195_835_721_4,
            0.990_985_464_845_018_1,
        ];
        for (i, r) in rows.iter().enumerate() {
            assert!((r.fidelity - fid[i]).abs() < 1e-12, "{i}: {}", r.fidelity);
            assert!(
                (r.success_probability - succ[i]).abs() < 1e-12,
                "{i}: {}",
                r.success_probability
            );
        }
    }

    #[test]
    fn phi_minus_matches_phi_plus() {
        let p = SystemParams::reference().with_gamma(4.0 * THZ);
        let grid = [1.0, 3.0];
        let plus = tradeoff_for(
            &p,
            &p,
            ProbeDetuning(0.0),
            &grid,
            BellLabel::PhiPlus,
            Execution::Sequential,
        )
        .unwrap();
        let minus = tradeoff_for(
            &p,
            &p,
            ProbeDetuning(0.0),
            &grid,
            BellLabel::PhiMinus,
            Execution::Sequential,
        )
        .unwrap();
        for (a, b) in plus.iter().zip(&minus) {
            assert!((a.fidelity - b.fidelity).abs() < 1e-12);
        }
    }

    #[test]
    fn ideal_nodes_keep_unit_fidelity() {
        let rows = fidelity_success_tradeoff(&IdealNode, &IdealNode, ProbeDetuning(0.0), &[0.5, 5.0]).unwrap();
        assert!(rows.iter().all(|r| (r.fidelity - 1.0).abs() < 1e-12));
        assert!((rows[1].success_probability - (1.0 - (-5.0f64).exp())).abs() < 1e-15);
    }
}
