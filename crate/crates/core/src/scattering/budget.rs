use super::{scatter_coefficients, ProbeDetuning, SystemParams};
use crate::Result;

/// Absolute tolerance on `total − 1` used by flux audits.
pub const DEFAULT_BUDGET_TOLERANCE: f64 = 1e-9;

/// Where a unit input flux ends up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxBudget {
    pub through: f64,
    pub drop: f64,
    /// Into leaky modes via κ.
    pub cavity_loss: f64,
    /// Into non-cavity modes via τ.
    pub dipole_loss: f64,
    pub total: f64,
}

impl FluxBudget {
    pub fn is_conserved(&self, tolerance: f64) -> bool {
        (self.total - 1.0).abs() <= tolerance
    }
}

pub fn flux_budget(params: &SystemParams, probe: ProbeDetuning) -> Result<FluxBudget> {
    let c = scatter_coefficients(params, probe)?;
    let through = c.t_through.norm_sqr();
    let drop = c.t_drop.norm_sqr();
    let cavity_loss = params.kappa * c.b_amp.norm_sqr();
    let dipole_loss = params.tau * c.sigma_amp.norm_sqr();
    Ok(FluxBudget {
        through,
        drop,
        cavity_loss,
        dipole_loss,
        total: through + drop + cavity_loss + dipole_loss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::THZ;

    #[test]
    fn lossless_two_port_is_unitary() {
        let p = SystemParams::reference()
            .with_kappa(0.0)
            .with_tau(0.0)
            .with_delta(0.05 * THZ);
        for k in -30..=30 {
            let dw = k as f64 * 0.07 * THZ;
            let b = flux_budget(&p, ProbeDetuning(dw)).unwrap();
            assert!((b.through + b.drop - 1.0).abs() < 1e-12, "{dw}: {b:?}");
            assert_eq!(b.cavity_loss, 0.0);
            assert_eq!(b.dipole_loss, 0.0);
        }
    }

    #[test]
    fn bare_lossy_cavity_balances() {
        let p = SystemParams::reference().with_g(0.0);
        let b = flux_budget(&p, ProbeDetuning(0.0)).unwrap();
        assert!(b.cavity_loss > 0.0);
        assert!((b.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_parameters_balance() {
        let b = flux_budget(&SystemParams::reference(), ProbeDetuning(0.0)).unwrap();
        assert!(b.dipole_loss > 0.0 && b.cavity_loss > 0.0);
        assert!((b.total - 1.0).abs() < 1e-12);
        assert!(b.is_conserved(DEFAULT_BUDGET_TOLERANCE));
    }
}
