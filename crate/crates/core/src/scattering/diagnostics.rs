use super::{scatter_coefficients, ProbeDetuning, SystemParams};
use crate::{Error, Result};

/// Fraction of g²/γ quoted as the safe probe flux.
pub const DEFAULT_FLUX_SAFETY: f64 = 0.01;

/// Dipole occupancy above which σz → −1 is no longer trusted.
pub const WEAK_OCCUPANCY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticNumbers {
    /// F_p = 2g² / [(γ + κ/2)·τ]
    pub purcell: f64,
    /// N0 = (2γ + κ)·τ / g²
    pub critical_atom: f64,
    /// m0 = (τ / 2g)²
    pub critical_photon: f64,
    /// η·g²/γ in photons/s
    pub max_safe_flux: f64,
}

pub fn diagnostics(params: &SystemParams) -> Result<DiagnosticNumbers> {
    diagnostics_with_safety(params, DEFAULT_FLUX_SAFETY)
}

pub fn diagnostics_with_safety(params: &SystemParams, safety: f64) -> Result<DiagnosticNumbers> {
    params.validate()?;
    if params.g == 0.0 {
        return Err(Error::UndefinedDiagnostic("g = 0: dipole decoupled"));
    }
    if params.tau == 0.0 {
        return Err(Error::UndefinedDiagnostic("tau = 0: Purcell factor unbounded"));
    }
    let g2 = params.g * params.g;
    Ok(DiagnosticNumbers {
        purcell: 2.0 * g2 / ((params.gamma + params.kappa / 2.0) * params.tau),
        critical_atom: (2.0 * params.gamma + params.kappa) * params.tau / g2,
        critical_photon: (params.tau / (2.0 * params.g)).powi(2),
        max_safe_flux: safety * g2 / params.gamma,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakExcitation {
    pub valid: bool,
    /// ⟨σ+σ−⟩ ≈ flux·|σ_amp(Δω = 0)|²
    pub sigma_occupancy_estimate: f64,
}

/// Checks ⟨σ+σ−⟩ ≪ 1 for a resonant probe carrying `input_flux` photons/s.
pub fn weak_excitation_check(params: &SystemParams, input_flux: f64) -> WeakExcitation {
    let estimate = if input_flux == 0.0 {
        0.0
    } else {
        match scatter_coefficients(params, ProbeDetuning::RESONANT) {
            Ok(c) => input_flux * c.sigma_amp.norm_sqr(),
            Err(_) => f64::INFINITY,
        }
    };
    WeakExcitation {
        valid: estimate < WEAK_OCCUPANCY_LIMIT,
        sigma_occupancy_estimate: estimate,
    }
}
