//! Steady-state scattering of a weak monochromatic probe through one
//! cavity-dipole node coupled to two waveguides.
//!
//! In the frame rotating at the probe frequency, with σz → −1, the cavity
//! amplitude `b` and dipole amplitude `σ` obey
//!
//! ```text
//! (−iΔω + γ + κ/2)·b + i·g·σ = −√γ·(a_in + c_in)
//! i·g·b + (−i(Δω − δ) + τ/2)·σ = 0
//! ```
//!
//! and the waveguide outputs are `a_out = a_in + √γ·b`,
//! `c_out = c_in + √γ·b`. Eliminating σ gives the closed form evaluated by
//! [`scatter_coefficients`]; [`steady_state_oracle`] solves the linear
//! system directly instead.
//!
//! The closed-form second-waveguide relation is taken from the input-output
//! relations above: `c_out = (−γ·a_in + N·c_in)/D`, i.e. it is the mirror
//! image of the `a_out` relation with inputs on the right-hand side.

mod budget;
mod diagnostics;
mod oracle;
mod params;

pub use budget::{flux_budget, FluxBudget, DEFAULT_BUDGET_TOLERANCE};
pub use diagnostics::{
    diagnostics, diagnostics_with_safety, weak_excitation_check, DiagnosticNumbers, WeakExcitation,
    DEFAULT_FLUX_SAFETY, WEAK_OCCUPANCY_LIMIT,
};
pub use oracle::{steady_state_oracle, steady_state_response, DrivePort};
pub use params::{Axis, ProbeDetuning, SystemParams, DEFAULT_KAPPA_FRACTION};

use crate::{Error, Result, C64};

/// Complex response to a unit-amplitude input in waveguide `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterCoefficients {
    /// a_in → a_out
    pub t_through: C64,
    /// a_in → c_out
    pub t_drop: C64,
    /// Intracavity amplitude per unit input amplitude.
    pub b_amp: C64,
    /// Dipole amplitude per unit input amplitude.
    pub sigma_amp: C64,
}

impl ScatterCoefficients {
    pub fn through_probability(&self) -> f64 {
        self.t_through.norm_sqr()
    }

    pub fn drop_probability(&self) -> f64 {
        self.t_drop.norm_sqr()
    }
}

/// Dipole denominator X = −i(Δω − δ) + τ/2.
fn dipole_denominator(params: &SystemParams, dw: f64) -> C64 {
    C64::new(params.tau / 2.0, -(dw - params.delta))
}

/// Closed-form scattering amplitudes.
pub fn scatter_coefficients(params: &SystemParams, probe: ProbeDetuning) -> Result<ScatterCoefficients> {
    params.validate()?;
    let dw = probe.rad_per_s();
    let x = dipole_denominator(params, dw);

    let dipole_term = if params.g == 0.0 {
        C64::new(0.0, 0.0)
    } else if x.norm_sqr() == 0.0 {
        return Err(Error::DegenerateDipole { delta_omega: dw });
    } else {
        params.g * params.g / x
    };

    let numerator = C64::new(params.kappa / 2.0, -dw) + dipole_term;
    let denominator = numerator + params.gamma;
    // Re(D) >= gamma > 0 for valid params; kept for non-finite inputs.
    if !(denominator.norm() > f64::MIN_POSITIVE) || !denominator.is_finite() {
        return Err(Error::SingularDenominator { delta_omega: dw });
    }

    let b_amp = -params.gamma.sqrt() / denominator;
    let sigma_amp = if params.g == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        -C64::i() * params.g * b_amp / x
    };

    Ok(ScatterCoefficients {
        t_through: numerator / denominator,
        t_drop: -params.gamma / denominator,
        b_amp,
        sigma_amp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::THZ;

    fn lossless() -> SystemParams {
        SystemParams::reference().with_kappa(0.0).with_g(0.0)
    }

    #[test]
    fn critical_coupling_drops_everything() {
        let c = scatter_coefficients(&lossless(), ProbeDetuning::RESONANT).unwrap();
        assert!((c.t_through - C64::new(0.0, 0.0)).norm() < 1e-15);
        assert!((c.t_drop - C64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn large_purcell_factor_restores_transmission() {
        // 2g²/τ = 2e4 THz >> γ + κ/2
        let p = SystemParams::reference()
            .with_kappa(0.0)
            .with_g(0.1 * THZ)
            .with_tau(1e-6 * THZ);
        let c = scatter_coefficients(&p, ProbeDetuning::RESONANT).unwrap();
        assert!((c.t_through - 1.0).norm() < 1e-4);
        assert!(c.t_drop.norm() < 1e-4);
    }

    #[test]
    fn reference_parameters_on_resonance() {
        let p = SystemParams::reference();
        let c = scatter_coefficients(&p, ProbeDetuning::RESONANT).unwrap();
        let purcell_like = 2.0 * p.g * p.g / p.tau;
        let expected = (p.kappa / 2.0 + purcell_like) / (p.gamma + p.kappa / 2.0 + purcell_like);
        assert!((c.t_through.re - expected).abs() < 1e-14);
        assert!(c.t_through.im.abs() < 1e-14);
        // mpmath, 50 digits
        assert!((c.through_probability() - 0.990_882_199_404_754).abs() < 1e-12);
    }

    #[test]
    fn drop_is_through_minus_one() {
        let p = SystemParams::reference().with_delta(0.2 * THZ);
        for k in -20..=20 {
            let c = scatter_coefficients(&p, ProbeDetuning(k as f64 * 0.1 * THZ)).unwrap();
            assert!((c.t_drop - (c.t_through - 1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn undamped_dipole_on_its_line_is_rejected() {
        let p = SystemParams::reference().with_tau(0.0).with_delta(0.1 * THZ);
        assert_eq!(
            scatter_coefficients(&p, ProbeDetuning(0.1 * THZ)),
            Err(Error::DegenerateDipole { delta_omega: 0.1 * THZ })
        );
        assert!(scatter_coefficients(&p, ProbeDetuning(0.0)).is_ok());
        // no dipole, no divergence
        assert!(scatter_coefficients(&p.with_g(0.0), ProbeDetuning(0.1 * THZ)).is_ok());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let p = SystemParams::reference().with_gamma(-1.0);
        assert!(matches!(
            scatter_coefficients(&p, ProbeDetuning(0.0)),
            Err(Error::InvalidParams(_))
        ));
    }
}
