//! Direct solve of the linearised steady-state equations.
//!
//! Independent of the closed form in the parent module: the 2×2 complex
//! system for (b, σ) is reduced by Gaussian elimination with partial
//! pivoting, and the outputs are formed from the input-output relations.

use super::{ProbeDetuning, ScatterCoefficients, SystemParams};
use crate::{Error, Result, C64};

/// Which waveguide carries the unit probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrivePort {
    /// Waveguide a (the default input).
    A,
    /// Waveguide c, the mirrored configuration.
    C,
}

/// Oracle for [`super::scatter_coefficients`] with the probe in waveguide a.
pub fn steady_state_oracle(params: &SystemParams, probe: ProbeDetuning) -> Result<ScatterCoefficients> {
    steady_state_response(params, probe, DrivePort::A)
}

/// Steady-state response with the unit probe on `port`. The returned
/// `t_through` is the amplitude leaving the driven waveguide and `t_drop`
/// the amplitude leaving the other one.
pub fn steady_state_response(
    params: &SystemParams,
    probe: ProbeDetuning,
    port: DrivePort,
) -> Result<ScatterCoefficients> {
    params.validate()?;
    let dw = probe.rad_per_s();
    let i = C64::i();
    let sqrt_gamma = params.gamma.sqrt();

    let (a_in, c_in) = match port {
        DrivePort::A => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
        DrivePort::C => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
    };
    // leaky-mode input e_in and dipole noise f are vacuum
    let m = [
        [-i * dw + params.gamma + params.kappa / 2.0, i * params.g],
        [i * params.g, -i * (dw - params.delta) + params.tau / 2.0],
    ];
    let rhs = [-sqrt_gamma * (a_in + c_in), C64::new(0.0, 0.0)];
    let [b, sigma] = solve2(m, rhs).ok_or(Error::SingularSystem { delta_omega: dw })?;

    let a_out = a_in + sqrt_gamma * b;
    let c_out = c_in + sqrt_gamma * b;
    let (t_through, t_drop) = match port {
        DrivePort::A => (a_out, c_out),
        DrivePort::C => (c_out, a_out),
    };
    Ok(ScatterCoefficients {
        t_through,
        t_drop,
        b_amp: b,
        sigma_amp: sigma,
    })
}

fn solve2(mut m: [[C64; 2]; 2], mut rhs: [C64; 2]) -> Option<[C64; 2]> {
    let scale = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    if m[1][0].norm() > m[0][0].norm() {
        m.swap(0, 1);
        rhs.swap(0, 1);
    }
    let tiny = scale * f64::EPSILON * 4.0;
    if m[0][0].norm() <= tiny {
        return None;
    }
    let factor = m[1][0] / m[0][0];
    let m11 = m[1][1] - factor * m[0][1];
    let r1 = rhs[1] - factor * rhs[0];
    if m11.norm() <= tiny {
        return None;
    }
    let x1 = r1 / m11;
    let x0 = (rhs[0] - m[0][1] * x1) / m[0][0];
    Some([x0, x1])
}
