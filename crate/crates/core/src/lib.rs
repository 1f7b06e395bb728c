//! Dipole-induced transparency (DIT) in drop-filter cavity-waveguide systems.
//!
//! A cavity critically coupled to two waveguides normally drops a resonant
//! probe from one waveguide into the other. A dipole coupled to the cavity
//! makes the first waveguide transparent again once the Purcell factor is
//! large, without needing strong coupling. This crate computes:
//!
//! * [`scattering`]: steady-state input-output amplitudes of one
//!   cavity-dipole node in the weak-excitation limit, plus an independent
//!   2×2 linear-solve oracle, a flux audit and Purcell-type diagnostics.
//! * [`spectra`]: detuning spectra, transparency-peak location and width,
//!   and parameter sweeps.
//! * [`repeater`]: the dipole-controlled routing gate, heralded
//!   entanglement generation, coherent-probe parity measurement and the
//!   two-round Bell classifier, with loss-induced decoherence tracked
//!   through coherent-state overlaps.
//!
//! All rates are angular frequencies in rad/s. [`THZ`] converts the
//! customary THz figures (γ = 1 THz, g = 0.33 THz, ...) by a plain factor
//! of 10¹², with no 2π.

// `!(x > 0.0)` style checks are meant to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod repeater;
pub mod scattering;
pub mod spectra;

pub use error::{Error, Result};
pub use exec::Execution;
pub use scattering::{
    diagnostics, diagnostics_with_safety, flux_budget, scatter_coefficients, steady_state_oracle,
    weak_excitation_check, Axis, DiagnosticNumbers, FluxBudget, ProbeDetuning, ScatterCoefficients, SystemParams,
    WeakExcitation, DEFAULT_BUDGET_TOLERANCE, DEFAULT_KAPPA_FRACTION,
};

/// One THz expressed as a rate in rad/s (factor 10¹², no 2π).
pub const THZ: f64 = 1.0e12;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
