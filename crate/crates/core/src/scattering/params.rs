use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, THZ};

/// Rate set of one cavity-dipole node. All fields in rad/s.
///
/// Dynamics are evaluated in the frame rotating at the probe frequency, so
/// `omega0` only enters through the probe detuning and `Q = omega0 / kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega0: f64,
    /// Bare-cavity energy decay rate (leaky modes).
    pub kappa: f64,
    /// Cavity decay rate into each of the two waveguides.
    pub gamma: f64,
    /// Vacuum Rabi frequency.
    pub g: f64,
    /// Dipole decay rate into non-cavity modes.
    pub tau: f64,
    /// Dipole-cavity detuning (signed).
    pub delta: f64,
}

/// Ratio γ/κ used when κ is not given.
pub const DEFAULT_KAPPA_FRACTION: f64 = 0.1;

impl SystemParams {
    /// Validated constructor with `kappa = 0.1·gamma` and `omega0 = kappa·10⁴`
    /// (a Q = 10 000 cavity).
    pub fn new(gamma: f64, g: f64, tau: f64) -> Result<Self> {
        let kappa = DEFAULT_KAPPA_FRACTION * gamma;
        SystemParams {
            omega0: kappa * 1.0e4,
            kappa,
            gamma,
            g,
            tau,
            delta: 0.0,
        }
        .validated()
    }

    /// γ = 1 THz, g = 0.33 THz, τ = 1 GHz, κ = 0.1 THz, δ = 0, Q = 10⁴.
    pub fn reference() -> Self {
        SystemParams {
            omega0: 1.0e3 * THZ,
            kappa: 0.1 * THZ,
            gamma: THZ,
            g: 0.33 * THZ,
            tau: 1.0e-3 * THZ,
            delta: 0.0,
        }
    }

    pub fn with_kappa(self, kappa: f64) -> Self {
        SystemParams { kappa, ..self }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        SystemParams { gamma, ..self }
    }

    pub fn with_g(self, g: f64) -> Self {
        SystemParams { g, ..self }
    }

    pub fn with_tau(self, tau: f64) -> Self {
        SystemParams { tau, ..self }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        SystemParams { delta, ..self }
    }

    /// Copy with one named rate replaced, validated.
    pub fn with_axis(self, axis: Axis, value: f64) -> Result<Self> {
        let p = match axis {
            Axis::Gamma => self.with_gamma(value),
            Axis::G => self.with_g(value),
            Axis::Tau => self.with_tau(value),
            Axis::Kappa => self.with_kappa(value),
            Axis::Delta => self.with_delta(value),
        };
        p.validated()
    }

    pub fn axis_value(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Gamma => self.gamma,
            Axis::G => self.g,
            Axis::Tau => self.tau,
            Axis::Kappa => self.kappa,
            Axis::Delta => self.delta,
        }
    }

    /// Quality factor ω0/κ (infinite for a lossless cavity).
    pub fn quality_factor(&self) -> f64 {
        self.omega0 / self.kappa
    }

    /// All violated constraints. τ = 0 with g > 0 is allowed here; the
    /// divergence only happens on the dipole line and is reported there.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let fields = [
            ("omega0", self.omega0),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("g", self.g),
            ("tau", self.tau),
            ("delta", self.delta),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                out.push(format!("{name} must be finite (got {v})"));
            }
        }
        if self.kappa < 0.0 {
            out.push(format!("kappa must be >= 0 (got {})", self.kappa));
        }
        if !(self.gamma > 0.0) {
            out.push(format!("gamma must be > 0 (got {})", self.gamma));
        }
        if self.g < 0.0 {
            out.push(format!("g must be >= 0 (got {})", self.g));
        }
        if self.tau < 0.0 {
            out.push(format!("tau must be >= 0 (got {})", self.tau));
        }
        if self.omega0 < 0.0 {
            out.push(format!("omega0 must be >= 0 (got {})", self.omega0));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    pub fn validated(self) -> Result<Self> {
        self.validate().map(|_| self)
    }
}

/// Probe detuning Δω = ω − ω0 in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct ProbeDetuning(pub f64);

impl ProbeDetuning {
    pub const RESONANT: ProbeDetuning = ProbeDetuning(0.0);

    pub fn new(delta_omega: f64) -> Result<Self> {
        if delta_omega.is_finite() {
            Ok(ProbeDetuning(delta_omega))
        } else {
            Err(Error::InvalidParams(vec![format!(
                "probe detuning must be finite (got {delta_omega})"
            )]))
        }
    }

    pub fn rad_per_s(self) -> f64 {
        self.0
    }
}

/// A sweepable rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Gamma,
    G,
    Tau,
    Kappa,
    Delta,
}

impl Axis {
    pub const ALL: [Axis; 5] = [Axis::Gamma, Axis::G, Axis::Tau, Axis::Kappa, Axis::Delta];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Gamma => "gamma",
            Axis::G => "g",
            Axis::Tau => "tau",
            Axis::Kappa => "kappa",
            Axis::Delta => "delta",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown axis `{s}` (expected one of gamma, g, tau, kappa, delta)"))
    }
}
