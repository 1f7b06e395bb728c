use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Every violated parameter constraint, not just the first.
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("dipole term diverges: probe at Δω = {delta_omega} rad/s sits on an undamped dipole line (τ = 0, g > 0)")]
    DegenerateDipole { delta_omega: f64 },

    #[error("scattering denominator vanishes at Δω = {delta_omega} rad/s")]
    SingularDenominator { delta_omega: f64 },

    #[error("steady-state system is singular at Δω = {delta_omega} rad/s")]
    SingularSystem { delta_omega: f64 },

    #[error("diagnostic undefined: {0}")]
    UndefinedDiagnostic(&'static str),

    #[error("invalid detuning grid: {0}")]
    InvalidGrid(String),

    #[error("point {index} failed: {source}")]
    PointFailed {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("no interior transparency peak: through channel is monotone over the grid")]
    NoPeak,

    #[error("mean photon number {mean_photons} outside the allowed range [0, {bound}]")]
    InvalidRegime { mean_photons: f64, bound: f64 },

    #[error("invalid dipole state: {0}")]
    InvalidState(String),
}

impl Error {
    pub(crate) fn at_point(self, index: usize) -> Self {
        Error::PointFailed {
            index,
            source: Box::new(self),
        }
    }
}
