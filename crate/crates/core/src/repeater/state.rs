//! Dipole qubit and two-dipole states over the {g, m} basis.
//!
//! The excited level |e⟩ is never populated in the weak-excitation regime,
//! so each dipole is a qubit. Two-dipole amplitudes are ordered
//! gg, gm, mg, mm (first letter: node A).

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::{Error, Result, C64};

const NORM_TOLERANCE: f64 = 1e-12;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Qubit level of one dipole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    /// Ground state, couples to the cavity.
    G,
    /// Metastable state, decoupled from the cavity.
    M,
}

impl Level {
    pub const BOTH: [Level; 2] = [Level::G, Level::M];

    fn bit(self) -> usize {
        match self {
            Level::G => 0,
            Level::M => 1,
        }
    }
}

/// Index into the two-dipole basis.
pub fn basis_index(a: Level, b: Level) -> usize {
    2 * a.bit() + b.bit()
}

/// Levels of node A and node B for a basis index.
pub fn basis_levels(index: usize) -> (Level, Level) {
    let level = |bit| if bit == 0 { Level::G } else { Level::M };
    (level(index >> 1 & 1), level(index & 1))
}

pub const BASIS_LABELS: [&str; 4] = ["gg", "gm", "mg", "mm"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleQubit {
    pub amplitude_g: C64,
    pub amplitude_m: C64,
}

impl DipoleQubit {
    pub fn new(amplitude_g: C64, amplitude_m: C64) -> Result<Self> {
        let q = DipoleQubit {
            amplitude_g,
            amplitude_m,
        };
        if (q.norm_sqr() - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("qubit norm² {} is not 1", q.norm_sqr())));
        }
        Ok(q)
    }

    pub fn ground() -> Self {
        DipoleQubit {
            amplitude_g: C64::new(1.0, 0.0),
            amplitude_m: zero(),
        }
    }

    pub fn metastable() -> Self {
        DipoleQubit {
            amplitude_g: zero(),
            amplitude_m: C64::new(1.0, 0.0),
        }
    }

    /// (|g⟩ + |m⟩)/√2
    pub fn plus() -> Self {
        hadamard(&DipoleQubit::ground())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitude_g.norm_sqr() + self.amplitude_m.norm_sqr()
    }
}

/// g → (g + m)/√2, m → (g − m)/√2.
pub fn hadamard(q: &DipoleQubit) -> DipoleQubit {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DipoleQubit {
        amplitude_g: (q.amplitude_g + q.amplitude_m) * s,
        amplitude_m: (q.amplitude_g - q.amplitude_m) * s,
    }
}

/// Possibly unnormalised pure state of the two dipoles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDipoleState {
    pub amplitudes: [C64; 4],
    pub normalized: bool,
}

impl TwoDipoleState {
    pub fn from_amplitudes(amplitudes: [C64; 4]) -> Self {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        TwoDipoleState {
            amplitudes,
            normalized: (norm - 1.0).abs() <= NORM_TOLERANCE,
        }
    }

    pub fn basis(a: Level, b: Level) -> Self {
        let mut amplitudes = [zero(); 4];
        amplitudes[basis_index(a, b)] = C64::new(1.0, 0.0);
        TwoDipoleState {
            amplitudes,
            normalized: true,
        }
    }

    pub fn product(a: &DipoleQubit, b: &DipoleQubit) -> Self {
        let qa = [a.amplitude_g, a.amplitude_m];
        let qb = [b.amplitude_g, b.amplitude_m];
        TwoDipoleState::from_amplitudes([qa[0] * qb[0], qa[0] * qb[1], qa[1] * qb[0], qa[1] * qb[1]])
    }

    pub fn bell(label: BellLabel) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b) = (C64::new(s, 0.0), C64::new(-s, 0.0));
        let z = zero();
        let amplitudes = match label {
            BellLabel::PhiPlus => [a, z, z, a],
            BellLabel::PhiMinus => [a, z, z, b],
            BellLabel::PsiPlus => [z, a, a, z],
            BellLabel::PsiMinus => [z, a, b, z],
        };
        TwoDipoleState {
            amplitudes,
            normalized: true,
        }
    }

    /// (|g,m⟩ − |m,g⟩)/√2
    pub fn singlet() -> Self {
        TwoDipoleState::bell(BellLabel::PsiMinus)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidState("cannot normalise a null state".into()));
        }
        Ok(TwoDipoleState {
            amplitudes: self.amplitudes.map(|a| a / n),
            normalized: true,
        })
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &TwoDipoleState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|² / (‖self‖²‖other‖²)
    pub fn fidelity(&self, other: &TwoDipoleState) -> f64 {
        self.inner(other).norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    pub fn hadamard_both(&self) -> Self {
        TwoDipoleState {
            amplitudes: apply_local(&HADAMARD_BOTH, &self.amplitudes),
            normalized: self.normalized,
        }
    }
}

/// H ⊗ H in the gg, gm, mg, mm basis (real, symmetric, involutive).
const HADAMARD_BOTH: [[f64; 4]; 4] = [
    [0.5, 0.5, 0.5, 0.5],
    [0.5, -0.5, 0.5, -0.5],
    [0.5, 0.5, -0.5, -0.5],
    [0.5, -0.5, -0.5, 0.5],
];

fn apply_local(u: &[[f64; 4]; 4], v: &[C64; 4]) -> [C64; 4] {
    let mut out = [zero(); 4];
    for (r, row) in u.iter().enumerate() {
        out[r] = row.iter().zip(v).map(|(&m, &x)| x * m).sum();
    }
    out
}

/// 4×4 density operator of the two dipoles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(pub [[C64; 4]; 4]);

impl DensityMatrix {
    pub fn zero() -> Self {
        DensityMatrix([[zero(); 4]; 4])
    }

    pub fn from_pure(state: &TwoDipoleState) -> Self {
        let mut rho = DensityMatrix::zero();
        for r in 0..4 {
            for c in 0..4 {
                rho[(r, c)] = state.amplitudes[r] * state.amplitudes[c].conj();
            }
        }
        rho
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self[(i, i)].re).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        DensityMatrix(self.0.map(|row| row.map(|z| z * factor)))
    }

    /// Divides by the trace; `None` for a zero-trace operator.
    pub fn normalized(&self) -> Option<Self> {
        let t = self.trace();
        (t > 0.0 && t.is_finite()).then(|| self.scaled(1.0 / t))
    }

    /// ⟨ψ|ρ|ψ⟩ / (‖ψ‖² tr ρ)
    pub fn fidelity(&self, psi: &TwoDipoleState) -> f64 {
        let mut acc = zero();
        for r in 0..4 {
            for c in 0..4 {
                acc += psi.amplitudes[r].conj() * self[(r, c)] * psi.amplitudes[c];
            }
        }
        acc.re / (psi.norm_sqr() * self.trace())
    }

    /// (H⊗H) ρ (H⊗H)
    pub fn hadamard_both(&self) -> Self {
        let mut tmp = DensityMatrix::zero();
        for r in 0..4 {
            for c in 0..4 {
                tmp[(r, c)] = (0..4).map(|k| self[(k, c)] * HADAMARD_BOTH[r][k]).sum();
            }
        }
        let mut out = DensityMatrix::zero();
        for r in 0..4 {
            for c in 0..4 {
                out[(r, c)] = (0..4).map(|k| tmp[(r, k)] * HADAMARD_BOTH[k][c]).sum();
            }
        }
        out
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        (0..4).all(|r| (0..4).all(|c| (self[(r, c)] - self[(c, r)].conj()).norm() <= tolerance))
    }

    /// Largest |entry| of the difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .map(|(r, c)| (self[(r, c)] - other[(r, c)]).norm())
            .fold(0.0, f64::max)
    }
}

impl From<&TwoDipoleState> for DensityMatrix {
    fn from(state: &TwoDipoleState) -> Self {
        DensityMatrix::from_pure(state)
    }
}

impl Index<(usize, usize)> for DensityMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for DensityMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.0[r][c]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];

    /// φ± are even, ψ± odd. H⊗H fixes φ+ and ψ− and swaps φ− ↔ ψ+, so
    /// the second parity separates the ± partners.
    pub fn from_parities(first: Parity, second: Parity) -> Self {
        match (first, second) {
            (Parity::Even, Parity::Even) => BellLabel::PhiPlus,
            (Parity::Even, Parity::Odd) => BellLabel::PhiMinus,
            (Parity::Odd, Parity::Even) => BellLabel::PsiPlus,
            (Parity::Odd, Parity::Odd) => BellLabel::PsiMinus,
        }
    }

    pub fn parities(self) -> (Parity, Parity) {
        match self {
            BellLabel::PhiPlus => (Parity::Even, Parity::Even),
            BellLabel::PhiMinus => (Parity::Even, Parity::Odd),
            BellLabel::PsiPlus => (Parity::Odd, Parity::Even),
            BellLabel::PsiMinus => (Parity::Odd, Parity::Odd),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellLabel::PhiPlus => "phi_plus",
            BellLabel::PhiMinus => "phi_minus",
            BellLabel::PsiPlus => "psi_plus",
            BellLabel::PsiMinus => "psi_minus",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        BellLabel::ALL.into_iter().find(|l| l.name() == name)
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BellOutcome {
    pub label: BellLabel,
    pub first_parity: Parity,
    pub second_parity: Parity,
}

impl BellOutcome {
    pub fn from_parities(first_parity: Parity, second_parity: Parity) -> Self {
        BellOutcome {
            label: BellLabel::from_parities(first_parity, second_parity),
            first_parity,
            second_parity,
        }
    }
}

/// Post-measurement state with its figure of merit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    /// `None` when the heralding event has zero probability.
    pub post_state: Option<DensityMatrix>,
    pub fidelity: f64,
    pub success_probability: f64,
}
