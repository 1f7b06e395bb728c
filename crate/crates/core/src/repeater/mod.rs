//! Quantum-repeater building blocks driven by dipole-induced transparency.
//!
//! Each node is treated as a routing gate conditioned on its dipole
//! level. The field is a coherent state end to end: every two-dipole
//! basis branch carries its own coherent amplitude per output and loss
//! mode, so which-path decoherence follows from coherent-state overlaps.
//! Detectors are ideal threshold detectors (click iff at least one photon).

mod bell;
mod entangle;
mod parity;
mod pointer;
mod routing;
mod state;
mod tradeoff;

pub use bell::{bell_measurement, BellBranch, BellMeasurement};
pub use entangle::{
    entanglement_generation, herald_amplitudes, Entanglement, HeraldPort, PortHerald, MAX_HERALD_PHOTONS,
};
pub use parity::{
    false_even_probability, false_even_sweep, parity_probe, pointer_record, project_event, DetectionEvent, EventBranch,
    ParityProbe,
};
pub use pointer::{coherent_overlap, vacuum_projection, BranchPointer, PointerRecord};
pub use routing::{conditional_route, IdealNode, Node, Routing};
pub use state::{
    basis_index, basis_levels, hadamard, BellLabel, BellOutcome, DensityMatrix, DipoleQubit, Level, Parity,
    ProtocolResult, TwoDipoleState, BASIS_LABELS,
};
pub use tradeoff::{fidelity_success_tradeoff, tradeoff_for, TradeoffRow};
