//! Pulse-level simulator and optimal-control toolkit for a coupler-mediated,
//! exchange-based donor-spin CNOT gate.
//!
//! The crate models the triple-donor electron-nuclear spin system, maps donor
//! placement uncertainty to exchange-strength distributions, synthesizes CNOT
//! control pulses by gradient ascent, verifies the nuclear-spin CNOT protocol,
//! and schedules concurrent pulses under frequency-collision constraints.
//!
//! Conventions used throughout:
//! * Hamiltonian entries are linear frequencies in MHz (h = 1), time in us.
//!   Phase accumulation carries the 2*pi factor inside [`linalg::propagator`].
//! * Tensor order: site 0 is the most significant factor.
//! * Basis index 0 of a spin is the down state (Z eigenvalue +1 in our sign
//!   convention) and encodes qubit |0>.

pub mod error;
pub mod grape;
pub mod hamiltonian;
pub mod linalg;
pub mod placement;
pub mod protocol;
pub mod scheduler;
pub mod spectra;

pub use error::{Error, Result};
pub use grape::{FidelityReport, GradientMode, GrapeConfig, PulseSequence};
pub use hamiltonian::{ControlCarrier, DeviceParams, NuclearConfig, Spin};
pub use linalg::{HermitianOperator, PureState, Unitary};
pub use placement::{
    Axis, DisplacementClass, ExchangeDistribution, ExchangeModelParams, PlacementOffset,
    StrainMode,
};
pub use protocol::{GateImpl, ProtocolState, StepLabel, StepTrace};
pub use scheduler::{OverlapGraph, ParallelPlan, ParallelismEstimate};
pub use spectra::{Transition, TransitionTable};
