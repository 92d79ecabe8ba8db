//! Exact single-excitation simulation of photon transport between
//! coupled-cavity registers linked by atom-switched channels.
//!
//! A register is a short cavity chain whose coupling profile makes the
//! internal dynamics exactly periodic. Registers exchange photons through
//! a uniform chain (the channel) whose odd length places one mode at zero
//! energy, resonant with the registers. A two-level atom inside the
//! channel acts as the switch: coupling it dresses the zero mode away from
//! resonance and blocks transport, decoupling it restores a swap between
//! the registers after a fixed transfer time.
//!
//! The crate builds these Hamiltonians (`model`, `network`), evolves them
//! by exact diagonalization (`dynamics`), reduces them to the zero-mode
//! picture where the protocol is analytic (`effective`), and scores
//! transfers with state-averaged fidelities plus the perturbative leakage
//! estimates that bound them (`metrics`).
//!
//! Energies are measured in units of the channel coupling and times in its
//! inverse. Everything is generic over the float width; the `*64` aliases
//! cover the common case.

pub mod dynamics;
pub mod effective;
mod error;
pub mod metrics;
pub mod model;
pub mod network;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type RegisterSpec64 = model::RegisterSpec<f64>;
pub type ChannelSpec64 = model::ChannelSpec<f64>;
pub type SystemConfig64 = model::SystemConfig<f64>;
pub type ValidityReport64 = model::ValidityReport<f64>;

pub type Eigensystem64 = dynamics::Eigensystem<f64>;
pub type StateVector64 = dynamics::StateVector<f64>;
pub type AmplitudeMatrix64 = dynamics::AmplitudeMatrix<f64>;

pub type EffectiveModel64 = effective::EffectiveModel<f64>;
pub type RegisterCouplingMatrix64 = effective::RegisterCouplingMatrix<f64>;
pub type DressedSplitting64 = effective::DressedSplitting<f64>;

pub type LeakageEstimate64 = metrics::LeakageEstimate<f64>;
pub type FidelityResult64 = metrics::FidelityResult<f64>;
pub type McFidelity64 = metrics::McFidelity<f64>;

pub type NetworkChannel64 = network::NetworkChannel<f64>;
pub type NetworkTopology64 = network::NetworkTopology<f64>;
pub type ScheduleInterval64 = network::ScheduleInterval<f64>;
pub type Schedule64 = network::Schedule<f64>;
pub type FidelityTrace64 = network::FidelityTrace<f64>;
