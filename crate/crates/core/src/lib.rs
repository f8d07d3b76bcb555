//! Feasibility modeling of optically driven electron transport between two
//! NV centers embedded in a diamond nanowire.
//!
//! An electron is moved from one defect to the other by a counter-intuitively
//! ordered pair of photoionization laser pulses, with the discretized
//! conduction band of the wire acting as the intermediate state of a
//! three-level Λ scheme. Whether that works comes down to a frequency
//! hierarchy: the gap to the second conduction level must dwarf the optical
//! Rabi frequency, which in turn must dwarf every decoherence rate,
//!
//! ```text
//!     ΔE_c / ħ  ≫  Ω  ≫  Γ_cap + Γ_SE + Γ_ep .
//! ```
//!
//! The crate computes every quantity in that chain from wire geometry and
//! environment parameters:
//!
//! * [`emt`] — effective-mass electronic structure of the wire: envelope
//!   functions, valley eigenenergies, the level gap `ΔE_c`, symmetry-adapted
//!   valley combinations and Stark selection rules.
//! * [`optics`] — photoionization dipole moment, Rabi frequency and
//!   spontaneous emission in the wire.
//! * [`capture`] — erroneous electron capture by ionized substitutional
//!   nitrogen donors.
//! * [`phonons`] — deformation-potential electron-phonon scattering, both for
//!   free-standing (surface-confined) wires and for electrostatically defined
//!   wires embedded in bulk.
//! * [`spinorbit`] — closure-approximation spin-orbit Hamiltonian certifying
//!   that the spin projection along the wire axis is conserved.
//! * [`stirap`] — time-dependent three-level master equation for the pulsed
//!   transport protocol itself.
//! * [`electrostatics`] — axisymmetric finite-difference Laplace solver for
//!   the electrode-defined confining potential.
//! * [`sweep`] — feasibility maps over wire dimensions for both confinement
//!   designs, with hierarchy checks and optimum search.
//!
//! All quantities are SI; angular frequencies are rad/s and rates are 1/s.
//! The `stirap-wire` binary exposes each stage as a subcommand emitting
//! plot-ready CSV plus a run manifest.

pub mod capture;
pub mod cli;
pub mod config;
pub mod constants;
pub mod electrostatics;
pub mod emt;
pub mod geometry;
pub mod numerics;
pub mod optics;
pub mod phonons;
pub mod rates;
pub mod spinorbit;
pub mod stirap;
pub mod sweep;

pub use capture::CaptureModel;
pub use config::Config;
pub use constants::{MassMean, PhysicalConstants};
pub use geometry::{Confinement, CrystalAxis, EnvironmentParams, WireGeometry};
pub use optics::{LaserParams, OpticalCoupling};
pub use rates::DecoherenceBudget;
pub use stirap::{PulseSchedule, TransportResult};
pub use sweep::{FeasibilityMap, OptimumReport};
