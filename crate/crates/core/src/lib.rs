//! Weak-probe absorption spectra of a trapped two-level ion whose motion is
//! driven on the first red (Jaynes–Cummings) or blue (anti-Jaynes–Cummings)
//! sideband.
//!
//! Three independent routes to the probe susceptibility χ = ρ(0g,0e)/(iε)
//! are provided and cross-checked:
//!
//! * closed-form weak-probe expressions ([`three_level::red_susceptibility`],
//!   [`three_level::blue_susceptibility`]),
//! * the six-element density-matrix equations on the three-state subspace
//!   ([`three_level`]),
//! * the steady state of the full Lindblad master equation on a truncated
//!   Fock space ([`dynamics::steady_state`]).
//!
//! Units: γ = ħ = 1.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod liouvillian;
pub mod operators;
pub mod params;
mod rk4;
pub mod spectra;
pub mod three_level;

pub use dynamics::{diagnose, evolve, expectation, steady_state, DensityMatrix, Diagnostics};
pub use error::{Error, Result};
pub use liouvillian::{build_liouvillian, Liouvillian};
pub use operators::{
    build_hamiltonian, build_probe, canonical_operators, dissipators_for, Dissipator, HilbertSpace, OperatorMatrix,
    Qubit,
};
pub use params::{ModelParams, Sideband};
pub use spectra::{dip_metrics, pole_structure, sweep, DipMetrics, Method, PoleStructure, SpectrumResult, SweepConfig};
pub use three_level::{SixState, Susceptibility};
