//! Digital simulation of gravitationally induced double single-mode
//! squeezing.
//!
//! Two truncated oscillator modes (at most two excitations each) are
//! encoded in six qubits, the pair interaction `a†²b†² + a²b²` becomes a
//! sum of eight commuting Pauli strings, and its exponential is compiled
//! into CNOTs and single-qubit rotations. The simulator checks circuits
//! against an exact matrix exponential, and the measurement module models
//! shot noise, gate and readout errors, readout mitigation and
//! post-selection.
//!
//! ```
//! use squeezesim::bosonmap::BosonQubitMap;
//! use squeezesim::compiler::{compile_full_unitary, prepare_ground_state};
//! use squeezesim::simulator::{p0_fidelity_proxy, run, Statevector};
//!
//! let map = BosonQubitMap::two_mode_pair();
//! let h = map.map_squared_pair_hamiltonian()?;
//! let mut circuit = prepare_ground_state(&map)?;
//! circuit.append(&compile_full_unitary(&h, 0.01)?)?;
//! let out = run(&circuit, &Statevector::zero_state(6)?)?;
//! assert!((p0_fidelity_proxy(&out, &map)? - 0.02f64.cos().powi(2)).abs() < 1e-12);
//! # Ok::<(), squeezesim::error::Error>(())
//! ```

pub mod bits;
pub mod bosonmap;
pub mod compiler;
pub mod error;
pub mod exec;
pub mod measurement;
pub mod pauli;
pub mod physics;
pub mod simulator;

pub use error::{Error, Result};
