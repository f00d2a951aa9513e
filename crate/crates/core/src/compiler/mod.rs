//! Compilation of Pauli exponentials into the gate set
//! `{X, √X, RX, RZ, U1, S, S†, CNOT}`, plus optimization passes.

mod chain;
mod circuit;
mod clifford;
mod diagonalize;
mod peephole;
mod qasm;

pub use chain::{
    compile_full_unitary, compile_full_unitary_with, compile_pauli_exponential,
    compile_pauli_exponential_with, decompose_zx, prepare_ground_state, ChainLayout,
};
pub use circuit::{Axis, Circuit, Gate, GateCounts, GateRecord};
pub use clifford::{append_ops, conjugate_all, inverse_ops, CliffordOp};
pub use diagonalize::{
    diagonalize_commuting_set, DiagonalTerm, DiagonalizationReport, DiagonalizationResult,
};
pub use peephole::{cancel_adjacent, peephole_optimize};
pub use qasm::{export_qasm, parse_qasm};
