//! Clifford operations used for basis changes, with exact Pauli conjugation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::circuit::{Circuit, Gate};
use crate::error::Result;
use crate::pauli::{Pauli, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordOp {
    S(usize),
    Sdg(usize),
    /// Hadamard, lowered as `S·√X·S` with phase `−π/4`. `√X` and `√X†`
    /// lower to `RX(±π/2)`.
    H(usize),
    SqrtX(usize),
    SqrtXdg(usize),
    Cnot(usize, usize),
    /// Controlled-Z, lowered as `H·CNOT·H` on the second qubit.
    Cz(usize, usize),
}

type SignedLetter = (Pauli, bool);

impl CliffordOp {
    pub fn inverse(self) -> CliffordOp {
        match self {
            CliffordOp::S(q) => CliffordOp::Sdg(q),
            CliffordOp::Sdg(q) => CliffordOp::S(q),
            CliffordOp::SqrtX(q) => CliffordOp::SqrtXdg(q),
            CliffordOp::SqrtXdg(q) => CliffordOp::SqrtX(q),
            other => other,
        }
    }

    /// Images of `X_q` and `Z_q` under `C·P·C†` for a single-qubit op, as
    /// `(letter, negated)` pairs.
    fn single_images(self) -> Option<(usize, SignedLetter, SignedLetter)> {
        Some(match self {
            CliffordOp::S(q) => (q, (Pauli::Y, false), (Pauli::Z, false)),
            CliffordOp::Sdg(q) => (q, (Pauli::Y, true), (Pauli::Z, false)),
            CliffordOp::H(q) => (q, (Pauli::Z, false), (Pauli::X, false)),
            CliffordOp::SqrtX(q) => (q, (Pauli::X, false), (Pauli::Y, true)),
            CliffordOp::SqrtXdg(q) => (q, (Pauli::X, false), (Pauli::Y, false)),
            _ => return None,
        })
    }

    /// `C·P·C†`.
    pub fn conjugate(self, p: &PauliString) -> PauliString {
        let n = p.n_qubits();
        let image = |q: usize, letter: Pauli, negated: bool| {
            PauliString::from_sparse(n, &[(q, letter)])
                .expect("qubit in range")
                .with_phase(if negated { 2 } else { 0 })
        };
        // images of X_q and Z_q for the qubits this op touches
        let mut images: Vec<(usize, PauliString, PauliString)> = Vec::with_capacity(2);
        if let Some((q, (xl, xn), (zl, zn))) = self.single_images() {
            images.push((q, image(q, xl, xn), image(q, zl, zn)));
        } else {
            let (a, b, cz) = match self {
                CliffordOp::Cnot(c, t) => (c, t, false),
                CliffordOp::Cz(a, b) => (a, b, true),
                _ => unreachable!(),
            };
            let pair = |qa: Pauli, qb: Pauli| {
                PauliString::from_sparse(n, &[(a, qa), (b, qb)]).expect("qubit in range")
            };
            if cz {
                images.push((a, pair(Pauli::X, Pauli::Z), image(a, Pauli::Z, false)));
                images.push((b, pair(Pauli::Z, Pauli::X), image(b, Pauli::Z, false)));
            } else {
                images.push((a, pair(Pauli::X, Pauli::X), image(a, Pauli::Z, false)));
                images.push((b, image(b, Pauli::X, false), pair(Pauli::Z, Pauli::Z)));
            }
        }
        // P = i^k · Π_q i^(x_q z_q) X_q^x_q Z_q^z_q ; untouched qubits keep their letters.
        let mut out = p.clone();
        let mut extra_phase = 0u8;
        for (q, _, _) in &images {
            out.set(*q, Pauli::I);
        }
        for (q, img_x, img_z) in &images {
            let (xb, zb) = (p.x_bit(*q), p.z_bit(*q));
            if xb && zb {
                extra_phase += 1;
            }
            if xb {
                out = out.multiply(img_x).expect("same width");
            }
            if zb {
                out = out.multiply(img_z).expect("same width");
            }
        }
        let phase = out.phase() + extra_phase;
        out.with_phase(phase)
    }

    /// Gate realization and the global phase it carries.
    pub fn lower(self) -> (Vec<Gate>, f64) {
        match self {
            CliffordOp::S(q) => (vec![Gate::S(q)], 0.0),
            CliffordOp::Sdg(q) => (vec![Gate::Sdg(q)], 0.0),
            CliffordOp::H(q) => (vec![Gate::S(q), Gate::SqrtX(q), Gate::S(q)], -FRAC_PI_4),
            // √X = e^{iπ/4}·RX(π/2)
            CliffordOp::SqrtX(q) => (vec![Gate::Rx(q, FRAC_PI_2)], FRAC_PI_4),
            CliffordOp::SqrtXdg(q) => (vec![Gate::Rx(q, -FRAC_PI_2)], -FRAC_PI_4),
            CliffordOp::Cnot(c, t) => (vec![Gate::cnot(c, t)], 0.0),
            CliffordOp::Cz(a, b) => (
                vec![
                    Gate::S(b),
                    Gate::SqrtX(b),
                    Gate::S(b),
                    Gate::cnot(a, b),
                    Gate::S(b),
                    Gate::SqrtX(b),
                    Gate::S(b),
                ],
                -2.0 * FRAC_PI_4,
            ),
        }
    }
}

/// Conjugates `p` by a sequence applied in order (first op first).
pub fn conjugate_all(ops: &[CliffordOp], p: &PauliString) -> PauliString {
    ops.iter().fold(p.clone(), |acc, op| op.conjugate(&acc))
}

/// Appends the lowered form of each op to `circuit`.
pub fn append_ops(circuit: &mut Circuit, ops: &[CliffordOp]) -> Result<()> {
    for op in ops {
        let (gates, phase) = op.lower();
        for g in gates {
            circuit.push(g)?;
        }
        circuit.add_phase(phase);
    }
    Ok(())
}

/// Inverse of an op sequence (reversed, each op inverted).
pub fn inverse_ops(ops: &[CliffordOp]) -> Vec<CliffordOp> {
    ops.iter().rev().map(|op| op.inverse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::circuit_unitary;

    fn all_ops() -> Vec<CliffordOp> {
        vec![
            CliffordOp::S(1),
            CliffordOp::Sdg(0),
            CliffordOp::H(2),
            CliffordOp::SqrtX(1),
            CliffordOp::SqrtXdg(2),
            CliffordOp::Cnot(0, 2),
            CliffordOp::Cnot(2, 1),
            CliffordOp::Cz(1, 0),
        ]
    }

    #[test]
    fn conjugation_matches_dense_product() {
        for op in all_ops() {
            let mut c = Circuit::new(3);
            append_ops(&mut c, &[op]).unwrap();
            let u = circuit_unitary(&c).unwrap();
            for letters in ["XII", "IYI", "IIZ", "XYZ", "YZX", "ZZY", "YYY"] {
                let p = PauliString::from_letters(letters).unwrap();
                let lhs = op.conjugate(&p).to_dense_matrix().unwrap();
                let rhs = &u * p.to_dense_matrix().unwrap() * u.adjoint();
                assert!((lhs - rhs).norm() < 1e-12, "{op:?} on {letters}");
            }
        }
    }

    #[test]
    fn lowering_phases_are_exact() {
        // H is Hermitian and self-inverse: H·H = I exactly, including phase.
        let mut c = Circuit::new(1);
        append_ops(&mut c, &[CliffordOp::H(0), CliffordOp::H(0)]).unwrap();
        let u = circuit_unitary(&c).unwrap();
        assert!((u - nalgebra::DMatrix::identity(2, 2)).norm() < 1e-12);
        for op in all_ops() {
            let mut c = Circuit::new(3);
            append_ops(&mut c, &[op, op.inverse()]).unwrap();
            let u = circuit_unitary(&c).unwrap();
            assert!(
                (u - nalgebra::DMatrix::identity(8, 8)).norm() < 1e-12,
                "{op:?}"
            );
        }
    }
}
