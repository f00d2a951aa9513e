//! Pauli exponentials `exp(iθ·P)` as conjugation chains around a single
//! anchor rotation.

use std::f64::consts::FRAC_PI_2;

use super::circuit::{Circuit, Gate};
use super::clifford::{append_ops, conjugate_all, inverse_ops, CliffordOp};
use super::peephole::cancel_adjacent;
use crate::bosonmap::BosonQubitMap;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};

/// How the basis-change chain around the anchor rotation is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainLayout {
    /// Per-qubit basis change into the cheaper of the X or Z family, then a
    /// CNOT ladder onto the anchor. Six CNOTs and at most nine single-qubit
    /// gates for any weight-4 string.
    #[default]
    Compact,
    /// `U = e^{iπ/4·B_a}·Π_j e^{iπ/4·Z_a T_j}` with every `ZX` factor lowered
    /// as `CNOT, S†, RX(−π/2)`, followed by local cancellation. Requires an
    /// X or Y letter on the anchor.
    Conjugation,
}

/// `exp(iπ/4·Z_c X_t)` as `CNOT(c,t)`, `S†(c)`, `RX(t, −π/2)`; the phases
/// of the three factors cancel exactly.
pub fn decompose_zx(n_qubits: usize, control: usize, target: usize) -> Result<Circuit> {
    if control == target {
        return Err(Error::InvalidGate(format!(
            "ZX rotation needs distinct qubits, got {control} twice"
        )));
    }
    Circuit::from_gates(
        n_qubits,
        vec![
            Gate::cnot(control, target),
            Gate::Sdg(control),
            Gate::Rx(target, -FRAC_PI_2),
        ],
        0.0,
    )
}

/// `exp(iθ·p)` using the [`ChainLayout::Compact`] layout.
pub fn compile_pauli_exponential(p: &PauliString, theta: f64) -> Result<Circuit> {
    compile_pauli_exponential_with(p, theta, ChainLayout::Compact)
}

pub fn compile_pauli_exponential_with(
    p: &PauliString,
    theta: f64,
    layout: ChainLayout,
) -> Result<Circuit> {
    if p.is_identity() {
        return Err(Error::IdentityString);
    }
    let sign = match p.phase() {
        0 => 1.0,
        2 => -1.0,
        _ => return Err(Error::NonHermitian(1.0)),
    };
    let letters = p.unsigned();
    let support = letters.support();
    let anchor = support[0];
    let chain = match layout {
        ChainLayout::Compact => compact_chain(&letters, &support),
        ChainLayout::Conjugation => conjugation_chain(&letters, &support)?,
    };

    // V·P·V† = s·(core letter on the anchor)
    let image = conjugate_all(&chain, &letters);
    let core = image.letter(anchor);
    debug_assert_eq!(image.weight(), 1);
    let s = if image.phase() == 2 { -1.0 } else { 1.0 };
    let phi = sign * s * theta;

    let mut c = Circuit::new(p.n_qubits());
    append_ops(&mut c, &chain)?;
    match core {
        // e^{iφX} = RX(−2φ)
        Pauli::X => c.push(Gate::Rx(anchor, -2.0 * phi))?,
        // e^{iφZ} = e^{iφ}·U1(−2φ)
        Pauli::Z => {
            c.push(Gate::U1(anchor, -2.0 * phi))?;
            c.add_phase(phi);
        }
        _ => unreachable!("chains end on X or Z"),
    }
    append_ops(&mut c, &inverse_ops(&chain))?;
    Ok(match layout {
        ChainLayout::Compact => c,
        ChainLayout::Conjugation => cancel_adjacent(&c),
    })
}

fn compact_chain(p: &PauliString, support: &[usize]) -> Vec<CliffordOp> {
    let anchor = support[0];
    // lowered single-qubit cost per side: S/S† and √X are one gate, H is three
    let (mut x_cost, mut z_cost) = (0, 0);
    for &q in support {
        match p.letter(q) {
            Pauli::Y => {
                x_cost += 1;
                z_cost += 1;
            }
            Pauli::Z => x_cost += 3,
            Pauli::X => z_cost += 3,
            Pauli::I => {}
        }
    }
    let x_family = x_cost <= z_cost;
    let mut ops = Vec::with_capacity(2 * support.len());
    for &q in support {
        match (p.letter(q), x_family) {
            (Pauli::Y, true) => ops.push(CliffordOp::Sdg(q)),
            (Pauli::Z, true) => ops.push(CliffordOp::H(q)),
            (Pauli::Y, false) => ops.push(CliffordOp::SqrtX(q)),
            (Pauli::X, false) => ops.push(CliffordOp::H(q)),
            _ => {}
        }
    }
    for &t in support[1..].iter().rev() {
        ops.push(if x_family {
            CliffordOp::Cnot(anchor, t)
        } else {
            CliffordOp::Cnot(t, anchor)
        });
    }
    ops
}

fn conjugation_chain(p: &PauliString, support: &[usize]) -> Result<Vec<CliffordOp>> {
    let anchor = support[0];
    if p.letter(anchor) == Pauli::Z {
        return Err(Error::UnsupportedShape(format!(
            "the conjugation chain needs an X or Y anchor letter, got {}",
            p.letters_label()
        )));
    }
    let mut w = Vec::with_capacity(4 * support.len());
    for &t in support[1..].iter().rev() {
        // e^{iπ/4·Z_a T_t} from e^{iπ/4·Z_a X_t} by a local basis change on t
        let (pre, post) = match p.letter(t) {
            Pauli::X => (None, None),
            Pauli::Y => (Some(CliffordOp::Sdg(t)), Some(CliffordOp::S(t))),
            Pauli::Z => (Some(CliffordOp::H(t)), Some(CliffordOp::H(t))),
            Pauli::I => unreachable!(),
        };
        w.extend(pre);
        w.extend([
            CliffordOp::Cnot(anchor, t),
            CliffordOp::Sdg(anchor),
            CliffordOp::SqrtXdg(t),
        ]);
        w.extend(post);
    }
    // e^{iπ/4·X_a} ∝ √X†, e^{iπ/4·Y_a} ∝ S·√X†·S†
    let candidates = [
        vec![CliffordOp::SqrtXdg(anchor)],
        vec![
            CliffordOp::Sdg(anchor),
            CliffordOp::SqrtXdg(anchor),
            CliffordOp::S(anchor),
        ],
    ];
    for b in candidates {
        let chain: Vec<CliffordOp> = w.iter().copied().chain(b).collect();
        let image = conjugate_all(&chain, p);
        if image.weight() == 1 && image.letter(anchor) == Pauli::Z {
            return Ok(chain);
        }
    }
    unreachable!("one of the anchor rotations maps the string onto Z_a")
}

/// `Π_i exp(iε·c_i·P_i)` over the terms of a commuting Hermitian sum, in
/// canonical term order.
pub fn compile_full_unitary(h: &PauliSum, eps: f64) -> Result<Circuit> {
    compile_full_unitary_with(h, eps, ChainLayout::Compact)
}

pub fn compile_full_unitary_with(h: &PauliSum, eps: f64, layout: ChainLayout) -> Result<Circuit> {
    check_commuting_hermitian(h)?;
    let mut c = Circuit::new(h.n_qubits());
    for (coef, p) in h.terms() {
        if p.is_identity() {
            c.add_phase(eps * coef.re);
            continue;
        }
        c.append(&compile_pauli_exponential_with(p, eps * coef.re, layout)?)?;
    }
    Ok(c)
}

pub(crate) fn check_commuting_hermitian(h: &PauliSum) -> Result<()> {
    let max_im = h
        .terms()
        .iter()
        .map(|(c, _)| c.im.abs())
        .fold(0.0, f64::max);
    if max_im > 1e-14 {
        return Err(Error::NonHermitian(max_im));
    }
    h.check_commuting()
}

/// X gates on the qubits that are `1` in the encoded two-mode vacuum.
pub fn prepare_ground_state(map: &BosonQubitMap) -> Result<Circuit> {
    if map.n_modes() != 2 || map.cutoff() != 2 {
        return Err(Error::UnsupportedShape(format!(
            "ground-state preparation is defined for 2 modes with cutoff 2, got {} modes with cutoff {}",
            map.n_modes(),
            map.cutoff()
        )));
    }
    let vacuum = map.encode(&[0, 0])?;
    let mut c = Circuit::new(map.total_qubits());
    for q in (0..vacuum.len()).filter(|&q| vacuum.bit(q)) {
        c.push(Gate::X(q))?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{circuit_unitary, phase_aligned_distance};
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn exp_i_theta_p(p: &PauliString, theta: f64) -> DMatrix<Complex64> {
        // P² = I, so e^{iθP} = cos θ·I + i sin θ·P
        let m = p.to_dense_matrix().unwrap();
        let dim = m.nrows();
        DMatrix::identity(dim, dim) * Complex64::new(theta.cos(), 0.0)
            + m * Complex64::new(0.0, theta.sin())
    }

    fn exact_distance(c: &Circuit, target: &DMatrix<Complex64>) -> f64 {
        (circuit_unitary(c).unwrap() - target).norm()
    }

    #[test]
    fn zx_matches_exponential_exactly() {
        let c = decompose_zx(2, 0, 1).unwrap();
        let p = PauliString::from_letters("ZX").unwrap();
        assert!(exact_distance(&c, &exp_i_theta_p(&p, std::f64::consts::FRAC_PI_4)) < 1e-12);
        assert_eq!(c.counts().cnot, 1);
        assert!(decompose_zx(2, 1, 1).is_err());
    }

    #[test]
    fn every_letter_pattern_compiles_exactly() {
        let letters = ['I', 'X', 'Y', 'Z'];
        for code in 1..64usize {
            let s: String = (0..3).map(|k| letters[(code >> (2 * k)) & 3]).collect();
            let p = PauliString::from_letters(&s).unwrap();
            for theta in [0.37, -1.1] {
                let want = exp_i_theta_p(&p, theta);
                let c = compile_pauli_exponential(&p, theta).unwrap();
                assert!(exact_distance(&c, &want) < 1e-12, "compact {s}");
                if p.letter(p.support()[0]) != Pauli::Z {
                    let c = compile_pauli_exponential_with(&p, theta, ChainLayout::Conjugation)
                        .unwrap();
                    assert!(exact_distance(&c, &want) < 1e-12, "conjugation {s}");
                }
            }
        }
    }

    #[test]
    fn negated_string_flips_the_angle() {
        let p = PauliString::from_letters("XYZ").unwrap().with_phase(2);
        let c = compile_pauli_exponential(&p, 0.3).unwrap();
        let want = exp_i_theta_p(&p.unsigned(), -0.3);
        assert!(exact_distance(&c, &want) < 1e-12);
    }

    #[test]
    fn single_z_is_one_phase_gate() {
        let p = PauliString::from_letters("Z").unwrap();
        let c = compile_pauli_exponential(&p, 0.25).unwrap();
        assert_eq!(c.gates(), &[Gate::U1(0, -0.5)]);
        assert_eq!(c.global_phase(), 0.25);
    }

    #[test]
    fn conjugation_layout_reproduces_the_template() {
        let p = PauliString::from_letters("XIXXIX").unwrap();
        let eps = 0.5e-6;
        let c = compile_pauli_exponential_with(&p, eps / 4.0, ChainLayout::Conjugation).unwrap();
        let expected = vec![
            Gate::cnot(0, 5),
            Gate::Sdg(0),
            Gate::cnot(0, 3),
            Gate::Sdg(0),
            Gate::cnot(0, 2),
            Gate::Sdg(0),
            Gate::Rx(0, -FRAC_PI_2),
            Gate::U1(0, eps / 2.0),
            Gate::Rx(0, FRAC_PI_2),
            Gate::S(0),
            Gate::cnot(0, 2),
            Gate::S(0),
            Gate::cnot(0, 3),
            Gate::S(0),
            Gate::cnot(0, 5),
        ];
        assert_eq!(c.gates(), expected.as_slice());
        assert!(
            phase_aligned_distance(&circuit_unitary(&c).unwrap(), &exp_i_theta_p(&p, eps / 4.0))
                < 1e-12
        );
        let z_anchor = PauliString::from_letters("ZX").unwrap();
        assert!(compile_pauli_exponential_with(&z_anchor, 0.1, ChainLayout::Conjugation).is_err());
    }

    #[test]
    fn weight_four_budget() {
        let h = BosonQubitMap::two_mode_pair()
            .map_squared_pair_hamiltonian()
            .unwrap();
        for (_, p) in h.terms() {
            let counts = compile_pauli_exponential(p, 0.1).unwrap().counts();
            assert_eq!(counts.cnot, 6, "{p}");
            assert!(counts.single <= 9, "{p}");
        }
    }

    #[test]
    fn identity_is_rejected() {
        assert!(matches!(
            compile_pauli_exponential(&PauliString::identity(3), 0.1),
            Err(Error::IdentityString)
        ));
    }

    #[test]
    fn noncommuting_sum_names_the_pair() {
        let h = PauliSum::from_labels(&[(1.0, "XI"), (0.5, "ZZ"), (0.5, "ZI")]).unwrap();
        match compile_full_unitary(&h, 0.1) {
            Err(Error::NonCommuting {
                first_label,
                second_label,
                ..
            }) => {
                assert!(first_label.contains('X') || second_label.contains('X'));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ground_state_preparation() {
        let c = prepare_ground_state(&BosonQubitMap::two_mode_pair()).unwrap();
        assert_eq!(c.gates(), &[Gate::X(1), Gate::X(2), Gate::X(4), Gate::X(5)]);
        assert!(prepare_ground_state(&BosonQubitMap::new(2, 3).unwrap()).is_err());
    }
}
