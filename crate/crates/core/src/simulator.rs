//! Dense statevector execution, the matrix-exponential oracle and fidelity
//! measures.
//!
//! Amplitude `k` belongs to the basis state whose qubit `q` is bit `q` of
//! `k`; see [`crate::bits`] for the rendered form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::bits::Bitstring;
use crate::bosonmap::BosonQubitMap;
use crate::compiler::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::exec::{for_each_chunk_mut, Execution};
use crate::pauli::{Pauli, PauliSum, MAX_DENSE_QUBITS};
use crate::physics::TwoQutritState;

/// Largest register a [`Statevector`] will allocate.
pub const MAX_STATE_QUBITS: usize = 26;

/// Registers at least this wide split gate kernels across threads.
pub const PARALLEL_MIN_QUBITS: usize = 14;

/// Smallest chunk handed to one worker.
const MIN_CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

#[derive(Serialize)]
struct AmplitudeRecord {
    index: usize,
    real: f64,
    imaginary: f64,
}

impl Statevector {
    /// `|0…0⟩`.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        Self::basis_state(n_qubits, 0)
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::Capacity {
                n_qubits,
                max: MAX_STATE_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Domain(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    pub fn from_bitstring(bits: &Bitstring) -> Result<Self> {
        Self::basis_state(bits.len(), bits.index())
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::Domain(format!("length {dim} is not a power of two")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::Capacity {
                n_qubits,
                max: MAX_STATE_QUBITS,
            });
        }
        let sv = Statevector { n_qubits, amps };
        let defect = (sv.norm_sqr() - 1.0).abs();
        if defect > 1e-12 {
            return Err(Error::Domain(format!(
                "norm² deviates from 1 by {defect:e}"
            )));
        }
        Ok(sv)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn default_execution(&self) -> Execution {
        if self.n_qubits >= PARALLEL_MIN_QUBITS {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        self.apply_gate_with(g, self.default_execution())
    }

    /// Applies `g` in place. Both schedules perform the same arithmetic per
    /// amplitude, so results are bit-identical.
    pub fn apply_gate_with(&mut self, g: &Gate, exec: Execution) -> Result<()> {
        g.validate(self.n_qubits)?;
        match *g {
            Gate::Cnot { control, target } => {
                let (cb, tb) = (1usize << control, 1usize << target);
                let chunk = (1usize << (control.max(target) + 1)).max(MIN_CHUNK);
                for_each_chunk_mut(exec, &mut self.amps, chunk, |_, block| {
                    for i in 0..block.len() {
                        if i & cb != 0 && i & tb == 0 {
                            block.swap(i, i | tb);
                        }
                    }
                });
            }
            Gate::U1(q, _) | Gate::S(q) | Gate::Sdg(q) | Gate::Rz(q, _) => {
                let m = g.matrix().expect("single-qubit gate");
                self.diagonal(q, m[0][0], m[1][1], exec);
            }
            Gate::X(q) | Gate::SqrtX(q) | Gate::Rx(q, _) => {
                let m = g.matrix().expect("single-qubit gate");
                self.single(q, m, exec);
            }
        }
        Ok(())
    }

    /// Applies a Pauli letter exactly (`Y = [[0, −i], [i, 0]]`).
    pub fn apply_pauli(&mut self, q: usize, letter: Pauli) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: self.n_qubits,
            });
        }
        let (zero, one) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        let i = Complex64::new(0.0, 1.0);
        let exec = self.default_execution();
        match letter {
            Pauli::I => {}
            Pauli::X => self.single(q, [[zero, one], [one, zero]], exec),
            Pauli::Y => self.single(q, [[zero, -i], [i, zero]], exec),
            Pauli::Z => self.diagonal(q, one, -one, exec),
        }
        Ok(())
    }

    fn single(&mut self, q: usize, m: [[Complex64; 2]; 2], exec: Execution) {
        let stride = 1usize << q;
        let chunk = (stride << 1).max(MIN_CHUNK);
        for_each_chunk_mut(exec, &mut self.amps, chunk, |_, block| {
            for base in (0..block.len()).step_by(stride << 1) {
                for i in base..base + stride {
                    let (a0, a1) = (block[i], block[i + stride]);
                    block[i] = m[0][0] * a0 + m[0][1] * a1;
                    block[i + stride] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        });
    }

    fn diagonal(&mut self, q: usize, d0: Complex64, d1: Complex64, exec: Execution) {
        let bit = 1usize << q;
        for_each_chunk_mut(exec, &mut self.amps, MIN_CHUNK, |k, block| {
            let offset = k * MIN_CHUNK;
            for (i, a) in block.iter_mut().enumerate() {
                *a *= if (offset + i) & bit == 0 { d0 } else { d1 };
            }
        });
    }

    pub fn apply_global_phase(&mut self, phase: f64) {
        if phase != 0.0 {
            let f = Complex64::from_polar(1.0, phase);
            self.amps.iter_mut().for_each(|a| *a *= f);
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `[{"index": k, "real": …, "imaginary": …}, …]`.
    pub fn to_json(&self) -> Result<String> {
        let records: Vec<AmplitudeRecord> = self
            .amps
            .iter()
            .enumerate()
            .map(|(index, a)| AmplitudeRecord {
                index,
                real: a.re,
                imaginary: a.im,
            })
            .collect();
        Ok(serde_json::to_string_pretty(&records)?)
    }
}

/// Runs `c` on `initial`, first gate first, including the recorded global
/// phase.
pub fn run(c: &Circuit, initial: &Statevector) -> Result<Statevector> {
    run_with(c, initial, initial.default_execution())
}

pub fn run_with(c: &Circuit, initial: &Statevector, exec: Execution) -> Result<Statevector> {
    if c.n_qubits() != initial.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: c.n_qubits(),
            found: initial.n_qubits,
        });
    }
    let mut sv = initial.clone();
    for g in c.gates() {
        sv.apply_gate_with(g, exec)?;
    }
    sv.apply_global_phase(c.global_phase());
    Ok(sv)
}

/// Dense unitary of `c`, one column per basis state.
pub fn circuit_unitary(c: &Circuit) -> Result<DMatrix<Complex64>> {
    let n = c.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            n_qubits: n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let out = run_with(c, &Statevector::basis_state(n, col)?, Execution::Sequential)?;
        u.column_mut(col).copy_from_slice(out.amplitudes());
    }
    Ok(u)
}

/// `exp(iε·H)` by Hermitian eigendecomposition.
pub fn exact_evolution_oracle(h: &PauliSum, eps: f64) -> Result<DMatrix<Complex64>> {
    let m = h.to_dense_matrix()?;
    let defect = (&m - m.adjoint()).camax();
    if defect > 1e-12 {
        return Err(Error::NonHermitian(defect));
    }
    let eig = m.symmetric_eigen();
    let phases =
        DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, eps * l)));
    Ok(&eig.eigenvectors * phases * eig.eigenvectors.adjoint())
}

/// `min_φ ‖a − e^{iφ}·b‖_F`.
pub fn phase_aligned_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let overlap: Complex64 = b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    (a - b * phase).norm()
}

/// `|⟨reference|state⟩|²`.
pub fn fidelity(reference: &Statevector, state: &Statevector) -> Result<f64> {
    Ok(reference.inner(state)?.norm_sqr())
}

/// Probability of the encoded two-mode vacuum.
pub fn p0_fidelity_proxy(state: &Statevector, map: &BosonQubitMap) -> Result<f64> {
    check_width(state, map)?;
    Ok(state.amplitude(map.encode(&[0, 0])?.index()).norm_sqr())
}

/// A qubit state projected onto the nine codewords.
#[derive(Debug, Clone, PartialEq)]
pub struct QutritReduction {
    pub state: TwoQutritState,
    /// Probability outside the codespace.
    pub leakage: f64,
}

pub fn reduce_to_qutrits(state: &Statevector, map: &BosonQubitMap) -> Result<QutritReduction> {
    check_width(state, map)?;
    if map.n_modes() != 2 || map.cutoff() != 2 {
        return Err(Error::UnsupportedShape(
            "qutrit reduction needs 2 modes with cutoff 2".into(),
        ));
    }
    let mut amps = [Complex64::new(0.0, 0.0); 9];
    for (slot, idx) in amps.iter_mut().zip(map.codeword_indices()) {
        *slot = state.amplitude(idx);
    }
    let weight: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if weight < 1e-12 {
        return Err(Error::DegenerateProjection(weight));
    }
    Ok(QutritReduction {
        state: TwoQutritState::normalized(amps)?,
        leakage: (state.norm_sqr() - weight).max(0.0),
    })
}

/// Embeds a two-qutrit state into the qubit register via the codewords.
pub fn embed_qutrits(state: &TwoQutritState, map: &BosonQubitMap) -> Result<Statevector> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << map.total_qubits()];
    for (a, idx) in state.amplitudes().iter().zip(map.codeword_indices()) {
        amps[idx] = *a;
    }
    Statevector::from_amplitudes(amps)
}

/// CSV with one row per codeword: `n_a,n_b,bitstring,probability`.
pub fn codeword_probabilities_csv(state: &Statevector, map: &BosonQubitMap) -> Result<String> {
    check_width(state, map)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n_a", "n_b", "bitstring", "probability"])?;
    for s in map.fock_states() {
        let bits = map.encode_fock(&s)?;
        let occ = s.occupations();
        w.write_record([
            occ[0].to_string(),
            occ[1].to_string(),
            bits.to_string(),
            state.amplitude(bits.index()).norm_sqr().to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn check_width(state: &Statevector, map: &BosonQubitMap) -> Result<()> {
    if state.n_qubits != map.total_qubits() {
        return Err(Error::DimensionMismatch {
            expected: map.total_qubits(),
            found: state.n_qubits,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::prepare_ground_state;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn x_flips() {
        let mut sv = Statevector::zero_state(1).unwrap();
        sv.apply_gate(&Gate::X(0)).unwrap();
        assert_eq!(sv.amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn cnot_on_control_set() {
        // q0 = 1, q1 = 0 is index 1
        let mut sv = Statevector::basis_state(2, 0b01).unwrap();
        sv.apply_gate(&Gate::cnot(0, 1)).unwrap();
        assert_eq!(sv.amplitude(0b11), c(1.0, 0.0));
        let mut sv = Statevector::basis_state(2, 0b10).unwrap();
        sv.apply_gate(&Gate::cnot(0, 1)).unwrap();
        assert_eq!(sv.amplitude(0b10), c(1.0, 0.0));
    }

    #[test]
    fn u1_phase() {
        let mut sv = Statevector::basis_state(1, 1).unwrap();
        sv.apply_gate(&Gate::U1(0, 0.3)).unwrap();
        assert!((sv.amplitude(1) - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        assert!(sv.apply_gate(&Gate::X(1)).is_err());
    }

    #[test]
    fn paulis_match_definitions() {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut sv = Statevector::from_amplitudes(vec![h, h * c(0.0, 1.0)]).unwrap();
        sv.apply_pauli(0, Pauli::Y).unwrap();
        // Y(a, b) = (−i·b, i·a)
        assert!((sv.amplitude(0) - h).norm() < 1e-15);
        assert!((sv.amplitude(1) - h * c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn parallel_kernels_are_bit_identical() {
        let n = 15;
        let mut a = Statevector::zero_state(n).unwrap();
        let gates = [
            Gate::SqrtX(0),
            Gate::Rx(14, 0.3),
            Gate::cnot(0, 14),
            Gate::U1(14, 0.7),
            Gate::cnot(14, 3),
            Gate::Rx(3, 1.1),
            Gate::S(3),
        ];
        let mut b = a.clone();
        for g in &gates {
            a.apply_gate_with(g, Execution::Sequential).unwrap();
            b.apply_gate_with(g, Execution::Parallel).unwrap();
        }
        assert_eq!(a, b);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ground_state_prep() {
        let map = BosonQubitMap::two_mode_pair();
        let out = run(
            &prepare_ground_state(&map).unwrap(),
            &Statevector::zero_state(6).unwrap(),
        )
        .unwrap();
        assert_eq!(out.amplitude(0b110110), c(1.0, 0.0));
        assert_eq!(p0_fidelity_proxy(&out, &map).unwrap(), 1.0);
    }

    #[test]
    fn oracle_basics() {
        let h = BosonQubitMap::two_mode_pair()
            .map_squared_pair_hamiltonian()
            .unwrap();
        let id = DMatrix::<Complex64>::identity(64, 64);
        assert!((exact_evolution_oracle(&h, 0.0).unwrap() - &id).norm() < 1e-12);
        let u = exact_evolution_oracle(&h, 0.37).unwrap();
        assert!((u.adjoint() * &u - &id).camax() < 1e-12);
        assert!((u[(0b011011, 0b110110)] - c(0.0, (0.74f64).sin())).norm() < 1e-12);
        let bad = PauliSum::from_terms(
            1,
            vec![(
                c(0.0, 1.0),
                crate::pauli::PauliString::from_letters("X").unwrap(),
            )],
        )
        .unwrap();
        assert!(matches!(
            exact_evolution_oracle(&bad, 1.0),
            Err(Error::NonHermitian(_))
        ));
    }

    #[test]
    fn fidelity_examples() {
        let a = Statevector::basis_state(2, 1).unwrap();
        let b = Statevector::basis_state(2, 2).unwrap();
        assert_eq!(fidelity(&a, &a).unwrap(), 1.0);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        assert!(fidelity(&a, &Statevector::zero_state(3).unwrap()).is_err());
    }

    #[test]
    fn reduction_and_leakage() {
        let map = BosonQubitMap::two_mode_pair();
        let ground = Statevector::basis_state(6, 0b110110).unwrap();
        let r = reduce_to_qutrits(&ground, &map).unwrap();
        assert_eq!(r.leakage, 0.0);
        assert_eq!(r.state.ground_probability(), 1.0);
        let u = Complex64::new(0.125, 0.0);
        let uniform = Statevector::from_amplitudes(vec![u; 64]).unwrap();
        let r = reduce_to_qutrits(&uniform, &map).unwrap();
        assert!((r.leakage - 55.0 / 64.0).abs() < 1e-15);
        let outside = Statevector::zero_state(6).unwrap();
        assert!(matches!(
            reduce_to_qutrits(&outside, &map),
            Err(Error::DegenerateProjection(_))
        ));
    }

    #[test]
    fn exports() {
        let map = BosonQubitMap::two_mode_pair();
        let sv = Statevector::basis_state(6, 0b110110).unwrap();
        let csv = codeword_probabilities_csv(&sv, &map).unwrap();
        assert!(csv.starts_with("n_a,n_b,bitstring,probability\n0,0,011011,1\n"));
        let json = sv.to_json().unwrap();
        assert!(json.contains("\"index\": 54"));
    }
}
