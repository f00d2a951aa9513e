//! Unary encoding of truncated bosonic modes into qubit registers.
//!
//! Mode `m` with cutoff `N_p` owns the qubit block
//! `[m·(N_p+1), (m+1)·(N_p+1))`. Occupation `n` is encoded as all block
//! qubits in `|1⟩` except block qubit `n`, which is `|0⟩`; for `N_p = 2`
//! this gives `|0⟩ ↦ 011`, `|1⟩ ↦ 101`, `|2⟩ ↦ 110`.

use num_complex::Complex64;

use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::pauli::{sigma_minus, sigma_plus, PauliSum};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockBasisState {
    occupations: Vec<usize>,
    cutoff: usize,
}

impl FockBasisState {
    pub fn new(occupations: Vec<usize>, cutoff: usize) -> Result<Self> {
        if let Some(&n) = occupations.iter().find(|&&n| n > cutoff) {
            return Err(Error::Domain(format!(
                "occupation {n} exceeds cutoff {cutoff}"
            )));
        }
        Ok(FockBasisState {
            occupations,
            cutoff,
        })
    }

    pub fn occupations(&self) -> &[usize] {
        &self.occupations
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BosonQubitMap {
    n_modes: usize,
    cutoff: usize,
}

impl BosonQubitMap {
    pub fn new(n_modes: usize, cutoff: usize) -> Result<Self> {
        if n_modes == 0 || cutoff == 0 {
            return Err(Error::UnsupportedShape(format!(
                "need at least one mode and cutoff ≥ 1, got {n_modes} modes with cutoff {cutoff}"
            )));
        }
        Ok(BosonQubitMap { n_modes, cutoff })
    }

    /// Two modes with at most two excitations each, on six qubits.
    pub fn two_mode_pair() -> Self {
        BosonQubitMap {
            n_modes: 2,
            cutoff: 2,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn qubits_per_mode(&self) -> usize {
        self.cutoff + 1
    }

    pub fn total_qubits(&self) -> usize {
        self.n_modes * self.qubits_per_mode()
    }

    pub fn block(&self, mode: usize) -> Result<std::ops::Range<usize>> {
        if mode >= self.n_modes {
            return Err(Error::InvalidMode {
                mode,
                n_modes: self.n_modes,
            });
        }
        let w = self.qubits_per_mode();
        Ok(mode * w..(mode + 1) * w)
    }

    pub fn encode_fock(&self, state: &FockBasisState) -> Result<Bitstring> {
        if state.occupations.len() != self.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                found: state.occupations.len(),
            });
        }
        if state.cutoff != self.cutoff {
            return Err(Error::Domain(format!(
                "state cutoff {} does not match map cutoff {}",
                state.cutoff, self.cutoff
            )));
        }
        let w = self.qubits_per_mode();
        let mut bits = Vec::with_capacity(self.total_qubits());
        for &n in &state.occupations {
            if n > self.cutoff {
                return Err(Error::Domain(format!(
                    "occupation {n} exceeds cutoff {}",
                    self.cutoff
                )));
            }
            bits.extend((0..w).map(|k| k != n));
        }
        Ok(Bitstring::new(bits))
    }

    /// Encodes occupations directly, e.g. `encode(&[0, 0])`.
    pub fn encode(&self, occupations: &[usize]) -> Result<Bitstring> {
        self.encode_fock(&FockBasisState::new(occupations.to_vec(), self.cutoff)?)
    }

    /// Inverse of [`encode_fock`](Self::encode_fock); `None` marks a
    /// non-codeword.
    pub fn decode_bitstring(&self, bits: &Bitstring) -> Option<FockBasisState> {
        if bits.len() != self.total_qubits() {
            return None;
        }
        let w = self.qubits_per_mode();
        let mut occupations = Vec::with_capacity(self.n_modes);
        for block in bits.bits().chunks(w) {
            let mut zeros = block.iter().enumerate().filter(|(_, b)| !**b);
            match (zeros.next(), zeros.next()) {
                (Some((n, _)), None) => occupations.push(n),
                _ => return None,
            }
        }
        Some(FockBasisState {
            occupations,
            cutoff: self.cutoff,
        })
    }

    /// Every Fock basis state, in lexicographic order of occupations.
    pub fn fock_states(&self) -> Vec<FockBasisState> {
        let per = self.cutoff + 1;
        let total = per.pow(self.n_modes as u32);
        (0..total)
            .map(|mut k| {
                let mut occ = vec![0; self.n_modes];
                for slot in occ.iter_mut().rev() {
                    *slot = k % per;
                    k /= per;
                }
                FockBasisState {
                    occupations: occ,
                    cutoff: self.cutoff,
                }
            })
            .collect()
    }

    /// Basis indices of all codewords, aligned with [`fock_states`](Self::fock_states).
    pub fn codeword_indices(&self) -> Vec<usize> {
        self.fock_states()
            .iter()
            .map(|s| {
                self.encode_fock(s)
                    .expect("enumerated states are valid")
                    .index()
            })
            .collect()
    }

    /// `a† ↦ Σₙ √(n+1)·σ₋ⁿσ₊ⁿ⁺¹` with block-local qubit indices.
    pub fn map_creation(&self, mode: usize) -> Result<PauliSum> {
        let block = self.block(mode)?;
        let n = self.total_qubits();
        let mut sum = PauliSum::zero(n);
        for k in 0..self.cutoff {
            let lo = block.start + k;
            let term = sigma_minus(n, lo)?
                .multiply(&sigma_plus(n, lo + 1)?)?
                .scale(Complex64::new(((k + 1) as f64).sqrt(), 0.0));
            sum = sum.add(&term)?;
        }
        Ok(sum)
    }

    pub fn map_annihilation(&self, mode: usize) -> Result<PauliSum> {
        Ok(self.map_creation(mode)?.adjoint())
    }

    /// Codespace image of `a†²` for cutoff 2: `√2·σ₋⁰σ₊²` on the mode block.
    pub fn squared_creation_image(&self, mode: usize) -> Result<PauliSum> {
        self.require_pair_shape()?;
        let block = self.block(mode)?;
        let n = self.total_qubits();
        Ok(sigma_minus(n, block.start)?
            .multiply(&sigma_plus(n, block.start + 2)?)?
            .scale(Complex64::new(2f64.sqrt(), 0.0)))
    }

    /// Image of `a†²b†² + a²b²`: eight commuting weight-4 strings with
    /// coefficients `±¼`.
    pub fn map_squared_pair_hamiltonian(&self) -> Result<PauliSum> {
        self.require_pair_shape()?;
        let raising = self
            .squared_creation_image(0)?
            .multiply(&self.squared_creation_image(1)?)?;
        raising.add(&raising.adjoint())
    }

    fn require_pair_shape(&self) -> Result<()> {
        if self.n_modes != 2 || self.cutoff != 2 {
            return Err(Error::UnsupportedShape(format!(
                "requires 2 modes with cutoff 2, got {} modes with cutoff {}",
                self.n_modes, self.cutoff
            )));
        }
        Ok(())
    }
}
