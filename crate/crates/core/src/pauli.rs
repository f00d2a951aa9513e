//! Pauli strings and weighted Pauli sums in the binary symplectic form.
//!
//! A [`PauliString`] stores one X bit and one Z bit per qubit plus a phase
//! `i^k`. A qubit with both bits set denotes `Y`, so the operator is
//! `i^k · P_0 ⊗ P_1 ⊗ …` with `P_q ∈ {I, X, Y, Z}` and the phase of a
//! Hermitian string is always `±1`.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register expanded to a dense matrix.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Coefficients below this magnitude are dropped from a [`PauliSum`].
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' | 'i' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Phase `i^k` for `k` in `0..4`.
pub fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn cmp_masks(a: &[u64], b: &[u64]) -> Ordering {
    // Most significant word first, so masks order like the integers they encode.
    a.iter().rev().cmp(b.iter().rev())
}

/// Tensor product of single-qubit Paulis with an exact phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "a Pauli string needs at least one qubit");
        PauliString {
            n_qubits,
            x: vec![0; words(n_qubits)],
            z: vec![0; words(n_qubits)],
            phase: 0,
        }
    }

    /// Builds a string from `(qubit, letter)` pairs; unlisted qubits are `I`.
    pub fn from_sparse(n_qubits: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut p = PauliString::identity(n_qubits);
        for &(q, letter) in factors {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
            p.set(q, letter);
        }
        Ok(p)
    }

    /// Parses a dense letter string such as `"XIXXIX"` (qubit 0 first).
    pub fn from_letters(letters: &str) -> Result<Self> {
        let chars: Vec<char> = letters.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Domain("empty Pauli string".into()));
        }
        let mut p = PauliString::identity(chars.len());
        for (q, c) in chars.into_iter().enumerate() {
            let letter = Pauli::from_symbol(c)
                .ok_or_else(|| Error::Domain(format!("invalid Pauli letter {c:?}")))?;
            p.set(q, letter);
        }
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Phase exponent `k` of the prefactor `i^k`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn phase_factor(&self) -> Complex64 {
        i_pow(self.phase)
    }

    pub fn with_phase(mut self, k: u8) -> Self {
        self.phase = k % 4;
        self
    }

    pub fn x_mask(&self) -> &[u64] {
        &self.x
    }

    pub fn z_mask(&self) -> &[u64] {
        &self.z
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    /// Overwrites the letter on qubit `q`, leaving the phase untouched.
    pub fn set(&mut self, q: usize, letter: Pauli) {
        let (xb, zb) = letter.bits();
        let (w, b) = (q / 64, q % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|w| *w == 0)
    }

    /// True when every factor is `I` or `Z`.
    pub fn is_diagonal(&self) -> bool {
        self.x.iter().all(|w| *w == 0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits)
            .filter(|&q| self.x_bit(q) || self.z_bit(q))
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// `X` and `Z` bits packed into one `u64` each; only valid for `n ≤ 64`.
    pub fn masks_u64(&self) -> (u64, u64) {
        (self.x[0], self.z[0])
    }

    fn check_dims(&self, other: &PauliString) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Operator product `self · other` with the phase tracked exactly.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_dims(other)?;
        let x: Vec<u64> = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z: Vec<u64> = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        // With Y = i·X·Z each factor is i^(x·z) X^x Z^z; moving Z^z1 past X^x2
        // costs (-1)^(z1·x2), and the product is re-expressed in letter form.
        let k = popcount_and(&self.x, &self.z) as i64
            + popcount_and(&other.x, &other.z) as i64
            + 2 * popcount_and(&self.z, &other.x) as i64
            - popcount_and(&x, &z) as i64
            + self.phase as i64
            + other.phase as i64;
        Ok(PauliString {
            n_qubits: self.n_qubits,
            x,
            z,
            phase: k.rem_euclid(4) as u8,
        })
    }

    /// True iff the two operators commute: the symplectic form is even.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_dims(other)?;
        let s = popcount_and(&self.x, &other.z) + popcount_and(&self.z, &other.x);
        Ok(s.is_multiple_of(2))
    }

    /// Hermitian conjugate: letters are Hermitian, so only the phase flips.
    pub fn adjoint(&self) -> PauliString {
        let mut p = self.clone();
        p.phase = (4 - p.phase) % 4;
        p
    }

    /// Letters with the phase reset to `+1`.
    pub fn unsigned(&self) -> PauliString {
        self.clone().with_phase(0)
    }

    /// Applies the string to computational basis state `b` (qubit `k` = bit `k`),
    /// returning the image basis index and amplitude.
    pub fn apply_to_basis(&self, b: usize) -> (usize, Complex64) {
        debug_assert!(self.n_qubits <= 64);
        let (x, z) = self.masks_u64();
        let b64 = b as u64;
        let sign = if (z & b64).count_ones() % 2 == 1 {
            2
        } else {
            0
        };
        let k = self.phase as u32 + (x & z).count_ones() + sign;
        ((b64 ^ x) as usize, i_pow((k % 4) as u8))
    }

    pub fn to_dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        PauliSum::from_string(self.clone()).to_dense_matrix()
    }

    pub fn cmp_masks(&self, other: &PauliString) -> Ordering {
        cmp_masks(&self.x, &other.x).then_with(|| cmp_masks(&self.z, &other.z))
    }

    /// Letters only, e.g. `X0 Y2 Z5`; `I` for the identity.
    pub fn letters_label(&self) -> String {
        let parts: Vec<String> = self
            .support()
            .into_iter()
            .map(|q| format!("{}{}", self.letter(q).symbol(), q))
            .collect();
        if parts.is_empty() {
            "I".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i·", "-", "-i·"][self.phase as usize];
        write!(f, "{sign}{}", self.letters_label())
    }
}

/// Weighted sum of Pauli strings over a common register, kept canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(Complex64, PauliString)>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        PauliSum {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn from_string(p: PauliString) -> Self {
        Self::from_terms(p.n_qubits(), vec![(Complex64::new(1.0, 0.0), p)])
            .expect("single string has consistent width")
    }

    pub fn from_terms(n_qubits: usize, terms: Vec<(Complex64, PauliString)>) -> Result<Self> {
        for (_, p) in &terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    found: p.n_qubits(),
                });
            }
        }
        let mut s = PauliSum { n_qubits, terms };
        s.canonicalize();
        Ok(s)
    }

    /// Convenience constructor from real coefficients and letter strings.
    pub fn from_labels(terms: &[(f64, &str)]) -> Result<Self> {
        let parsed: Vec<(Complex64, PauliString)> = terms
            .iter()
            .map(|(c, l)| Ok((Complex64::new(*c, 0.0), PauliString::from_letters(l)?)))
            .collect::<Result<_>>()?;
        let n = parsed
            .first()
            .map(|(_, p)| p.n_qubits())
            .ok_or_else(|| Error::Domain("empty term list".into()))?;
        Self::from_terms(n, parsed)
    }

    fn canonicalize(&mut self) {
        let mut folded: Vec<(Complex64, PauliString)> = self
            .terms
            .drain(..)
            .map(|(c, p)| (c * p.phase_factor(), p.unsigned()))
            .collect();
        folded.sort_by(|a, b| a.1.cmp_masks(&b.1));
        let mut merged: Vec<(Complex64, PauliString)> = Vec::with_capacity(folded.len());
        for (c, p) in folded {
            match merged.last_mut() {
                Some((acc, last)) if *last == p => *acc += c,
                _ => merged.push((c, p)),
            }
        }
        merged.retain(|(c, _)| c.norm() >= PRUNE_THRESHOLD);
        self.terms = merged;
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order; every string carries phase `+1`.
    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        PauliSum::from_terms(self.n_qubits, terms)
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let terms = self
            .terms
            .iter()
            .map(|(c, p)| (c * factor, p.clone()))
            .collect();
        PauliSum::from_terms(self.n_qubits, terms).expect("width preserved")
    }

    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, pa) in &self.terms {
            for (cb, pb) in &other.terms {
                terms.push((ca * cb, pa.multiply(pb)?));
            }
        }
        PauliSum::from_terms(self.n_qubits, terms)
    }

    pub fn adjoint(&self) -> PauliSum {
        let terms = self
            .terms
            .iter()
            .map(|(c, p)| (c.conj(), p.adjoint()))
            .collect();
        PauliSum::from_terms(self.n_qubits, terms).expect("width preserved")
    }

    /// Canonical strings are Hermitian, so the sum is Hermitian iff every
    /// coefficient is real.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|(c, _)| c.im.abs() <= tol)
    }

    /// First pair of non-commuting terms, if any.
    pub fn first_noncommuting_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.terms.len() {
            for j in (i + 1)..self.terms.len() {
                if !self.terms[i]
                    .1
                    .commutes(&self.terms[j].1)
                    .expect("same width")
                {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn check_commuting(&self) -> Result<()> {
        match self.first_noncommuting_pair() {
            None => Ok(()),
            Some((i, j)) => Err(Error::NonCommuting {
                first: i,
                second: j,
                first_label: self.terms[i].1.letters_label(),
                second_label: self.terms[j].1.letters_label(),
            }),
        }
    }

    /// Kronecker expansion with qubit `k` as bit `k` of the basis index.
    pub fn to_dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::Capacity {
                n_qubits: self.n_qubits,
                max: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (c, p) in &self.terms {
            for b in 0..dim {
                let (row, amp) = p.apply_to_basis(b);
                m[(row, b)] += c * amp;
            }
        }
        Ok(m)
    }
}

fn format_coefficient(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{:+}", c.re)
    } else if c.re == 0.0 {
        format!("{:+}i", c.im)
    } else {
        format!("({:+}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{}·{}", format_coefficient(*c), p.letters_label())?;
        }
        Ok(())
    }
}

/// `σ₊ = (X + iY)/2 = |0⟩⟨1|` on qubit `q`.
pub fn sigma_plus(n_qubits: usize, q: usize) -> Result<PauliSum> {
    ladder(n_qubits, q, 1.0)
}

/// `σ₋ = (X − iY)/2 = |1⟩⟨0|` on qubit `q`.
pub fn sigma_minus(n_qubits: usize, q: usize) -> Result<PauliSum> {
    ladder(n_qubits, q, -1.0)
}

fn ladder(n_qubits: usize, q: usize, sign: f64) -> Result<PauliSum> {
    let x = PauliString::from_sparse(n_qubits, &[(q, Pauli::X)])?;
    let y = PauliString::from_sparse(n_qubits, &[(q, Pauli::Y)])?;
    PauliSum::from_terms(
        n_qubits,
        vec![
            (Complex64::new(0.5, 0.0), x),
            (Complex64::new(0.0, 0.5 * sign), y),
        ],
    )
}
