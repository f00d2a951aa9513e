#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use squeezesim::bosonmap::BosonQubitMap;
use squeezesim::pauli::{PauliString, PauliSum};

pub fn pair() -> BosonQubitMap {
    BosonQubitMap::two_mode_pair()
}

pub fn hamiltonian() -> PauliSum {
    pair().map_squared_pair_hamiltonian().unwrap()
}

/// The eight strings with their signs, written out by hand.
pub const EXPECTED_TERMS: [(f64, &str); 8] = [
    (0.25, "XIXXIX"),
    (0.25, "XIXYIY"),
    (-0.25, "XIYXIY"),
    (0.25, "XIYYIX"),
    (0.25, "YIXXIY"),
    (-0.25, "YIXYIX"),
    (0.25, "YIYXIX"),
    (0.25, "YIYYIY"),
];

/// `e^{iθP} = cos θ·I + i sin θ·P` for an involutory string.
pub fn exp_string(p: &PauliString, theta: f64) -> DMatrix<Complex64> {
    let m = p.to_dense_matrix().unwrap();
    let dim = m.nrows();
    DMatrix::identity(dim, dim) * Complex64::new(theta.cos(), 0.0)
        + m * Complex64::new(0.0, theta.sin())
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series,
/// independent of the eigendecomposition used by the library.
pub fn expm_taylor(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let norm = a.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let dim = a.nrows();
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn sweep() -> [f64; 4] {
    [0.5e-6, 0.5e-2, 0.1, 0.5]
}
