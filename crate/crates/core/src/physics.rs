//! Coupling strength, reference states and entanglement of the
//! two-oscillator system.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Newton constant, m³·kg⁻¹·s⁻² (CODATA 2018).
pub const G_NEWTON: f64 = 6.67430e-11;
/// Reduced Planck constant, J·s (CODATA 2018).
pub const HBAR: f64 = 1.054571817e-34;
/// Speed of light in vacuum, m/s (exact).
pub const C_LIGHT: f64 = 299_792_458.0;

/// Order of magnitude quoted in the literature for `ω = 10²¹ Hz`, `d = 10⁻⁴ m`.
pub const QUOTED_COUPLING_HZ: f64 = 1e-31;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    /// Oscillator angular frequency, Hz.
    pub omega_m: f64,
    /// Separation, m.
    pub distance: f64,
    /// Evolution time, s.
    pub time: f64,
}

impl PhysicalParams {
    pub fn new(omega_m: f64, distance: f64, time: f64) -> Result<Self> {
        let p = PhysicalParams {
            omega_m,
            distance,
            time,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_m.is_finite() && self.omega_m > 0.0) {
            return Err(Error::InvalidParams(format!(
                "omega_m must be positive, got {}",
                self.omega_m
            )));
        }
        if !(self.distance.is_finite() && self.distance > 0.0) {
            return Err(Error::InvalidParams(format!(
                "distance must be positive, got {}",
                self.distance
            )));
        }
        if !(self.time.is_finite() && self.time >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "time must be non-negative, got {}",
                self.time
            )));
        }
        Ok(())
    }

    pub fn coupling(&self) -> Result<f64> {
        coupling_g(self.omega_m, self.distance)
    }

    pub fn epsilon(&self) -> Result<f64> {
        Ok(epsilon(self.coupling()?, self.time))
    }
}

/// `g = 9·G·ħ·ω² / (16·c⁴·d)` in Hz.
pub fn coupling_g(omega_m: f64, distance: f64) -> Result<f64> {
    PhysicalParams {
        omega_m,
        distance,
        time: 0.0,
    }
    .validate()?;
    let c2 = C_LIGHT * C_LIGHT;
    Ok(9.0 * G_NEWTON * HBAR * omega_m * omega_m / (16.0 * c2 * c2 * distance))
}

/// Dimensionless evolution parameter `ε = g·t`.
pub fn epsilon(g: f64, t: f64) -> f64 {
    g * t
}

/// Nine amplitudes indexed by `(n_A, n_B) ∈ {0,1,2}²`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQutritState {
    amps: [Complex64; 9],
}

impl TwoQutritState {
    pub fn from_amplitudes(amps: [Complex64; 9]) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("state norm² = {norm2}, expected 1")));
        }
        Ok(TwoQutritState { amps })
    }

    /// Normalizes `amps`; fails on the zero vector.
    pub fn normalized(amps: [Complex64; 9]) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Ok(TwoQutritState {
            amps: amps.map(|a| a / norm),
        })
    }

    /// `α|00⟩ + β|22⟩`, renormalized.
    pub fn pair_superposition(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let mut amps = [Complex64::new(0.0, 0.0); 9];
        amps[0] = alpha;
        amps[8] = beta;
        Self::normalized(amps)
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        self.amps[3 * n_a + n_b]
    }

    pub fn amplitudes(&self) -> &[Complex64; 9] {
        &self.amps
    }

    /// `|⟨00|ψ⟩|²`.
    pub fn ground_probability(&self) -> f64 {
        self.amps[0].norm_sqr()
    }

    /// Reduced density matrix of mode A, row-major 3×3.
    pub fn reduced_density_a(&self) -> [[Complex64; 3]; 3] {
        let mut rho = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (i, row) in rho.iter_mut().enumerate() {
            for (j, el) in row.iter_mut().enumerate() {
                *el = (0..3)
                    .map(|k| self.amplitude(i, k) * self.amplitude(j, k).conj())
                    .sum();
            }
        }
        rho
    }
}

/// Normalized `(|00⟩ + r|22⟩)` with `r = g/(2ω)`.
pub fn theory_state(g: f64, omega_m: f64) -> Result<TwoQutritState> {
    if omega_m.is_nan() || omega_m <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "omega_m must be positive, got {omega_m}"
        )));
    }
    let r = g / (2.0 * omega_m);
    TwoQutritState::pair_superposition(Complex64::new(1.0, 0.0), Complex64::new(r, 0.0))
}

/// Second-order perturbative target `(1−ε²)|00⟩ − i√2·ε|22⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbativeTarget {
    /// Amplitudes as printed, before normalization: `(|00⟩, |22⟩)`.
    pub raw: (Complex64, Complex64),
    /// Unit-norm version used for fidelities.
    pub state: TwoQutritState,
}

pub fn perturbative_target(eps: f64) -> PerturbativeTarget {
    let raw = (
        Complex64::new(1.0 - eps * eps, 0.0),
        Complex64::new(0.0, -(2f64.sqrt()) * eps),
    );
    PerturbativeTarget {
        raw,
        state: TwoQutritState::pair_superposition(raw.0, raw.1)
            .expect("ground amplitude dominates for small ε"),
    }
}

/// Second-order expansion of `exp(iε(a†²b†² + a²b²))|00⟩` under the
/// truncated mapping: `(1 − 2ε²)|00⟩ + 2iε|22⟩`, renormalized.
pub fn second_order_evolution_target(eps: f64) -> TwoQutritState {
    TwoQutritState::pair_superposition(
        Complex64::new(1.0 - 2.0 * eps * eps, 0.0),
        Complex64::new(0.0, 2.0 * eps),
    )
    .expect("ground amplitude dominates for small ε")
}

/// I-concurrence `√(2(1 − Tr ρ_A²))`, evaluated as
/// `2·√(Σ_{i<k, j<l} |ψ_ij ψ_kl − ψ_il ψ_kj|²)` so that weakly entangled
/// states do not cancel to zero.
pub fn concurrence(state: &TwoQutritState) -> f64 {
    let psi = |a: usize, b: usize| state.amplitude(a, b);
    let mut sum = 0.0;
    for i in 0..3 {
        for k in i + 1..3 {
            for j in 0..3 {
                for l in j + 1..3 {
                    sum += (psi(i, j) * psi(k, l) - psi(i, l) * psi(k, j)).norm_sqr();
                }
            }
        }
    }
    2.0 * sum.sqrt()
}
