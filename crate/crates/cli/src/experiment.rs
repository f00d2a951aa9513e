//! One run: compile, check against the oracle, simulate, and optionally
//! sample with noise, for every ε of the configuration.

use num_complex::Complex64;
use serde::Serialize;
use squeezesim::bosonmap::BosonQubitMap;
use squeezesim::compiler::{
    compile_full_unitary, diagonalize_commuting_set, peephole_optimize, prepare_ground_state,
    Circuit,
};
use squeezesim::exec::{map_indices, Execution};
use squeezesim::measurement::{
    estimate, postselect_counts, sample_noisy, CountsTable, GateNoiseModel, ReadoutNoiseModel,
};
use squeezesim::pauli::PauliSum;
use squeezesim::physics::{
    concurrence, coupling_g, epsilon, perturbative_target, theory_state, QUOTED_COUPLING_HZ,
};
use squeezesim::simulator::{
    circuit_unitary, codeword_probabilities_csv, embed_qutrits, exact_evolution_oracle, fidelity,
    p0_fidelity_proxy, phase_aligned_distance, reduce_to_qutrits, run, Statevector,
};

use crate::config::{Backend, EpsilonSource, ExperimentConfig};
use crate::{CliError, Result};

/// Largest accepted distance between a compiled circuit and the oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Noiseless,
    Noisy,
}

/// The evolution circuit for one ε, without state preparation.
pub fn compile_body(backend: Backend, h: &PauliSum, eps: f64) -> Result<Circuit> {
    Ok(match backend {
        Backend::Naive => compile_full_unitary(h, eps)?,
        Backend::Peephole => peephole_optimize(&compile_full_unitary(h, eps)?),
        Backend::Diagonalize => peephole_optimize(&diagonalize_commuting_set(h)?.compile(eps)?),
    })
}

/// Ground-state preparation followed by the evolution circuit.
pub fn full_circuit(
    backend: Backend,
    map: &BosonQubitMap,
    h: &PauliSum,
    eps: f64,
) -> Result<Circuit> {
    let mut c = prepare_ground_state(map)?;
    c.append(&compile_body(backend, h, eps)?)?;
    Ok(c)
}

/// One row of the per-ε table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub epsilon: f64,
    pub cnot: usize,
    pub single: usize,
    /// Phase-aligned Frobenius distance to `exp(iεH)`.
    pub oracle_deviation: f64,
    pub p0_exact: f64,
    pub concurrence: f64,
    pub leakage: f64,
    /// Overlap with the normalized `(1−ε²)|00⟩ − i√2ε|22⟩` reference.
    pub fidelity_perturbative: f64,
    pub p0_estimate: Option<f64>,
    pub p0_std_error: Option<f64>,
    /// Whether the estimate left `[0, 1]` (quasi-probabilities) and was clamped.
    pub p0_clamped: Option<bool>,
    /// Fraction of raw shots outside the two codewords.
    pub raw_discard_fraction: Option<f64>,
    /// Same fraction after the configured pipeline (mitigated when enabled).
    pub discard_fraction: Option<f64>,
    pub discard_std_error: Option<f64>,
    pub negativity_mass: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct PointResult {
    pub record: PointRecord,
    pub circuit: Circuit,
    pub counts: Option<CountsTable>,
    pub codeword_csv: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysicsReport {
    pub omega_m: f64,
    pub distance: f64,
    pub time: Option<f64>,
    pub coupling_hz: f64,
    pub quoted_coupling_hz: f64,
    pub quoted_over_computed: f64,
    pub epsilon: Option<f64>,
    /// `|00⟩` and `|22⟩` amplitudes of the first-order theory state.
    pub theory_amplitudes: [f64; 2],
    pub theory_concurrence: f64,
    pub warning: String,
}

pub fn physics_report(omega_m: f64, distance: f64, time: Option<f64>) -> Result<PhysicsReport> {
    let g = coupling_g(omega_m, distance)?;
    if let Some(t) = time {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CliError::Config(format!(
                "time must be non-negative, got {t}"
            )));
        }
    }
    let theory = theory_state(g, omega_m)?;
    let ratio = QUOTED_COUPLING_HZ / g;
    Ok(PhysicsReport {
        omega_m,
        distance,
        time,
        coupling_hz: g,
        quoted_coupling_hz: QUOTED_COUPLING_HZ,
        quoted_over_computed: ratio,
        epsilon: time.map(|t| epsilon(g, t)),
        theory_amplitudes: [theory.amplitude(0, 0).re, theory.amplitude(2, 2).re],
        theory_concurrence: concurrence(&theory),
        warning: format!(
            "computed g = {g:.4e} Hz; the commonly quoted value for these parameters is \
             {QUOTED_COUPLING_HZ:e} Hz, a factor {ratio:.1} larger. The computed value is used."
        ),
    })
}

#[derive(Debug, Clone)]
pub struct RunBundle {
    pub config: ExperimentConfig,
    pub mode: Mode,
    pub physics: Option<PhysicsReport>,
    pub points: Vec<PointResult>,
}

impl RunBundle {
    pub fn records(&self) -> Vec<&PointRecord> {
        self.points.iter().map(|p| &p.record).collect()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.physics.iter().map(|p| p.warning.clone()).collect()
    }
}

/// Seed for sweep point `k`, decorrelated from its neighbours.
pub fn point_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn clamp_unit(x: f64) -> (f64, bool) {
    let c = x.clamp(0.0, 1.0);
    (c, c != x)
}

pub fn run_point(
    cfg: &ExperimentConfig,
    mode: Mode,
    map: &BosonQubitMap,
    h: &PauliSum,
    k: usize,
    eps: f64,
) -> Result<PointResult> {
    let body = compile_body(cfg.backend, h, eps)?;
    let deviation =
        phase_aligned_distance(&circuit_unitary(&body)?, &exact_evolution_oracle(h, eps)?);
    if deviation.is_nan() || deviation > ORACLE_TOLERANCE {
        return Err(CliError::Verification(format!(
            "{:?} circuit at ε = {eps} deviates from the oracle by {deviation:e}",
            cfg.backend
        )));
    }
    let mut circuit = prepare_ground_state(map)?;
    circuit.append(&body)?;
    let n = map.total_qubits();
    let zero = Statevector::zero_state(n)?;
    let state = run(&circuit, &zero)?;
    let reduced = reduce_to_qutrits(&state, map)?;
    let reference = embed_qutrits(&perturbative_target(eps).state, map)?;
    let counts_body = body.counts();
    let mut record = PointRecord {
        index: k,
        epsilon: eps,
        cnot: counts_body.cnot,
        single: counts_body.single,
        oracle_deviation: deviation,
        p0_exact: p0_fidelity_proxy(&state, map)?,
        concurrence: concurrence(&reduced.state),
        leakage: reduced.leakage,
        fidelity_perturbative: fidelity(&reference, &state)?,
        p0_estimate: None,
        p0_std_error: None,
        p0_clamped: None,
        raw_discard_fraction: None,
        discard_fraction: None,
        discard_std_error: None,
        negativity_mass: None,
    };
    let mut counts = None;
    if mode == Mode::Noisy {
        let degenerate = |e: squeezesim::Error| match e {
            squeezesim::Error::DegeneratePostSelection => CliError::DegeneratePostSelection(eps),
            other => other.into(),
        };
        let readout = ReadoutNoiseModel::uniform(n, cfg.readout_error)?;
        let gates = GateNoiseModel::new(cfg.gate_error_1q, cfg.gate_error_2q)?;
        let table = sample_noisy(
            &circuit,
            &zero,
            &gates,
            &readout,
            cfg.shots,
            cfg.trajectories(),
            point_seed(cfg.seed, k),
            Execution::Parallel,
        )?;
        let (_, raw_discard) = postselect_counts(&table, map).map_err(degenerate)?;
        let est = estimate(&table, map, &readout, &cfg.pipeline()).map_err(degenerate)?;
        let (p0, clamped) = clamp_unit(est.p0);
        record.p0_estimate = Some(p0);
        record.p0_std_error = Some(est.p0_std_error);
        record.p0_clamped = Some(clamped);
        record.raw_discard_fraction = Some(raw_discard);
        record.discard_fraction = Some(clamp_unit(est.discard_fraction).0);
        record.discard_std_error = Some(est.discard_std_error);
        record.negativity_mass = est.mitigation.map(|m| m.negativity_mass);
        counts = Some(table);
    }
    Ok(PointResult {
        record,
        codeword_csv: codeword_probabilities_csv(&state, map)?,
        circuit,
        counts,
    })
}

/// Runs every sweep point concurrently; results keep sweep order.
pub fn run_experiment(cfg: &ExperimentConfig, mode: Mode) -> Result<RunBundle> {
    run_experiment_with(cfg, mode, None)
}

/// As [`run_experiment`], with an explicit Hamiltonian (for fixtures).
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    mode: Mode,
    h: Option<&PauliSum>,
) -> Result<RunBundle> {
    let physics = match cfg.validate()? {
        EpsilonSource::Physical(p) => Some(physics_report(p.omega_m, p.distance, Some(p.time))?),
        _ => None,
    };
    let epsilons = cfg.epsilons()?;
    let map = BosonQubitMap::two_mode_pair();
    let owned;
    let h = match h {
        Some(h) => h,
        None => {
            owned = map.map_squared_pair_hamiltonian()?;
            &owned
        }
    };
    let points = map_indices(Execution::Parallel, epsilons.len(), |k| {
        run_point(cfg, mode, &map, h, k, epsilons[k])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(RunBundle {
        config: cfg.clone(),
        mode,
        physics,
        points,
    })
}

/// Closed-form output `cos2ε|00⟩ + i·sin2ε|22⟩` on the encoded register.
pub fn closed_form_state(map: &BosonQubitMap, eps: f64) -> Result<Statevector> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << map.total_qubits()];
    amps[map.encode(&[0, 0])?.index()] = Complex64::new((2.0 * eps).cos(), 0.0);
    amps[map.encode(&[2, 2])?.index()] = Complex64::new(0.0, (2.0 * eps).sin());
    Ok(Statevector::from_amplitudes(amps)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(eps: f64) -> ExperimentConfig {
        ExperimentConfig {
            epsilon: Some(eps),
            shots: 2_000,
            ..Default::default()
        }
    }

    #[test]
    fn noiseless_point_matches_closed_form() {
        let b = run_experiment(&cfg(0.3), Mode::Noiseless).unwrap();
        let r = &b.points[0].record;
        assert!((r.p0_exact - 0.6f64.cos().powi(2)).abs() < 1e-12);
        assert!((r.concurrence - 1.2f64.sin()).abs() < 1e-9);
        assert!(r.p0_estimate.is_none());
        assert!(r.oracle_deviation < ORACLE_TOLERANCE);
    }

    #[test]
    fn every_backend_is_exact() {
        for backend in [Backend::Naive, Backend::Peephole, Backend::Diagonalize] {
            let c = ExperimentConfig {
                backend,
                ..cfg(0.5)
            };
            let b = run_experiment(&c, Mode::Noiseless).unwrap();
            assert!(b.points[0].record.oracle_deviation < ORACLE_TOLERANCE);
        }
    }

    #[test]
    fn noisy_fields_stay_in_range() {
        let b = run_experiment(&cfg(0.5e-2), Mode::Noisy).unwrap();
        let r = &b.points[0].record;
        let p0 = r.p0_estimate.unwrap();
        assert!((0.0..=1.0).contains(&p0));
        let d = r.discard_fraction.unwrap();
        assert!((0.0..=1.0).contains(&d));
        assert!(r.raw_discard_fraction.unwrap() > 0.0);
        assert_eq!(b.points[0].counts.as_ref().unwrap().shots(), 2_000);
    }

    #[test]
    fn physical_mode_surfaces_coupling() {
        let g = coupling_g(1e21, 1e-4).unwrap();
        let c = ExperimentConfig {
            omega: Some(1e21),
            distance: Some(1e-4),
            time: Some(1e-6 / g),
            ..Default::default()
        };
        let b = run_experiment(&c, Mode::Noiseless).unwrap();
        let p = b.physics.as_ref().unwrap();
        assert!((p.coupling_hz / 4.902e-33 - 1.0).abs() < 1e-3);
        assert!((b.points[0].record.epsilon - 1e-6).abs() < 1e-18);
        assert!(b.warnings()[0].contains("1e-31"));
    }

    #[test]
    fn point_seeds_differ() {
        assert_ne!(point_seed(0, 0), point_seed(0, 1));
        assert_eq!(point_seed(5, 3), point_seed(5, 3));
    }
}
