//! Invariant suite: commutation, circuit-vs-oracle, closed-form dynamics,
//! serialization roundtrips and gate budgets.

use std::fmt::Write as _;

use serde::Serialize;
use squeezesim::bosonmap::BosonQubitMap;
use squeezesim::compiler::{
    compile_full_unitary, compile_pauli_exponential, diagonalize_commuting_set, export_qasm,
    parse_qasm, peephole_optimize, Circuit,
};
use squeezesim::exec::{map_indices, Execution};
use squeezesim::pauli::PauliSum;
use squeezesim::physics::concurrence;
use squeezesim::simulator::{
    circuit_unitary, exact_evolution_oracle, phase_aligned_distance, reduce_to_qutrits, run,
    Statevector,
};

use crate::config::Backend;
use crate::experiment::{closed_form_state, compile_body, ORACLE_TOLERANCE};

/// ε values checked when the configuration names none.
pub const DEFAULT_EPSILONS: [f64; 4] = [0.5e-6, 0.5e-2, 0.1, 0.5];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Informational lines never fail the suite.
    pub gated: bool,
    pub deviation: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

impl Check {
    fn bound(name: impl Into<String>, deviation: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            passed: deviation <= tolerance,
            gated: true,
            deviation: Some(deviation),
            tolerance: Some(tolerance),
            detail: String::new(),
        }
    }

    fn flag(name: impl Into<String>, passed: bool, detail: String) -> Check {
        Check {
            name: name.into(),
            passed,
            gated: true,
            deviation: None,
            tolerance: None,
            detail,
        }
    }

    fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Check {
        Check::flag(name, false, err.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.gated)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.gated && !c.passed)
            .collect()
    }

    pub fn find(&self, prefix: &str) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .collect()
    }

    pub fn max_unitary_deviation(&self) -> Option<f64> {
        self.find("unitary")
            .iter()
            .filter_map(|c| c.deviation)
            .reduce(f64::max)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match (c.gated, c.passed) {
                (false, _) => "INFO",
                (true, true) => "PASS",
                (true, false) => "FAIL",
            };
            let _ = write!(out, "{tag} {}", c.name);
            if let (Some(d), Some(t)) = (c.deviation, c.tolerance) {
                let _ = write!(out, "  deviation={d:.3e} tol={t:.0e}");
            }
            if !c.detail.is_empty() {
                let _ = write!(out, "  {}", c.detail);
            }
            out.push('\n');
        }
        if let Some(d) = self.max_unitary_deviation() {
            let _ = writeln!(out, "max unitary deviation {d:.3e}");
        }
        out
    }
}

fn static_checks(h: &PauliSum) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(Check::flag(
        "hermitian",
        h.is_hermitian(1e-14),
        format!("{} terms", h.len()),
    ));
    checks.push(match h.check_commuting() {
        Ok(()) => Check::flag(
            "commutation symplectic",
            true,
            format!("{} pairs", h.len() * (h.len().saturating_sub(1)) / 2),
        ),
        Err(e) => Check::failed("commutation symplectic", e),
    });
    let dense = h
        .terms()
        .iter()
        .map(|(_, p)| p.to_dense_matrix())
        .collect::<squeezesim::Result<Vec<_>>>();
    checks.push(match dense {
        Ok(ms) => {
            let mut worst: f64 = 0.0;
            for i in 0..ms.len() {
                for j in i + 1..ms.len() {
                    worst = worst.max((&ms[i] * &ms[j] - &ms[j] * &ms[i]).norm());
                }
            }
            Check::bound("commutation dense", worst, 1e-13)
        }
        Err(e) => Check::failed("commutation dense", e),
    });

    let mut budget_ok = true;
    let mut worst_single = 0;
    for (_, p) in h.terms() {
        match compile_pauli_exponential(p, 0.3) {
            Ok(c) => {
                let n = c.counts();
                budget_ok &= n.cnot == 2 * (p.weight() - 1) && n.single <= 9;
                worst_single = worst_single.max(n.single);
            }
            Err(_) => budget_ok = false,
        }
    }
    checks.push(Check::flag(
        "gate budget per term",
        budget_ok,
        format!("6 CNOTs each, at most {worst_single} single-qubit gates"),
    ));

    match compile_full_unitary(h, 0.3) {
        Ok(naive) => {
            let n = naive.counts();
            checks.push(Check::flag(
                "gate budget naive",
                n.cnot == 6 * h.len(),
                format!("{} CNOT, {} single", n.cnot, n.single),
            ));
            let p = peephole_optimize(&naive).counts();
            checks.push(Check::flag(
                "gate budget peephole",
                p.cnot < n.cnot,
                format!("{} CNOT, {} single", p.cnot, p.single),
            ));
            checks.push(roundtrips(&naive));
        }
        Err(e) => checks.push(Check::failed("gate budget naive", e)),
    }
    match diagonalize_commuting_set(h).and_then(|d| d.compile(0.3)) {
        Ok(c) => {
            let n = peephole_optimize(&c).counts();
            checks.push(Check {
                gated: false,
                ..Check::flag(
                    "gate budget diagonalize",
                    true,
                    format!(
                        "{} CNOT, {} single (reference transpiler: 9 CNOT, 30 single)",
                        n.cnot, n.single
                    ),
                )
            });
        }
        Err(e) => checks.push(Check::failed("gate budget diagonalize", e)),
    }
    checks
}

fn roundtrips(c: &Circuit) -> Check {
    let qasm = parse_qasm(&export_qasm(c)).map(|back| back == *c);
    let json = c
        .to_json()
        .and_then(|s| Circuit::from_json(&s))
        .map(|back| back == *c);
    match (qasm, json) {
        (Ok(q), Ok(j)) => Check::flag("roundtrip qasm+json", q && j, format!("qasm {q}, json {j}")),
        (Err(e), _) | (_, Err(e)) => Check::failed("roundtrip qasm+json", e),
    }
}

fn dynamic_checks(h: &PauliSum, map: &BosonQubitMap, eps: f64) -> Vec<Check> {
    let mut checks = Vec::new();
    let oracle = match exact_evolution_oracle(h, eps) {
        Ok(u) => u,
        Err(e) => return vec![Check::failed(format!("unitary oracle ε={eps:e}"), e)],
    };
    for backend in [Backend::Naive, Backend::Peephole, Backend::Diagonalize] {
        let name = format!("unitary {backend:?} ε={eps:e}").to_lowercase();
        checks.push(
            match compile_body(backend, h, eps).and_then(|c| Ok(circuit_unitary(&c)?)) {
                Ok(u) => Check::bound(name, phase_aligned_distance(&u, &oracle), ORACLE_TOLERANCE),
                Err(e) => Check::failed(name, e),
            },
        );
    }
    let state = (|| -> crate::Result<Statevector> {
        let c = crate::experiment::full_circuit(Backend::Naive, map, h, eps)?;
        Ok(run(&c, &Statevector::zero_state(map.total_qubits())?)?)
    })();
    let name = format!("theory state ε={eps:e}");
    match state.and_then(|s| Ok((closed_form_state(map, eps)?, s))) {
        Ok((want, got)) => {
            let dev = want
                .amplitudes()
                .iter()
                .zip(got.amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            checks.push(Check::bound(name, dev, 1e-10));
            let name = format!("concurrence ε={eps:e}");
            checks.push(match reduce_to_qutrits(&got, map) {
                Ok(r) => Check::bound(
                    name,
                    (concurrence(&r.state) - (4.0 * eps).sin()).abs(),
                    1e-9,
                ),
                Err(e) => Check::failed(name, e),
            });
        }
        Err(e) => checks.push(Check::failed(name, e)),
    }
    checks
}

/// Runs the suite on `h`; the ε-dependent checks run concurrently.
pub fn run_suite(h: &PauliSum, map: &BosonQubitMap, epsilons: &[f64]) -> VerificationReport {
    let mut checks = static_checks(h);
    let per_eps = map_indices(Execution::Parallel, epsilons.len(), |k| {
        dynamic_checks(h, map, epsilons[k])
    });
    checks.extend(per_eps.into_iter().flatten());
    VerificationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn mapped() -> (BosonQubitMap, PauliSum) {
        let map = BosonQubitMap::two_mode_pair();
        let h = map.map_squared_pair_hamiltonian().unwrap();
        (map, h)
    }

    #[test]
    fn default_suite_passes() {
        let (map, h) = mapped();
        let r = run_suite(&h, &map, &DEFAULT_EPSILONS);
        assert!(r.all_passed(), "{}", r.render());
        assert!(r.max_unitary_deviation().unwrap() < 1e-10);
    }

    #[test]
    fn flipped_term_is_caught_by_the_state_check() {
        let (map, h) = mapped();
        let terms: Vec<(Complex64, _)> = h
            .terms()
            .iter()
            .enumerate()
            .map(|(k, (c, p))| (if k == 2 { -c } else { *c }, p.clone()))
            .collect();
        let bad = PauliSum::from_terms(6, terms).unwrap();
        let r = run_suite(&bad, &map, &[0.1]);
        assert!(r.find("commutation").iter().all(|c| c.passed));
        assert!(r.find("unitary").iter().all(|c| c.passed));
        assert!(!r.find("theory state").iter().any(|c| c.passed));
        assert!(!r.all_passed());
    }

    #[test]
    fn empty_sweep_runs_static_checks_only() {
        let (map, h) = mapped();
        let r = run_suite(&h, &map, &[]);
        assert!(r.all_passed());
        assert!(r.find("unitary").is_empty());
        assert!(r.max_unitary_deviation().is_none());
    }
}
