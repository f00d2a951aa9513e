mod common;

use common::{hamiltonian, pair, sweep};
use num_complex::Complex64;
use squeezesim::compiler::{
    compile_full_unitary, diagonalize_commuting_set, peephole_optimize, prepare_ground_state,
    Circuit,
};
use squeezesim::physics::{concurrence, perturbative_target, second_order_evolution_target};
use squeezesim::simulator::*;

fn evolved(body: Circuit) -> Statevector {
    let mut c = prepare_ground_state(&pair()).unwrap();
    c.append(&body).unwrap();
    run(&c, &Statevector::zero_state(6).unwrap()).unwrap()
}

fn backends(eps: f64) -> Vec<(&'static str, Circuit)> {
    let h = hamiltonian();
    let naive = compile_full_unitary(&h, eps).unwrap();
    let diag = diagonalize_commuting_set(&h).unwrap().compile(eps).unwrap();
    vec![
        ("naive", naive.clone()),
        ("peephole", peephole_optimize(&naive)),
        ("diagonalize", peephole_optimize(&diag)),
    ]
}

#[test]
fn closed_form_two_level_rotation() {
    let map = pair();
    let g = map.encode(&[0, 0]).unwrap().index();
    let e = map.encode(&[2, 2]).unwrap().index();
    for eps in [0.5e-6, 0.5e-4, 0.5e-2, 0.1, 0.5] {
        for (name, body) in backends(eps) {
            let out = evolved(body);
            let mut want = vec![Complex64::new(0.0, 0.0); 64];
            want[g] = Complex64::new((2.0 * eps).cos(), 0.0);
            want[e] = Complex64::new(0.0, (2.0 * eps).sin());
            let dev: f64 = out
                .amplitudes()
                .iter()
                .zip(&want)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(dev < 1e-10, "{name} ε={eps}: {dev:e}");
            let p0 = p0_fidelity_proxy(&out, &map).unwrap();
            assert!((p0 - (2.0 * eps).cos().powi(2)).abs() < 1e-9);
            assert!((p0 + out.amplitude(e).norm_sqr() - 1.0).abs() < 1e-10);
            let red = reduce_to_qutrits(&out, &map).unwrap();
            assert!(red.leakage <= 1e-10);
            assert!((concurrence(&red.state) - (4.0 * eps).sin()).abs() < 1e-9);
        }
    }
}

#[test]
fn circuit_agrees_with_oracle_on_the_ground_state() {
    let map = pair();
    let ground = Statevector::basis_state(6, map.encode(&[0, 0]).unwrap().index()).unwrap();
    for eps in sweep() {
        let u = exact_evolution_oracle(&hamiltonian(), eps).unwrap();
        let from_oracle = u
            .column(
                ground
                    .amplitudes()
                    .iter()
                    .position(|a| a.re == 1.0)
                    .unwrap(),
            )
            .into_owned();
        let out = evolved(compile_full_unitary(&hamiltonian(), eps).unwrap());
        let dev: f64 = out
            .amplitudes()
            .iter()
            .zip(from_oracle.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(dev < 1e-10);
    }
}

#[test]
fn norm_is_preserved_after_every_gate() {
    let mut c = prepare_ground_state(&pair()).unwrap();
    c.append(&compile_full_unitary(&hamiltonian(), 0.7).unwrap())
        .unwrap();
    let mut sv = Statevector::zero_state(6).unwrap();
    for g in c.gates() {
        sv.apply_gate(g).unwrap();
        assert!((1.0 - sv.norm_sqr()).abs() <= 1e-12);
    }
}

#[test]
fn epsilon_zero_returns_the_initial_state() {
    let out = evolved(compile_full_unitary(&hamiltonian(), 0.0).unwrap());
    assert!((out.amplitude(0b110110).norm() - 1.0).abs() < 1e-12);
}

#[test]
fn reference_targets_at_small_epsilon() {
    let map = pair();
    let eps = 0.5e-2;
    let out = evolved(compile_full_unitary(&hamiltonian(), eps).unwrap());
    // the expansion of the evolution itself agrees to third order
    let second = embed_qutrits(&second_order_evolution_target(eps), &map).unwrap();
    assert!(1.0 - fidelity(&second, &out).unwrap() < 1e-9);
    // the perturbative target carries a different |22⟩ amplitude (−i√2ε
    // against +2iε), which costs about 3e-4 of overlap at this ε
    let target = perturbative_target(eps);
    let f = fidelity(&embed_qutrits(&target.state, &map).unwrap(), &out).unwrap();
    assert!((f - 0.999708).abs() < 1e-5, "{f}");
    let p0_target = target.state.ground_probability();
    assert!((p0_target - (1.0 - 5.0e-5)).abs() < 1e-7);
}
