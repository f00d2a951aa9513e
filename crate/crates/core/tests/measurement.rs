mod common;

use common::{hamiltonian, pair};
use squeezesim::compiler::{
    compile_full_unitary, diagonalize_commuting_set, peephole_optimize, prepare_ground_state,
    Circuit,
};
use squeezesim::exec::Execution;
use squeezesim::measurement::*;
use squeezesim::simulator::{p0_fidelity_proxy, run, Statevector};

fn ground() -> Statevector {
    Statevector::basis_state(6, pair().encode(&[0, 0]).unwrap().index()).unwrap()
}

fn evolved(eps: f64) -> Statevector {
    let mut c = prepare_ground_state(&pair()).unwrap();
    c.append(&compile_full_unitary(&hamiltonian(), eps).unwrap())
        .unwrap();
    run(&c, &Statevector::zero_state(6).unwrap()).unwrap()
}

fn within(value: f64, target: f64, sigma: f64, k: f64) -> bool {
    (value - target).abs() <= k * sigma
}

#[test]
fn independent_bit_flip_product() {
    let shots = 200_000;
    let noise = ReadoutNoiseModel::uniform(6, 0.01).unwrap();
    let t = sample(&ground(), shots, &noise, 11).unwrap();
    let frac = t.get(&"011011".parse().unwrap()) as f64 / shots as f64;
    let p = 0.99f64.powi(6);
    assert!((p - 0.9415).abs() < 1e-4);
    assert!(
        within(frac, p, (p * (1.0 - p) / shots as f64).sqrt(), 3.0),
        "{frac}"
    );
}

#[test]
fn mitigation_error_shrinks_with_shots() {
    let noise = ReadoutNoiseModel::uniform(6, REFERENCE_READOUT_ERROR).unwrap();
    let state = evolved(0.3);
    let g = "011011".parse().unwrap();
    let truth = state.probabilities()[0b110110];
    let mut errors = Vec::new();
    for (k, shots) in [1_000u64, 10_000, 100_000].into_iter().enumerate() {
        let t = sample(&state, shots, &noise, 100 + k as u64).unwrap();
        let d = mitigate_readout(&t, &noise, false).unwrap();
        let sum: f64 = d.values().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        let se = d.std_error(&g);
        assert!(within(d.get(&g), truth, se, 3.0), "shots={shots}");
        errors.push(se);
    }
    // roughly a factor √10 per decade
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 2.5 && ratio < 4.0, "{ratio}");
    }
}

#[test]
fn mitigated_estimate_agrees_with_binomial_error_at_reference_point() {
    let noise = ReadoutNoiseModel::uniform(6, 0.01).unwrap();
    let shots = 100_000;
    let t = sample(&ground(), shots, &noise, 5).unwrap();
    let d = mitigate_readout(&t, &noise, false).unwrap();
    let g = "011011".parse().unwrap();
    assert!(within(
        d.get(&g),
        1.0,
        d.std_error(&g).max(1.0 / shots as f64),
        3.0
    ));
}

#[test]
fn readout_only_discard_fraction() {
    let map = pair();
    let p = 0.01;
    let noise = ReadoutNoiseModel::uniform(6, p).unwrap();
    let shots = 100_000;
    let t = sample(&ground(), shots, &noise, 21).unwrap();
    let (_, discard) = postselect_counts(&t, &map).unwrap();
    let want = 1.0 - (1.0 - p).powi(6);
    assert!((want - 5.85e-2).abs() < 1e-4);
    let sigma = (want * (1.0 - want) / shots as f64).sqrt();
    assert!(within(discard, want, sigma, 3.0), "{discard}");
}

#[test]
fn noiseless_sampling_has_no_discards_and_converges() {
    let map = pair();
    let clean = ReadoutNoiseModel::noiseless(6);
    for (k, eps) in [0.5e-6, 0.5e-4, 0.5e-2, 0.1].into_iter().enumerate() {
        let state = evolved(eps);
        let t = sample(&state, 100_000, &clean, 7 + k as u64).unwrap();
        let (kept, discard) = postselect_counts(&t, &map).unwrap();
        assert_eq!(discard, 0.0);
        let (p0, se) = estimate_p0(&kept, &map).unwrap();
        let exact = p0_fidelity_proxy(&state, &map).unwrap();
        assert!((exact - (2.0 * eps).cos().powi(2)).abs() < 1e-12);
        // with P₀ = 1 − 1e-12 every shot lands on the ground codeword
        assert!(
            within(p0, exact, se.max(1.0 / 100_000.0), 3.0),
            "ε={eps}: {p0} vs {exact}"
        );
    }
}

#[test]
fn postselection_commutes_with_renormalization() {
    let map = pair();
    let noise = ReadoutNoiseModel::uniform(6, 0.03).unwrap();
    let t = sample(&evolved(0.4), 20_000, &noise, 9).unwrap();
    let d = QuasiDistribution::from_counts(&t).unwrap();
    let a = postselect(&d, &map).unwrap();
    let (kept, _) = postselect_counts(&t, &map).unwrap();
    let (p0, _) = estimate_p0(&kept, &map).unwrap();
    assert!((a.p0 - p0).abs() < 1e-12);
    assert!((a.p0 + a.p22 - 1.0).abs() < 1e-12);
}

#[test]
fn zero_gate_noise_reproduces_the_noiseless_distribution() {
    let map = pair();
    let mut c = prepare_ground_state(&map).unwrap();
    c.append(&compile_full_unitary(&hamiltonian(), 0.3).unwrap())
        .unwrap();
    let zero = Statevector::zero_state(6).unwrap();
    let t = sample_noisy(
        &c,
        &zero,
        &GateNoiseModel::none(),
        &ReadoutNoiseModel::noiseless(6),
        50_000,
        1_000,
        4,
        Execution::Parallel,
    )
    .unwrap();
    let (kept, discard) = postselect_counts(&t, &map).unwrap();
    assert_eq!(discard, 0.0);
    let (p0, se) = estimate_p0(&kept, &map).unwrap();
    assert!(within(p0, 0.6f64.cos().powi(2), se, 3.0));
}

fn optimized(eps: f64) -> Circuit {
    let map = pair();
    let mut c = prepare_ground_state(&map).unwrap();
    let d = diagonalize_commuting_set(&hamiltonian()).unwrap();
    c.append(&peephole_optimize(&d.compile(eps).unwrap()))
        .unwrap();
    c
}

#[test]
fn reference_device_noise_pipeline() {
    let map = pair();
    let readout = ReadoutNoiseModel::uniform(6, REFERENCE_READOUT_ERROR).unwrap();
    let zero = Statevector::zero_state(6).unwrap();
    let t = sample_noisy(
        &optimized(0.5e-2),
        &zero,
        &GateNoiseModel::reference_device(),
        &readout,
        100_000,
        100_000,
        17,
        Execution::Parallel,
    )
    .unwrap();
    let raw = estimate(
        &t,
        &map,
        &readout,
        &PipelineOptions {
            mitigate: false,
            postselect: false,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(raw.p0 < 0.95 && raw.p0 > 0.7, "raw {}", raw.p0);
    let full = estimate(&t, &map, &readout, &PipelineOptions::default()).unwrap();
    assert!(full.p0 >= 0.9, "{full:?}");
    assert!(full.discard_fraction > 0.03 && full.discard_fraction < 0.3);
    let swapped = estimate(
        &t,
        &map,
        &readout,
        &PipelineOptions {
            order: PipelineOrder::PostselectThenMitigate,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(swapped.p0 >= 0.9);
}

#[test]
fn clip_mode_renormalizes() {
    let noise = ReadoutNoiseModel::uniform(6, 0.05).unwrap();
    let t = sample(&ground(), 2_000, &noise, 3).unwrap();
    let kept = mitigate_readout(&t, &noise, false).unwrap();
    let clipped = mitigate_readout(&t, &noise, true).unwrap();
    let r = kept.report.unwrap();
    assert!(r.negativity_mass > 0.0);
    assert!(!r.clipped);
    assert!(clipped.report.unwrap().clipped);
    assert!(clipped.values().iter().all(|v| *v >= 0.0));
    assert!((clipped.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
}
