mod common;

use common::{hamiltonian, pair, EXPECTED_TERMS};
use nalgebra::DMatrix;
use num_complex::Complex64;
use squeezesim::pauli::{sigma_minus, sigma_plus, PauliString};

#[test]
fn eight_terms_with_signs() {
    let h = hamiltonian();
    assert_eq!(h.len(), 8);
    for (want_c, letters) in EXPECTED_TERMS {
        let want = PauliString::from_letters(letters).unwrap();
        let (c, _) = h
            .terms()
            .iter()
            .find(|(_, p)| *p == want)
            .unwrap_or_else(|| panic!("missing {letters}"));
        assert!((c.re - want_c).abs() <= 1e-14, "{letters}: {c}");
        assert_eq!(c.im, 0.0);
    }
}

#[test]
fn rendering() {
    let h = hamiltonian();
    let text = h.to_string();
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().next().unwrap().ends_with("·X0 X2 X3 X5"));
}

#[test]
fn equals_raising_image_plus_adjoint() {
    // 2(σ₋⁰σ₊²σ₋³σ₊⁵ + h.c.) assembled from dense single-qubit ladders
    let n = 6;
    let dense = |s: squeezesim::pauli::PauliSum| s.to_dense_matrix().unwrap();
    let raise = dense(sigma_minus(n, 0).unwrap())
        * dense(sigma_plus(n, 2).unwrap())
        * dense(sigma_minus(n, 3).unwrap())
        * dense(sigma_plus(n, 5).unwrap())
        * Complex64::new(2.0, 0.0);
    let want = &raise + raise.adjoint();
    let got = hamiltonian().to_dense_matrix().unwrap();
    assert!((got - want).norm() < 1e-13);
}

#[test]
fn matches_creation_operators_on_the_codespace() {
    let map = pair();
    let a = map.map_creation(0).unwrap().to_dense_matrix().unwrap();
    let b = map.map_creation(1).unwrap().to_dense_matrix().unwrap();
    let raise = &a * &a * &b * &b;
    let brute = &raise + raise.adjoint();
    let h = hamiltonian().to_dense_matrix().unwrap();
    let codewords = map.codeword_indices();
    for &r in &codewords {
        for &c in &codewords {
            assert!((brute[(r, c)] - h[(r, c)]).norm() < 1e-14, "({r}, {c})");
        }
    }
    let g = map.encode(&[0, 0]).unwrap().index();
    let e = map.encode(&[2, 2]).unwrap().index();
    assert!((h[(e, g)] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
}

#[test]
fn squared_creation_matches_its_image_on_the_codespace() {
    let map = pair();
    for mode in 0..2 {
        let a = map.map_creation(mode).unwrap().to_dense_matrix().unwrap();
        let sq = &a * &a;
        let image = map
            .squared_creation_image(mode)
            .unwrap()
            .to_dense_matrix()
            .unwrap();
        for &r in &map.codeword_indices() {
            for &c in &map.codeword_indices() {
                assert!((sq[(r, c)] - image[(r, c)]).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn creation_amplitudes_on_codewords() {
    let map = pair();
    for mode in 0..2 {
        let a = map.map_creation(mode).unwrap().to_dense_matrix().unwrap();
        for s in map.fock_states() {
            let col = map.encode_fock(&s).unwrap().index();
            for t in map.fock_states() {
                let row = map.encode_fock(&t).unwrap().index();
                let (n, m) = (s.occupations(), t.occupations());
                let other = 1 - mode;
                let want = if m[mode] == n[mode] + 1 && m[other] == n[other] {
                    ((n[mode] + 1) as f64).sqrt()
                } else {
                    0.0
                };
                assert!((a[(row, col)].re - want).abs() < 1e-12 && a[(row, col)].im.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn all_pairs_commute_as_matrices() {
    let h = hamiltonian();
    let mats: Vec<DMatrix<Complex64>> = h
        .terms()
        .iter()
        .map(|(_, p)| p.to_dense_matrix().unwrap())
        .collect();
    let mut pairs = 0;
    for i in 0..8 {
        for j in (i + 1)..8 {
            let comm = &mats[i] * &mats[j] - &mats[j] * &mats[i];
            assert!(comm.norm() <= 1e-13);
            assert!(h.terms()[i].1.commutes(&h.terms()[j].1).unwrap());
            pairs += 1;
        }
    }
    assert_eq!(pairs, 28);
}

#[test]
fn dense_matrix_is_exactly_hermitian() {
    let m = hamiltonian().to_dense_matrix().unwrap();
    assert_eq!(m, m.adjoint());
}
