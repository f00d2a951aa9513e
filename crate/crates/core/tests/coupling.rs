use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, ToPrimitive};
use squeezesim::physics::{coupling_g, PhysicalParams, QUOTED_COUPLING_HZ};

fn decimal(mantissa: i64, exp10: i32) -> BigRational {
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut r = BigRational::from_integer(BigInt::from(mantissa));
    for _ in 0..exp10.abs() {
        r = if exp10 > 0 { r * &ten } else { r / &ten };
    }
    r
}

/// `9Għω²/(16c⁴d)` in exact rational arithmetic on the binary values of the
/// inputs and the decimal values of the constants.
fn coupling_exact(omega: f64, d: f64) -> f64 {
    let g = decimal(667430, -16);
    let hbar = decimal(1054571817, -43);
    let c = BigRational::from_integer(BigInt::from(299_792_458));
    let omega = BigRational::from_f64(omega).unwrap();
    let d = BigRational::from_f64(d).unwrap();
    let num = BigRational::from_integer(BigInt::from(9)) * g * hbar * &omega * &omega;
    let c2 = &c * &c;
    let den = BigRational::from_integer(BigInt::from(16)) * &c2 * &c2 * d;
    (num / den).to_f64().unwrap()
}

#[test]
fn matches_exact_rational_evaluation() {
    for (omega, d) in [
        (1e21, 1e-4),
        (3e20, 2.5e-4),
        (7.25e19, 1e-6),
        (1.0, 1.0),
        (2e22, 3e-3),
    ] {
        let got = coupling_g(omega, d).unwrap();
        let want = coupling_exact(omega, d);
        assert!(
            ((got - want) / want).abs() < 1e-12,
            "ω={omega} d={d}: {got:e} vs {want:e}"
        );
    }
}

#[test]
fn reference_point_and_quoted_figure() {
    let g = coupling_g(1e21, 1e-4).unwrap();
    assert!((g - 4.902e-33).abs() / 4.902e-33 < 1e-3);
    // the commonly quoted 1e-31 Hz is about twenty times larger
    let ratio = QUOTED_COUPLING_HZ / g;
    assert!(ratio > 20.0 && ratio < 21.0, "{ratio}");
}

#[test]
fn exact_scaling_laws() {
    for (omega, d) in [(1e21, 1e-4), (3.3e19, 7e-5)] {
        let g = coupling_g(omega, d).unwrap();
        assert_eq!(coupling_g(2.0 * omega, d).unwrap(), 4.0 * g);
        assert_eq!(coupling_g(omega, 2.0 * d).unwrap(), g / 2.0);
    }
}

#[test]
fn epsilon_from_physical_params() {
    let p = PhysicalParams::new(1e21, 1e-4, 1e25).unwrap();
    let eps = p.epsilon().unwrap();
    assert!((eps - coupling_exact(1e21, 1e-4) * 1e25).abs() / eps < 1e-12);
}
