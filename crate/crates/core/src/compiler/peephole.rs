//! Local rewriting: inverse-pair cancellation and same-axis rotation merging,
//! optionally looking past gates that commute.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::circuit::{Axis, Circuit, Gate};

/// Rotations with `|θ mod 2π|` below this are dropped.
const DROP_TOLERANCE: f64 = 1e-13;
const CLIFFORD_TOLERANCE: f64 = 1e-15;

/// Cancels inverse pairs and merges rotations to a fixpoint, commuting gates
/// through each other where the rules allow: disjoint supports, a diagonal
/// gate through a CNOT control, an X-axis gate through a CNOT target, and
/// CNOTs that share only a control or only a target. Gate counts never
/// increase and the unitary, including the global phase, is unchanged.
pub fn peephole_optimize(c: &Circuit) -> Circuit {
    rewrite(c, true)
}

/// Like [`peephole_optimize`] but only combines gates that are adjacent on
/// their wires.
pub fn cancel_adjacent(c: &Circuit) -> Circuit {
    rewrite(c, false)
}

fn rewrite(c: &Circuit, commute: bool) -> Circuit {
    let (n, mut gates, mut phase) = c.clone().into_parts();
    gates.retain(|g| match g.as_rotation() {
        Some((_, t, p)) => {
            let (k, rest) = wrap(t);
            if rest.abs() < DROP_TOLERANCE {
                phase += p + k * PI;
                false
            } else {
                true
            }
        }
        None => true,
    });
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < gates.len() {
            let g = gates[i];
            let mut partner = None;
            for (j, h) in gates.iter().enumerate().skip(i + 1) {
                if !shares_qubit(&g, h) {
                    continue;
                }
                if combinable(&g, h) {
                    partner = Some(j);
                    break;
                }
                if commute && commutes(&g, h) {
                    continue;
                }
                break;
            }
            let Some(j) = partner else {
                i += 1;
                continue;
            };
            // g commutes with everything up to j, so it can be moved there.
            match combine(&g, &gates[j]) {
                (Some(merged), p) => {
                    gates[j] = merged;
                    phase += p;
                }
                (None, p) => {
                    gates.remove(j);
                    phase += p;
                }
            }
            gates.remove(i);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Circuit::from_gates(n, gates, phase).expect("rewrites keep qubit indices")
}

fn shares_qubit(a: &Gate, b: &Gate) -> bool {
    a.qubits().iter().any(|&q| b.acts_on(q))
}

fn combinable(a: &Gate, b: &Gate) -> bool {
    match (a, b) {
        (Gate::Cnot { .. }, Gate::Cnot { .. }) => a == b,
        (Gate::Cnot { .. }, _) | (_, Gate::Cnot { .. }) => false,
        _ => a.axis() == b.axis(),
    }
}

/// Whether two gates that share a qubit commute under the supported rules.
fn commutes(a: &Gate, b: &Gate) -> bool {
    match (*a, *b) {
        (
            Gate::Cnot {
                control: c1,
                target: t1,
            },
            Gate::Cnot {
                control: c2,
                target: t2,
            },
        ) => c1 != t2 && t1 != c2,
        (Gate::Cnot { control, target }, s) | (s, Gate::Cnot { control, target }) => {
            let q = s.qubits()[0];
            match s.axis() {
                Some(Axis::Z) => q == control,
                Some(Axis::X) => q == target,
                None => false,
            }
        }
        _ => a.axis() == b.axis(),
    }
}

/// Product of two combinable gates: the surviving gate (if any) and the
/// global phase shed.
fn combine(a: &Gate, b: &Gate) -> (Option<Gate>, f64) {
    if a.is_two_qubit() {
        return (None, 0.0);
    }
    let q = a.qubits()[0];
    let (axis, t1, p1) = a.as_rotation().expect("single-qubit gate");
    let (_, t2, p2) = b.as_rotation().expect("single-qubit gate");
    let (k, theta) = wrap(t1 + t2);
    // e^{iφ}·R(θ + 2πk) = e^{i(φ + kπ)}·R(θ)
    let phase = p1 + p2 + k * PI;
    if theta.abs() < DROP_TOLERANCE {
        return (None, phase);
    }
    let both_rz = matches!((a, b), (Gate::Rz(..), Gate::Rz(..)));
    match axis {
        Axis::X => (Some(Gate::Rx(q, theta)), phase),
        Axis::Z if both_rz => (Some(Gate::Rz(q, theta)), phase),
        Axis::Z => {
            // R_Z(θ) = e^{−iθ/2}·U1(θ)
            let phase = phase - theta / 2.0;
            let g = if (theta - FRAC_PI_2).abs() < CLIFFORD_TOLERANCE {
                Gate::S(q)
            } else if (theta + FRAC_PI_2).abs() < CLIFFORD_TOLERANCE {
                Gate::Sdg(q)
            } else {
                Gate::U1(q, theta)
            };
            (Some(g), phase)
        }
    }
}

/// Splits `t = θ + 2πk` with `θ ∈ [−π, π]`.
fn wrap(t: f64) -> (f64, f64) {
    let k = (t / TAU).round();
    (k, t - k * TAU)
}
