//! Simultaneous diagonalization of a commuting Pauli set by a Clifford
//! prefix, followed by a parity-network synthesis of the diagonal rotations.

use serde::Serialize;

use super::chain::check_commuting_hermitian;
use super::circuit::{Circuit, Gate};
use super::clifford::{append_ops, conjugate_all, inverse_ops, CliffordOp};
use crate::error::Result;
use crate::pauli::{Pauli, PauliString, PauliSum};

/// One diagonal term `coefficient·Z_support` of `V·H·V†`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalTerm {
    pub support: Vec<usize>,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalizationReport {
    /// `(original, conjugated)` labels per term, in canonical order.
    pub images: Vec<(String, String)>,
    /// Every conjugated term commutes with every single-qubit `Z`.
    pub all_diagonal: bool,
    pub prefix_cnots: usize,
}

#[derive(Debug, Clone)]
pub struct DiagonalizationResult {
    ops: Vec<CliffordOp>,
    /// Lowered `V`, applied first.
    pub prefix: Circuit,
    pub rotations: Vec<DiagonalTerm>,
    pub report: DiagonalizationReport,
}

impl DiagonalizationResult {
    pub fn clifford_ops(&self) -> &[CliffordOp] {
        &self.ops
    }

    /// `V†·Π exp(iε·c_k·Z_k)·V`.
    pub fn compile(&self, eps: f64) -> Result<Circuit> {
        let n = self.prefix.n_qubits();
        let mut c = self.prefix.clone();
        c.append(&synthesize_diagonal(n, &self.rotations, eps)?)?;
        append_ops(&mut c, &inverse_ops(&self.ops))?;
        Ok(c)
    }
}

/// Greedy symplectic elimination: pick the first non-diagonal string,
/// collect its X part onto its lowest X qubit with CNOTs, turn a Y pivot
/// into X, clear the remaining Z part with CZs and finish with a Hadamard.
/// Strings already made diagonal stay diagonal because they commute with
/// the pivot.
pub fn diagonalize_commuting_set(h: &PauliSum) -> Result<DiagonalizationResult> {
    check_commuting_hermitian(h)?;
    let n = h.n_qubits();
    let originals: Vec<(f64, PauliString)> =
        h.terms().iter().map(|(c, p)| (c.re, p.clone())).collect();
    let mut current: Vec<PauliString> = originals.iter().map(|(_, p)| p.clone()).collect();
    let mut ops = Vec::new();

    while let Some(pivot) = current.iter().position(|p| !p.is_diagonal()) {
        let p = &current[pivot];
        let xs: Vec<usize> = (0..n).filter(|&q| p.x_bit(q)).collect();
        let q = xs[0];
        let mut step: Vec<CliffordOp> = xs[1..].iter().map(|&j| CliffordOp::Cnot(q, j)).collect();
        let reduced = conjugate_all(&step, p);
        if reduced.letter(q) == Pauli::Y {
            step.push(CliffordOp::Sdg(q));
        }
        step.extend(
            (0..n)
                .filter(|&j| j != q && reduced.z_bit(j))
                .map(|j| CliffordOp::Cz(q, j)),
        );
        step.push(CliffordOp::H(q));
        for s in current.iter_mut() {
            *s = conjugate_all(&step, s);
        }
        debug_assert!(current[pivot].is_diagonal());
        ops.extend(step);
    }

    let mut prefix = Circuit::new(n);
    append_ops(&mut prefix, &ops)?;
    let rotations = originals
        .iter()
        .zip(&current)
        .map(|((c, _), d)| DiagonalTerm {
            support: d.support(),
            coefficient: if d.phase() == 2 { -c } else { *c },
        })
        .collect();
    let report = DiagonalizationReport {
        images: originals
            .iter()
            .zip(&current)
            .map(|((_, p), d)| (p.to_string(), d.to_string()))
            .collect(),
        all_diagonal: current.iter().all(commutes_with_all_z),
        prefix_cnots: prefix.counts().cnot,
    };
    Ok(DiagonalizationResult {
        ops,
        prefix,
        rotations,
        report,
    })
}

fn commutes_with_all_z(p: &PauliString) -> bool {
    (0..p.n_qubits()).all(|q| {
        let z = PauliString::from_sparse(p.n_qubits(), &[(q, Pauli::Z)]).expect("in range");
        p.commutes(&z).expect("same width")
    })
}

/// `Π_k exp(iε·c_k·Z_{S_k})`. Terms are grouped by their lowest qubit `t`;
/// within a group the parity of the other support qubits is accumulated on
/// `t` with `CNOT(j, t)`, visiting masks in Gray-code order so consecutive
/// terms differ by few CNOTs.
fn synthesize_diagonal(n: usize, terms: &[DiagonalTerm], eps: f64) -> Result<Circuit> {
    let mut c = Circuit::new(n);
    let mut groups: Vec<(usize, Vec<(u64, f64)>)> = Vec::new();
    for term in terms {
        let Some(&t) = term.support.first() else {
            c.add_phase(eps * term.coefficient);
            continue;
        };
        let rest: u64 = term.support[1..].iter().fold(0, |m, &q| m | 1 << q);
        match groups.iter_mut().find(|(g, _)| *g == t) {
            Some((_, v)) => v.push((rest, term.coefficient)),
            None => groups.push((t, vec![(rest, term.coefficient)])),
        }
    }
    for (t, mut members) in groups {
        let others: Vec<usize> = (0..n)
            .filter(|&q| members.iter().any(|(m, _)| m >> q & 1 == 1))
            .collect();
        let compress = |m: u64| -> u64 {
            others
                .iter()
                .enumerate()
                .fold(0, |acc, (k, &q)| acc | ((m >> q & 1) << k))
        };
        members.sort_by_key(|&(m, _)| gray_rank(compress(m)));
        let mut held = 0u64;
        for (mask, coef) in members {
            toggle(&mut c, t, held ^ mask)?;
            held = mask;
            // e^{iφZ} = e^{iφ}·U1(−2φ)
            let phi = eps * coef;
            c.push(Gate::U1(t, -2.0 * phi))?;
            c.add_phase(phi);
        }
        toggle(&mut c, t, held)?;
    }
    Ok(c)
}

fn toggle(c: &mut Circuit, target: usize, mask: u64) -> Result<()> {
    for j in 0..64 {
        if mask >> j & 1 == 1 {
            c.push(Gate::cnot(j, target))?;
        }
    }
    Ok(())
}

/// Position of `g` in the reflected binary Gray sequence.
fn gray_rank(g: u64) -> u64 {
    let mut b = g;
    let mut shift = 1;
    while shift < 64 {
        b ^= b >> shift;
        shift <<= 1;
    }
    b
}
