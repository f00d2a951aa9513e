//! OpenQASM 2.0 text for circuits over the fixed gate set.
//!
//! Angles are written with `f64`'s shortest round-trip formatting, so
//! [`parse_qasm`] recovers every gate bit for bit.

use std::fmt::Write as _;

use super::circuit::{gate_from_parts, Circuit, Gate};
use crate::error::{Error, Result};

const PHASE_PREFIX: &str = "// global phase: ";

pub fn export_qasm(c: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if c.global_phase() != 0.0 {
        let _ = writeln!(out, "{PHASE_PREFIX}{}", c.global_phase());
    }
    let _ = writeln!(out, "qreg q[{}];", c.n_qubits());
    for g in c.gates() {
        out.push_str(&gate_line(g));
        out.push('\n');
    }
    out
}

fn gate_line(g: &Gate) -> String {
    let operands = g
        .qubits()
        .iter()
        .map(|q| format!("q[{q}]"))
        .collect::<Vec<_>>()
        .join(",");
    match g.angle() {
        Some(a) => format!("{}({a}) {operands};", g.qasm_name()),
        None => format!("{} {operands};", g.qasm_name()),
    }
}

/// Reads the subset of OpenQASM 2.0 written by [`export_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut n_qubits = None;
    let mut phase = 0.0;
    let mut gates = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.trim();
        if let Some(p) = line.strip_prefix(PHASE_PREFIX) {
            phase = p
                .trim()
                .parse()
                .map_err(|e| err(format!("bad global phase {p:?}: {e}")))?;
            continue;
        }
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| err(format!("missing ';' in {line:?}")))?;
        if stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            continue;
        }
        if let Some(decl) = stmt.strip_prefix("qreg ") {
            let size = decl
                .trim()
                .strip_prefix("q[")
                .and_then(|s| s.strip_suffix(']'))
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| err(format!("bad register declaration {decl:?}")))?;
            n_qubits = Some(size);
            continue;
        }
        let (head, operands) = stmt
            .split_once(' ')
            .ok_or_else(|| err(format!("expected operands in {stmt:?}")))?;
        let (name, angle) = match head.split_once('(') {
            Some((name, rest)) => {
                let a = rest
                    .strip_suffix(')')
                    .ok_or_else(|| err(format!("unclosed parameter in {head:?}")))?;
                let a: f64 = a
                    .parse()
                    .map_err(|e| err(format!("bad angle {a:?}: {e}")))?;
                (name, Some(a))
            }
            None => (head, None),
        };
        let qubits = operands
            .split(',')
            .map(|op| {
                op.trim()
                    .strip_prefix("q[")
                    .and_then(|s| s.strip_suffix(']'))
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| err(format!("bad operand {op:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let gate = gate_from_parts(name, &qubits, angle).map_err(|e| err(e.to_string()))?;
        gates.push(gate);
    }
    let n = n_qubits.ok_or_else(|| Error::Parse {
        line: 0,
        message: "no qreg declaration".into(),
    })?;
    Circuit::from_gates(n, gates, phase)
}
