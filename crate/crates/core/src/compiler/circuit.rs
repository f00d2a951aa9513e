use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One gate from the fixed hardware-style set.
///
/// Conventions: `U1(λ) = diag(1, e^{iλ})`, `S = U1(π/2)`,
/// `RX(θ) = exp(−iθX/2)`, `RZ(θ) = exp(−iθZ/2)`, `√X = e^{iπ/4}·RX(π/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "GateRecord", try_from = "GateRecord")]
pub enum Gate {
    X(usize),
    SqrtX(usize),
    Rx(usize, f64),
    Rz(usize, f64),
    U1(usize, f64),
    S(usize),
    Sdg(usize),
    Cnot { control: usize, target: usize },
}

/// Rotation axis of a single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn qasm_name(&self) -> &'static str {
        match self {
            Gate::X(_) => "x",
            Gate::SqrtX(_) => "sx",
            Gate::Rx(..) => "rx",
            Gate::Rz(..) => "rz",
            Gate::U1(..) => "u1",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::Cnot { .. } => "cx",
        }
    }

    /// Qubits acted on; control first for CNOT.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot { control, target } => vec![control, target],
            Gate::X(q)
            | Gate::SqrtX(q)
            | Gate::Rx(q, _)
            | Gate::Rz(q, _)
            | Gate::U1(q, _)
            | Gate::S(q)
            | Gate::Sdg(q) => vec![q],
        }
    }

    pub fn acts_on(&self, q: usize) -> bool {
        match *self {
            Gate::Cnot { control, target } => control == q || target == q,
            _ => self.qubits()[0] == q,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, a) | Gate::Rz(_, a) | Gate::U1(_, a) => Some(a),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    pub fn axis(&self) -> Option<Axis> {
        match self {
            Gate::X(_) | Gate::SqrtX(_) | Gate::Rx(..) => Some(Axis::X),
            Gate::Rz(..) | Gate::U1(..) | Gate::S(_) | Gate::Sdg(_) => Some(Axis::Z),
            Gate::Cnot { .. } => None,
        }
    }

    /// For single-qubit gates: `(axis, θ, φ)` with gate `= e^{iφ}·R_axis(θ)`.
    pub fn as_rotation(&self) -> Option<(Axis, f64, f64)> {
        Some(match *self {
            Gate::X(_) => (Axis::X, PI, FRAC_PI_2),
            Gate::SqrtX(_) => (Axis::X, FRAC_PI_2, FRAC_PI_4),
            Gate::Rx(_, t) => (Axis::X, t, 0.0),
            Gate::Rz(_, t) => (Axis::Z, t, 0.0),
            Gate::U1(_, l) => (Axis::Z, l, l / 2.0),
            Gate::S(_) => (Axis::Z, FRAC_PI_2, FRAC_PI_4),
            Gate::Sdg(_) => (Axis::Z, -FRAC_PI_2, -FRAC_PI_4),
            Gate::Cnot { .. } => return None,
        })
    }

    /// 2×2 matrix `[[m00, m01], [m10, m11]]` of a single-qubit gate.
    pub fn matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        Some(match *self {
            Gate::X(_) => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            Gate::SqrtX(_) => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
            Gate::Rx(_, t) => {
                let (s, co) = (t / 2.0).sin_cos();
                [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
            }
            Gate::Rz(_, t) => [
                [Complex64::from_polar(1.0, -t / 2.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)],
            ],
            Gate::U1(_, l) => [
                [c(1.0, 0.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, l)],
            ],
            Gate::S(_) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
            Gate::Sdg(_) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]],
            Gate::Cnot { .. } => return None,
        })
    }

    /// Inverse as gates from the same set, plus the global phase it sheds.
    pub fn inverse(&self) -> (Gate, f64) {
        match *self {
            Gate::X(q) => (Gate::X(q), 0.0),
            // √X† = e^{−iπ/4}·RX(−π/2)
            Gate::SqrtX(q) => (Gate::Rx(q, -FRAC_PI_2), -FRAC_PI_4),
            Gate::Rx(q, t) => (Gate::Rx(q, -t), 0.0),
            Gate::Rz(q, t) => (Gate::Rz(q, -t), 0.0),
            Gate::U1(q, l) => (Gate::U1(q, -l), 0.0),
            Gate::S(q) => (Gate::Sdg(q), 0.0),
            Gate::Sdg(q) => (Gate::S(q), 0.0),
            g @ Gate::Cnot { .. } => (g, 0.0),
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
        }
        if let Gate::Cnot { control, target } = *self {
            if control == target {
                return Err(Error::InvalidGate(format!(
                    "CNOT control and target are both {control}"
                )));
            }
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(Error::InvalidGate(format!("non-finite angle {a}")));
            }
        }
        Ok(())
    }
}

/// Serialized gate: `{"kind": "cx", "qubits": [0, 2], "angle": null}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: String,
    pub qubits: Vec<usize>,
    pub angle: Option<f64>,
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        GateRecord {
            kind: g.qasm_name().to_string(),
            qubits: g.qubits(),
            angle: g.angle(),
        }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Gate> {
        gate_from_parts(&r.kind, &r.qubits, r.angle)
    }
}

pub(crate) fn gate_from_parts(kind: &str, qubits: &[usize], angle: Option<f64>) -> Result<Gate> {
    let bad = || Error::InvalidGate(format!("{kind} with qubits {qubits:?} and angle {angle:?}"));
    let one = || match qubits {
        [q] => Ok(*q),
        _ => Err(bad()),
    };
    let no_angle = |g: Gate| if angle.is_none() { Ok(g) } else { Err(bad()) };
    match kind {
        "x" => no_angle(Gate::X(one()?)),
        "sx" => no_angle(Gate::SqrtX(one()?)),
        "s" => no_angle(Gate::S(one()?)),
        "sdg" => no_angle(Gate::Sdg(one()?)),
        "rx" => Ok(Gate::Rx(one()?, angle.ok_or_else(bad)?)),
        "rz" => Ok(Gate::Rz(one()?, angle.ok_or_else(bad)?)),
        "u1" => Ok(Gate::U1(one()?, angle.ok_or_else(bad)?)),
        "cx" => match qubits {
            [c, t] => no_angle(Gate::cnot(*c, *t)),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct GateCounts {
    pub cnot: usize,
    pub single: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.cnot + self.single
    }
}

/// Ordered gate list (first element applied first) with a global phase:
/// the represented unitary is `e^{iφ}·G_last⋯G_first`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    global_phase: f64,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>, global_phase: f64) -> Result<Self> {
        for g in &gates {
            g.validate(n_qubits)?;
        }
        Ok(Circuit {
            n_qubits,
            gates,
            global_phase,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn add_phase(&mut self, phase: f64) {
        self.global_phase += phase;
    }

    /// Appends `other`, which runs after `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        self.global_phase += other.global_phase;
        Ok(())
    }

    pub fn inverse(&self) -> Circuit {
        let mut phase = -self.global_phase;
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| {
                let (inv, p) = g.inverse();
                phase += p;
                inv
            })
            .collect();
        Circuit {
            n_qubits: self.n_qubits,
            gates,
            global_phase: phase,
        }
    }

    pub fn counts(&self) -> GateCounts {
        let cnot = self.gates.iter().filter(|g| g.is_two_qubit()).count();
        GateCounts {
            cnot,
            single: self.gates.len() - cnot,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Circuit> {
        let c: Circuit = serde_json::from_str(s)?;
        for g in &c.gates {
            g.validate(c.n_qubits)?;
        }
        Ok(c)
    }

    pub(crate) fn into_parts(self) -> (usize, Vec<Gate>, f64) {
        (self.n_qubits, self.gates, self.global_phase)
    }
}
