//! Shot sampling, gate and readout noise, readout mitigation and
//! post-selection onto the two codewords reached by the pair Hamiltonian.
//!
//! Randomness comes from ChaCha8 seeded with the run seed. Trajectory `k`
//! uses stream `k + 1` of that seed; plain sampling uses stream 0.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::Bitstring;
use crate::bosonmap::BosonQubitMap;
use crate::compiler::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::pauli::Pauli;
use crate::simulator::{run, Statevector};

/// Average readout assignment error quoted for the reference device.
pub const REFERENCE_READOUT_ERROR: f64 = 1.127e-2;
/// Average single-qubit gate error quoted for the reference device.
pub const REFERENCE_GATE_ERROR_1Q: f64 = 4.278e-4;
/// Average CNOT error quoted for the reference device.
pub const REFERENCE_GATE_ERROR_2Q: f64 = 1.413e-2;

/// Per-qubit bit-flip readout model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadoutNoiseModel {
    /// `(p01, p10)` per qubit: `P(read 1 | 0)` and `P(read 0 | 1)`.
    rates: Vec<(f64, f64)>,
}

impl ReadoutNoiseModel {
    pub fn new(rates: Vec<(f64, f64)>) -> Result<Self> {
        for (q, &(p01, p10)) in rates.iter().enumerate() {
            for (name, value) in [("p01", p01), ("p10", p10)] {
                if !(0.0..0.5).contains(&value) {
                    return Err(Error::InvalidProbability {
                        name: format!("{name}[{q}]"),
                        value,
                    });
                }
            }
        }
        Ok(ReadoutNoiseModel { rates })
    }

    /// The same symmetric error `p` on every qubit.
    pub fn uniform(n_qubits: usize, p: f64) -> Result<Self> {
        Self::new(vec![(p, p); n_qubits])
    }

    pub fn noiseless(n_qubits: usize) -> Self {
        ReadoutNoiseModel {
            rates: vec![(0.0, 0.0); n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.rates.len()
    }

    pub fn rates(&self) -> &[(f64, f64)] {
        &self.rates
    }

    pub fn is_noiseless(&self) -> bool {
        self.rates.iter().all(|&(a, b)| a == 0.0 && b == 0.0)
    }

    /// `A⁻¹` for `A = [[1−p01, p10], [p01, 1−p10]]` (columns: true state).
    fn inverse(&self, q: usize) -> Result<[[f64; 2]; 2]> {
        let (p01, p10) = self.rates[q];
        let det = 1.0 - p01 - p10;
        if det.abs() < 1e-12 {
            return Err(Error::SingularCalibration {
                qubit: q,
                sum: p01 + p10,
            });
        }
        Ok([
            [(1.0 - p10) / det, -p10 / det],
            [-p01 / det, (1.0 - p01) / det],
        ])
    }

    /// 2-norm condition number of the full tensor-product calibration matrix.
    pub fn condition_number(&self) -> f64 {
        self.rates
            .iter()
            .map(|&(p01, p10)| {
                let s = singular_values([[1.0 - p01, p10], [p01, 1.0 - p10]]);
                s.0 / s.1
            })
            .product()
    }

    fn corrupt(&self, index: usize, rng: &mut impl Rng) -> usize {
        let mut out = index;
        for (q, &(p01, p10)) in self.rates.iter().enumerate() {
            let one = index >> q & 1 == 1;
            let p = if one { p10 } else { p01 };
            if p > 0.0 && rng.random::<f64>() < p {
                out ^= 1 << q;
            }
        }
        out
    }
}

fn singular_values(m: [[f64; 2]; 2]) -> (f64, f64) {
    let [[a, b], [c, d]] = m;
    let s1 = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = (s1 * s1 - 4.0 * det * det).max(0.0).sqrt();
    (
        ((s1 + disc) / 2.0).sqrt(),
        ((s1 - disc) / 2.0).max(0.0).sqrt(),
    )
}

/// Depolarizing noise: after each gate, with the gate's probability, a
/// uniformly random non-identity Pauli on the gate's qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateNoiseModel {
    pub p1: f64,
    pub p2: f64,
}

impl GateNoiseModel {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for (name, value) in [("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability {
                    name: name.into(),
                    value,
                });
            }
        }
        Ok(GateNoiseModel { p1, p2 })
    }

    pub fn none() -> Self {
        GateNoiseModel { p1: 0.0, p2: 0.0 }
    }

    pub fn reference_device() -> Self {
        GateNoiseModel {
            p1: REFERENCE_GATE_ERROR_1Q,
            p2: REFERENCE_GATE_ERROR_2Q,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }

    fn probability(&self, g: &Gate) -> f64 {
        if g.is_two_qubit() {
            self.p2
        } else {
            self.p1
        }
    }
}

/// Histogram of measured bitstrings (qubit 0 leftmost).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountsTable {
    n_qubits: usize,
    shots: u64,
    counts: BTreeMap<Bitstring, u64>,
}

impl CountsTable {
    pub fn new(n_qubits: usize) -> Self {
        CountsTable {
            n_qubits,
            shots: 0,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_counts(n_qubits: usize, counts: BTreeMap<Bitstring, u64>) -> Result<Self> {
        if let Some(b) = counts.keys().find(|b| b.len() != n_qubits) {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                found: b.len(),
            });
        }
        let shots = counts.values().sum();
        Ok(CountsTable {
            n_qubits,
            shots,
            counts,
        })
    }

    fn add_index(&mut self, index: usize, count: u64) {
        if count > 0 {
            *self
                .counts
                .entry(Bitstring::from_index(index, self.n_qubits))
                .or_insert(0) += count;
            self.shots += count;
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, bits: &Bitstring) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Bitstring, &u64)> {
        self.counts.iter()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let mut f = vec![0.0; 1 << self.n_qubits];
        for (b, &c) in &self.counts {
            f[b.index()] = c as f64 / self.shots as f64;
        }
        f
    }

    /// Adds `other`'s counts.
    pub fn merge(&mut self, other: &CountsTable) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        for (b, &c) in &other.counts {
            *self.counts.entry(b.clone()).or_insert(0) += c;
        }
        self.shots += other.shots;
        Ok(())
    }

    /// `{"011011": 99410, …}` in bitstring order.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.counts)?)
    }

    /// `bitstring,count` rows in bitstring order.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["bitstring", "count"])?;
        for (b, c) in &self.counts {
            w.write_record([b.to_string(), c.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

fn draw_counts(
    probs: &[f64],
    shots: u64,
    readout: &ReadoutNoiseModel,
    rng: &mut ChaCha8Rng,
    table: &mut CountsTable,
) -> Result<()> {
    let dist = WeightedIndex::new(probs)
        .map_err(|e| Error::Domain(format!("cannot sample distribution: {e}")))?;
    let mut hist = vec![0u64; probs.len()];
    for _ in 0..shots {
        let ideal = dist.sample(rng);
        hist[readout.corrupt(ideal, rng)] += 1;
    }
    for (i, c) in hist.into_iter().enumerate() {
        table.add_index(i, c);
    }
    Ok(())
}

fn check_readout(readout: &ReadoutNoiseModel, n_qubits: usize) -> Result<()> {
    if readout.n_qubits() != n_qubits {
        return Err(Error::DimensionMismatch {
            expected: n_qubits,
            found: readout.n_qubits(),
        });
    }
    Ok(())
}

/// Draws `shots` outcomes from `|amplitude|²` and passes each through the
/// readout model.
pub fn sample(
    state: &Statevector,
    shots: u64,
    readout: &ReadoutNoiseModel,
    seed: u64,
) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    check_readout(readout, state.n_qubits())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = CountsTable::new(state.n_qubits());
    draw_counts(&state.probabilities(), shots, readout, &mut rng, &mut table)?;
    Ok(table)
}

/// Pauli insertions of one trajectory: `(after gate k, qubit, letter)`.
pub type ErrorEvents = Vec<(usize, usize, Pauli)>;

/// Draws where depolarizing errors strike in one run of `c`.
pub fn draw_error_events(c: &Circuit, noise: &GateNoiseModel, rng: &mut impl Rng) -> ErrorEvents {
    const LETTERS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut events = Vec::new();
    for (k, g) in c.gates().iter().enumerate() {
        let p = noise.probability(g);
        if p == 0.0 || rng.random::<f64>() >= p {
            continue;
        }
        let qubits = g.qubits();
        // uniform over the 4^w − 1 non-identity Paulis on the support
        let n_choices = (1usize << (2 * qubits.len())) - 1;
        let pick = rng.random_range(0..n_choices) + 1;
        for (slot, &q) in qubits.iter().enumerate() {
            let letter = LETTERS[pick >> (2 * slot) & 3];
            if letter != Pauli::I {
                events.push((k, q, letter));
            }
        }
    }
    events
}

/// Runs `c` on `initial` with the given Pauli insertions.
pub fn run_with_errors(
    c: &Circuit,
    initial: &Statevector,
    events: &[(usize, usize, Pauli)],
) -> Result<Statevector> {
    let mut sv = initial.clone();
    let mut next = events.iter().peekable();
    for (k, g) in c.gates().iter().enumerate() {
        sv.apply_gate(g)?;
        while let Some(&&(at, q, letter)) = next.peek() {
            if at != k {
                break;
            }
            sv.apply_pauli(q, letter)?;
            next.next();
        }
    }
    sv.apply_global_phase(c.global_phase());
    Ok(sv)
}

/// Monte-Carlo trajectory sampling of `c` under gate and readout noise.
///
/// `shots` are split as evenly as possible over `trajectories`; each
/// trajectory draws its own error pattern and then its share of shots.
/// Results are merged in trajectory order, so the table depends only on
/// the seed and the arguments, not on the schedule.
#[allow(clippy::too_many_arguments)]
pub fn sample_noisy(
    c: &Circuit,
    initial: &Statevector,
    gate_noise: &GateNoiseModel,
    readout: &ReadoutNoiseModel,
    shots: u64,
    trajectories: u64,
    seed: u64,
    exec: Execution,
) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if trajectories == 0 || trajectories > shots {
        return Err(Error::Domain(format!(
            "trajectories must be in 1..={shots}, got {trajectories}"
        )));
    }
    check_readout(readout, initial.n_qubits())?;
    let clean = run(c, initial)?.probabilities();
    let base = shots / trajectories;
    let extra = shots % trajectories;
    let tables = map_indices(exec, trajectories as usize, |k| -> Result<CountsTable> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64 + 1);
        let events = draw_error_events(c, gate_noise, &mut rng);
        let share = base + u64::from((k as u64) < extra);
        let mut table = CountsTable::new(initial.n_qubits());
        if events.is_empty() {
            draw_counts(&clean, share, readout, &mut rng, &mut table)?;
        } else {
            let probs = run_with_errors(c, initial, &events)?.probabilities();
            draw_counts(&probs, share, readout, &mut rng, &mut table)?;
        }
        Ok(table)
    });
    let mut total = CountsTable::new(initial.n_qubits());
    for t in tables {
        total.merge(&t?)?;
    }
    Ok(total)
}

/// Diagnostics of a readout inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MitigationReport {
    pub condition_number: f64,
    /// Sum of the magnitudes of negative entries before any clipping.
    pub negativity_mass: f64,
    pub clipped: bool,
}

/// Quasi-probabilities over all bitstrings with enough bookkeeping to
/// propagate binomial errors through linear functionals.
#[derive(Debug, Clone)]
pub struct QuasiDistribution {
    n_qubits: usize,
    values: Vec<f64>,
    /// Empirical frequencies the values were derived from.
    frequencies: Vec<f64>,
    shots: u64,
    /// Per-qubit linear map applied to the frequencies, if any.
    inverses: Option<Vec<[[f64; 2]; 2]>>,
    pub report: Option<MitigationReport>,
}

impl QuasiDistribution {
    /// The empirical distribution itself.
    pub fn from_counts(counts: &CountsTable) -> Result<Self> {
        if counts.shots() == 0 {
            return Err(Error::ZeroShots);
        }
        let f = counts.frequencies();
        Ok(QuasiDistribution {
            n_qubits: counts.n_qubits(),
            values: f.clone(),
            frequencies: f,
            shots: counts.shots(),
            inverses: None,
            report: None,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, bits: &Bitstring) -> f64 {
        self.values[bits.index()]
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Standard error of `Σ_k w_k·value_k` by linear propagation of the
    /// multinomial covariance of the frequencies.
    pub fn linear_std_error(&self, w: &[f64]) -> f64 {
        let mut pulled = w.to_vec();
        if let Some(inv) = &self.inverses {
            // wᵀ·M = (Mᵀ·w)ᵀ
            let transposed: Vec<[[f64; 2]; 2]> = inv
                .iter()
                .map(|m| [[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
                .collect();
            apply_tensor(&mut pulled, &transposed);
        }
        let second: f64 = pulled
            .iter()
            .zip(&self.frequencies)
            .map(|(a, f)| a * a * f)
            .sum();
        let first: f64 = pulled
            .iter()
            .zip(&self.frequencies)
            .map(|(a, f)| a * f)
            .sum();
        ((second - first * first).max(0.0) / self.shots as f64).sqrt()
    }

    pub fn std_error(&self, bits: &Bitstring) -> f64 {
        let mut w = vec![0.0; self.values.len()];
        w[bits.index()] = 1.0;
        self.linear_std_error(&w)
    }
}

/// Applies `⊗_q m_q` to `v` in place (qubit `q` = bit `q`).
fn apply_tensor(v: &mut [f64], mats: &[[[f64; 2]; 2]]) {
    for (q, m) in mats.iter().enumerate() {
        let stride = 1usize << q;
        for base in (0..v.len()).step_by(stride << 1) {
            for i in base..base + stride {
                let (a, b) = (v[i], v[i + stride]);
                v[i] = m[0][0] * a + m[0][1] * b;
                v[i + stride] = m[1][0] * a + m[1][1] * b;
            }
        }
    }
}

/// Applies the inverse calibration to the empirical distribution.
/// Negative entries are kept unless `clip` is set, in which case they are
/// zeroed and the rest renormalized.
pub fn mitigate_readout(
    counts: &CountsTable,
    noise: &ReadoutNoiseModel,
    clip: bool,
) -> Result<QuasiDistribution> {
    check_readout(noise, counts.n_qubits())?;
    let mut dist = QuasiDistribution::from_counts(counts)?;
    let inverses = (0..noise.n_qubits())
        .map(|q| noise.inverse(q))
        .collect::<Result<Vec<_>>>()?;
    apply_tensor(&mut dist.values, &inverses);
    let negativity_mass: f64 = dist.values.iter().filter(|v| **v < 0.0).map(|v| -v).sum();
    if clip && negativity_mass > 0.0 {
        dist.values.iter_mut().for_each(|v| *v = v.max(0.0));
        let total: f64 = dist.values.iter().sum();
        dist.values.iter_mut().for_each(|v| *v /= total);
    }
    dist.inverses = Some(inverses);
    dist.report = Some(MitigationReport {
        condition_number: noise.condition_number(),
        negativity_mass,
        clipped: clip && negativity_mass > 0.0,
    });
    Ok(dist)
}

/// Ground-state probability after keeping only the two codewords `|00⟩`
/// and `|22⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PostSelected {
    pub p0: f64,
    pub p0_std_error: f64,
    pub p22: f64,
    pub retained_weight: f64,
    pub discard_fraction: f64,
    pub discard_std_error: f64,
}

fn pair_codewords(map: &BosonQubitMap) -> Result<(Bitstring, Bitstring)> {
    Ok((map.encode(&[0, 0])?, map.encode(&[2, 2])?))
}

/// Post-selects a (quasi-)distribution onto `011011` and `110110`.
pub fn postselect(dist: &QuasiDistribution, map: &BosonQubitMap) -> Result<PostSelected> {
    let (g, e) = pair_codewords(map)?;
    if dist.n_qubits() != map.total_qubits() {
        return Err(Error::DimensionMismatch {
            expected: map.total_qubits(),
            found: dist.n_qubits(),
        });
    }
    let (q0, q2) = (dist.get(&g), dist.get(&e));
    let retained = q0 + q2;
    if retained <= 1e-15 {
        return Err(Error::DegeneratePostSelection);
    }
    let total: f64 = dist.values().iter().sum();
    let dim = dist.values().len();
    // ∂(q0/(q0+q2)) = (q2·∂q0 − q0·∂q2)/(q0+q2)²
    let mut w = vec![0.0; dim];
    w[g.index()] = q2 / (retained * retained);
    w[e.index()] = -q0 / (retained * retained);
    let p0_std_error = dist.linear_std_error(&w);
    let mut keep = vec![0.0; dim];
    keep[g.index()] = 1.0;
    keep[e.index()] = 1.0;
    Ok(PostSelected {
        p0: q0 / retained,
        p0_std_error,
        p22: q2 / retained,
        retained_weight: retained / total,
        discard_fraction: 1.0 - retained / total,
        discard_std_error: dist.linear_std_error(&keep),
    })
}

/// Keeps only the two codeword rows of a counts table and returns the
/// discarded fraction of shots.
pub fn postselect_counts(counts: &CountsTable, map: &BosonQubitMap) -> Result<(CountsTable, f64)> {
    let (g, e) = pair_codewords(map)?;
    let kept: BTreeMap<Bitstring, u64> = [g, e]
        .into_iter()
        .map(|b| {
            let c = counts.get(&b);
            (b, c)
        })
        .filter(|(_, c)| *c > 0)
        .collect();
    let table = CountsTable::from_counts(counts.n_qubits(), kept)?;
    if table.shots() == 0 {
        return Err(Error::DegeneratePostSelection);
    }
    let discard = 1.0 - table.shots() as f64 / counts.shots() as f64;
    Ok((table, discard))
}

/// `P₀` from retained counts with its binomial standard error.
pub fn estimate_p0(filtered: &CountsTable, map: &BosonQubitMap) -> Result<(f64, f64)> {
    let (g, e) = pair_codewords(map)?;
    let n0 = filtered.get(&g);
    let n = n0 + filtered.get(&e);
    if n == 0 {
        return Err(Error::DegeneratePostSelection);
    }
    let r = n0 as f64 / n as f64;
    Ok((r, (r * (1.0 - r) / n as f64).sqrt()))
}

/// Order of readout mitigation and post-selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineOrder {
    #[default]
    MitigateThenPostselect,
    PostselectThenMitigate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PipelineOptions {
    pub mitigate: bool,
    pub postselect: bool,
    pub order: PipelineOrder,
    pub clip_negative: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            mitigate: true,
            postselect: true,
            order: PipelineOrder::default(),
            clip_negative: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub p0: f64,
    pub p0_std_error: f64,
    /// Fraction of (mitigated) weight outside the two codewords.
    pub discard_fraction: f64,
    pub discard_std_error: f64,
    pub mitigation: Option<MitigationReport>,
}

/// Mitigation and post-selection of one counts table.
pub fn estimate(
    counts: &CountsTable,
    map: &BosonQubitMap,
    readout: &ReadoutNoiseModel,
    opts: &PipelineOptions,
) -> Result<Estimate> {
    let (g, _) = pair_codewords(map)?;
    let dist = if opts.mitigate {
        mitigate_readout(counts, readout, opts.clip_negative)?
    } else {
        QuasiDistribution::from_counts(counts)?
    };
    let full = postselect(&dist, map)?;
    if !opts.postselect {
        return Ok(Estimate {
            p0: dist.get(&g),
            p0_std_error: dist.std_error(&g),
            discard_fraction: full.discard_fraction,
            discard_std_error: full.discard_std_error,
            mitigation: dist.report,
        });
    }
    match (opts.order, opts.mitigate) {
        (PipelineOrder::PostselectThenMitigate, true) => {
            let (kept, _) = postselect_counts(counts, map)?;
            let dist = mitigate_readout(&kept, readout, opts.clip_negative)?;
            let ps = postselect(&dist, map)?;
            Ok(Estimate {
                p0: ps.p0,
                p0_std_error: ps.p0_std_error,
                discard_fraction: full.discard_fraction,
                discard_std_error: full.discard_std_error,
                mitigation: dist.report,
            })
        }
        _ => Ok(Estimate {
            p0: full.p0,
            p0_std_error: full.p0_std_error,
            discard_fraction: full.discard_fraction,
            discard_std_error: full.discard_std_error,
            mitigation: dist.report,
        }),
    }
}
