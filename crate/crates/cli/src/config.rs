//! Experiment configuration: a flat JSON document, overridden flag by flag.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use squeezesim::measurement::{
    PipelineOptions, PipelineOrder, REFERENCE_GATE_ERROR_1Q, REFERENCE_GATE_ERROR_2Q,
    REFERENCE_READOUT_ERROR,
};
use squeezesim::physics::PhysicalParams;

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// One conjugation chain per term, concatenated.
    Naive,
    /// The naive circuit after gate cancellation and merging.
    Peephole,
    /// Shared Clifford frame plus a diagonal phase layer, then peephole.
    #[default]
    Diagonalize,
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "naive" => Ok(Backend::Naive),
            "peephole" => Ok(Backend::Peephole),
            "diagonalize" => Ok(Backend::Diagonalize),
            _ => Err(format!(
                "unknown backend {s:?} (naive, peephole, diagonalize)"
            )),
        }
    }
}

/// Log-spaced ε grid, written `start:stop:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let (a, b) = (self.start.ln(), self.stop.ln());
                (0..n)
                    .map(|k| {
                        if k == 0 {
                            self.start
                        } else if k == n - 1 {
                            self.stop
                        } else {
                            (a + (b - a) * k as f64 / (n - 1) as f64).exp()
                        }
                    })
                    .collect()
            }
        }
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, points] = parts[..] else {
            return Err(format!("sweep {s:?} is not start:stop:points"));
        };
        let start: f64 = start
            .trim()
            .parse()
            .map_err(|e| format!("sweep start {start:?}: {e}"))?;
        let stop: f64 = stop
            .trim()
            .parse()
            .map_err(|e| format!("sweep stop {stop:?}: {e}"))?;
        let points: usize = points
            .trim()
            .parse()
            .map_err(|e| format!("sweep points {points:?}: {e}"))?;
        if !(start.is_finite() && stop.is_finite() && start > 0.0 && stop > 0.0) {
            return Err(format!(
                "log-spaced sweep needs positive bounds, got {start} and {stop}"
            ));
        }
        if start > stop {
            return Err(format!("sweep start {start} exceeds stop {stop}"));
        }
        Ok(Sweep {
            start,
            stop,
            points,
        })
    }
}

impl std::fmt::Display for Sweep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.points)
    }
}

/// Everything a run depends on. Unset sources stay `None`; everything else
/// has a default so the echoed file is complete.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub epsilon: Option<f64>,
    pub sweep: Option<String>,
    pub omega: Option<f64>,
    pub distance: Option<f64>,
    pub time: Option<f64>,
    pub shots: u64,
    /// Independent gate-error draws; `None` means one per shot.
    pub trajectories: Option<u64>,
    pub seed: u64,
    pub readout_error: f64,
    pub gate_error_1q: f64,
    pub gate_error_2q: f64,
    pub backend: Backend,
    pub mitigate: bool,
    pub postselect: bool,
    pub order: PipelineOrder,
    pub clip_negative: bool,
    /// Not echoed, so runs into different directories stay comparable.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            epsilon: None,
            sweep: None,
            omega: None,
            distance: None,
            time: None,
            shots: 100_000,
            trajectories: None,
            seed: 0,
            readout_error: REFERENCE_READOUT_ERROR,
            gate_error_1q: REFERENCE_GATE_ERROR_1Q,
            gate_error_2q: REFERENCE_GATE_ERROR_2Q,
            backend: Backend::default(),
            mitigate: true,
            postselect: true,
            order: PipelineOrder::default(),
            clip_negative: false,
            out: None,
        }
    }
}

/// Where the ε values of a run come from.
#[derive(Debug, Clone, PartialEq)]
pub enum EpsilonSource {
    Direct(f64),
    Sweep(Sweep),
    Physical(PhysicalParams),
    /// Nothing given; callers choose their own default.
    Unset,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn pipeline(&self) -> PipelineOptions {
        PipelineOptions {
            mitigate: self.mitigate,
            postselect: self.postselect,
            order: self.order,
            clip_negative: self.clip_negative,
        }
    }

    pub fn trajectories(&self) -> u64 {
        self.trajectories.unwrap_or(self.shots)
    }

    /// Checks every field and returns the ε source.
    pub fn validate(&self) -> Result<EpsilonSource> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.shots == 0 {
            return bad("shots must be positive".into());
        }
        if let Some(t) = self.trajectories {
            if t == 0 || t > self.shots {
                return bad(format!(
                    "trajectories must be in 1..={}, got {t}",
                    self.shots
                ));
            }
        }
        if !(0.0..0.5).contains(&self.readout_error) {
            return bad(format!(
                "readout_error must be in [0, 0.5), got {}",
                self.readout_error
            ));
        }
        for (name, p) in [
            ("gate_error_1q", self.gate_error_1q),
            ("gate_error_2q", self.gate_error_2q),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must be in [0, 1], got {p}"));
            }
        }
        let physical = [self.omega, self.distance, self.time];
        let n_physical = physical.iter().filter(|v| v.is_some()).count();
        let direct = usize::from(self.epsilon.is_some()) + usize::from(self.sweep.is_some());
        if direct > 1 {
            return bad("give either epsilon or sweep, not both".into());
        }
        if direct == 1 && n_physical > 0 {
            return bad(
                "give either a direct epsilon/sweep or omega/distance/time, not both".into(),
            );
        }
        if n_physical > 0 {
            let [Some(omega), Some(distance), Some(time)] = physical else {
                return bad("physical mode needs all of omega, distance and time".into());
            };
            let p = PhysicalParams::new(omega, distance, time)
                .map_err(|e| CliError::Config(e.to_string()))?;
            return Ok(EpsilonSource::Physical(p));
        }
        if let Some(eps) = self.epsilon {
            if !eps.is_finite() {
                return bad(format!("epsilon must be finite, got {eps}"));
            }
            return Ok(EpsilonSource::Direct(eps));
        }
        if let Some(s) = &self.sweep {
            return s
                .parse()
                .map(EpsilonSource::Sweep)
                .map_err(CliError::Config);
        }
        Ok(EpsilonSource::Unset)
    }

    /// ε values to run; `Unset` is a configuration error here.
    pub fn epsilons(&self) -> Result<Vec<f64>> {
        match self.validate()? {
            EpsilonSource::Direct(e) => Ok(vec![e]),
            EpsilonSource::Sweep(s) => Ok(s.values()),
            EpsilonSource::Physical(p) => Ok(vec![p.epsilon()?]),
            EpsilonSource::Unset => Err(CliError::Config(
                "no evolution parameter: pass --epsilon, --sweep or --omega/--distance/--time"
                    .into(),
            )),
        }
    }
}
