use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use squeezesim::bosonmap::BosonQubitMap;
use squeezesim::compiler::export_qasm;
use squeezesim::measurement::PipelineOrder;
use squeezesim_cli::config::{Backend, EpsilonSource, ExperimentConfig};
use squeezesim_cli::experiment::{full_circuit, physics_report, run_experiment, Mode, RunBundle};
use squeezesim_cli::output::{records_csv, write_run, write_text};
use squeezesim_cli::verify::{run_suite, DEFAULT_EPSILONS};
use squeezesim_cli::{CliError, Result};

#[derive(Parser)]
#[command(
    name = "squeezesim",
    version,
    about = "Compile, simulate and sample the two-mode squeezing circuit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit QASM and gate counts for each ε.
    Compile(Flags),
    /// Noiseless sweep: exact P₀, concurrence and leakage per ε.
    Simulate(Flags),
    /// Noisy sampling with readout mitigation and post-selection.
    Sample(Flags),
    /// Run the invariant suite.
    Verify(Flags),
    /// Print coupling, ε, theory state and concurrence for physical parameters.
    Physics(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// Log-spaced grid `start:stop:points`.
    #[arg(long)]
    sweep: Option<String>,
    /// Oscillator angular frequency in Hz.
    #[arg(long)]
    omega: Option<f64>,
    /// Separation in metres.
    #[arg(long)]
    distance: Option<f64>,
    /// Evolution time in seconds.
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    trajectories: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    readout_error: Option<f64>,
    #[arg(long = "gate-error-1q")]
    gate_error_1q: Option<f64>,
    #[arg(long = "gate-error-2q")]
    gate_error_2q: Option<f64>,
    /// naive | peephole | diagonalize
    #[arg(long)]
    backend: Option<Backend>,
    #[arg(long, overrides_with = "no_mitigate")]
    mitigate: bool,
    #[arg(long)]
    no_mitigate: bool,
    #[arg(long, overrides_with = "no_postselect")]
    postselect: bool,
    #[arg(long)]
    no_postselect: bool,
    /// mitigate-then-postselect | postselect-then-mitigate
    #[arg(long, value_parser = parse_order)]
    order: Option<PipelineOrder>,
    /// Zero negative quasi-probabilities and renormalize.
    #[arg(long)]
    clip_negative: bool,
    /// Run directory; without it results go to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_order(s: &str) -> std::result::Result<PipelineOrder, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| {
        format!("unknown order {s:?} (mitigate-then-postselect, postselect-then-mitigate)")
    })
}

impl Flags {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! over {
            ($($f:ident),*) => {$(
                if let Some(v) = &self.$f { c.$f = Some(v.clone()); }
            )*};
        }
        over!(epsilon, sweep, omega, distance, time, trajectories, out);
        if let Some(v) = self.shots {
            c.shots = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.readout_error {
            c.readout_error = v;
        }
        if let Some(v) = self.gate_error_1q {
            c.gate_error_1q = v;
        }
        if let Some(v) = self.gate_error_2q {
            c.gate_error_2q = v;
        }
        if let Some(v) = self.backend {
            c.backend = v;
        }
        if let Some(v) = self.order {
            c.order = v;
        }
        if self.mitigate {
            c.mitigate = true;
        }
        if self.no_mitigate {
            c.mitigate = false;
        }
        if self.postselect {
            c.postselect = true;
        }
        if self.no_postselect {
            c.postselect = false;
        }
        if self.clip_negative {
            c.clip_negative = true;
        }
        Ok(c)
    }
}

fn emit(bundle: &RunBundle) -> Result<()> {
    for w in bundle.warnings() {
        eprintln!("warning: {w}");
    }
    match &bundle.config.out {
        Some(dir) => {
            write_run(dir, bundle)?;
            print!("{}", records_csv(&bundle.records())?);
            eprintln!("wrote {}", dir.display());
        }
        None => print!("{}", records_csv(&bundle.records())?),
    }
    Ok(())
}

fn compile(cfg: &ExperimentConfig) -> Result<()> {
    let map = BosonQubitMap::two_mode_pair();
    let h = map.map_squared_pair_hamiltonian()?;
    for (k, eps) in cfg.epsilons()?.into_iter().enumerate() {
        let c = full_circuit(cfg.backend, &map, &h, eps)?;
        let n = c.counts();
        let qasm = export_qasm(&c);
        match &cfg.out {
            Some(dir) => {
                write_text(
                    &dir.join("circuits").join(format!("point_{k:03}.qasm")),
                    &qasm,
                )?;
                println!(
                    "point {k} ε={eps:e}: {} CNOT, {} single-qubit (including preparation)",
                    n.cnot, n.single
                );
            }
            None => {
                println!(
                    "// ε = {eps:e}: {} CNOT, {} single-qubit (including preparation)",
                    n.cnot, n.single
                );
                print!("{qasm}");
            }
        }
    }
    if let Some(dir) = &cfg.out {
        write_text(&dir.join("config.json"), &cfg.to_json())?;
    }
    Ok(())
}

fn verify(cfg: &ExperimentConfig) -> Result<()> {
    let epsilons = match cfg.validate()? {
        EpsilonSource::Unset => DEFAULT_EPSILONS.to_vec(),
        _ => cfg.epsilons()?,
    };
    let map = BosonQubitMap::two_mode_pair();
    let h = map.map_squared_pair_hamiltonian()?;
    let report = run_suite(&h, &map, &epsilons);
    print!("{}", report.render());
    if let Some(dir) = &cfg.out {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        write_text(&dir.join("verify.json"), &s)?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        let names: Vec<_> = report.failures().iter().map(|c| c.name.clone()).collect();
        Err(CliError::Verification(names.join(", ")))
    }
}

fn physics(cfg: &ExperimentConfig) -> Result<()> {
    let (Some(omega), Some(distance)) = (cfg.omega, cfg.distance) else {
        return Err(CliError::Config(
            "physics needs --omega and --distance (and optionally --time)".into(),
        ));
    };
    let p = physics_report(omega, distance, cfg.time)?;
    println!("omega_m          {:e} Hz", p.omega_m);
    println!("distance         {:e} m", p.distance);
    println!("coupling g       {:.6e} Hz", p.coupling_hz);
    if let (Some(t), Some(eps)) = (p.time, p.epsilon) {
        println!("time             {t:e} s");
        println!("epsilon = g·t    {eps:.6e}");
    }
    println!(
        "theory state     {:.17}|00> + {:.6e}|22>",
        p.theory_amplitudes[0], p.theory_amplitudes[1]
    );
    println!("concurrence      {:.6e}", p.theory_concurrence);
    eprintln!("warning: {}", p.warning);
    if let Some(dir) = &cfg.out {
        let mut s = serde_json::to_string_pretty(&p).expect("report serializes");
        s.push('\n');
        write_text(&dir.join("physics.json"), &s)?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compile(f) => compile(&f.resolve()?),
        Command::Simulate(f) => emit(&run_experiment(&f.resolve()?, Mode::Noiseless)?),
        Command::Sample(f) => emit(&run_experiment(&f.resolve()?, Mode::Noisy)?),
        Command::Verify(f) => verify(&f.resolve()?),
        Command::Physics(f) => physics(&f.resolve()?),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
