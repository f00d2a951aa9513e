//! Run-directory layout:
//!
//! ```text
//! config.json             resolved configuration
//! records.csv             one row per ε
//! summary.json            records, physics block, warnings
//! circuits/point_NNN.qasm
//! codewords/point_NNN.csv noiseless codeword probabilities
//! counts/point_NNN.{csv,json}   noisy runs only
//! ```

use std::fs;
use std::path::Path;

use serde::Serialize;
use squeezesim::compiler::export_qasm;

use crate::config::ExperimentConfig;
use crate::experiment::{PhysicsReport, PointRecord, RunBundle};
use crate::{CliError, Result};

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn records_csv(records: &[&PointRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(squeezesim::Error::from)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Config(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct Summary<'a> {
    config: &'a ExperimentConfig,
    mode: &'static str,
    physics: Option<&'a PhysicsReport>,
    warnings: Vec<String>,
    records: Vec<&'a PointRecord>,
}

pub fn summary_json(bundle: &RunBundle) -> String {
    let summary = Summary {
        config: &bundle.config,
        mode: match bundle.mode {
            crate::experiment::Mode::Noiseless => "noiseless",
            crate::experiment::Mode::Noisy => "noisy",
        },
        physics: bundle.physics.as_ref(),
        warnings: bundle.warnings(),
        records: bundle.records(),
    };
    let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
    s.push('\n');
    s
}

/// Writes the whole run; files are produced sequentially in sweep order.
pub fn write_run(dir: &Path, bundle: &RunBundle) -> Result<()> {
    write(&dir.join("config.json"), &bundle.config.to_json())?;
    write(&dir.join("records.csv"), &records_csv(&bundle.records())?)?;
    write(&dir.join("summary.json"), &summary_json(bundle))?;
    for p in &bundle.points {
        let stem = format!("point_{:03}", p.record.index);
        write(
            &dir.join("circuits").join(format!("{stem}.qasm")),
            &export_qasm(&p.circuit),
        )?;
        write(
            &dir.join("codewords").join(format!("{stem}.csv")),
            &p.codeword_csv,
        )?;
        if let Some(counts) = &p.counts {
            write(
                &dir.join("counts").join(format!("{stem}.csv")),
                &counts.to_csv()?,
            )?;
            write(
                &dir.join("counts").join(format!("{stem}.json")),
                &counts.to_json()?,
            )?;
        }
    }
    Ok(())
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    write(path, contents)
}
