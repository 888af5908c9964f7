//! Run execution: manifest bookkeeping, CSV serialization, and cleanup.
//!
//! A run writes three files into its output directory:
//!
//! - `manifest.json`: resolved config snapshot, seed, engine version,
//!   timestamps, output names, and status. Written with status `running`
//!   before the simulation starts and finalized afterwards, so a crash
//!   leaves an honest record behind.
//! - `trajectories.csv`: one row per (replicate, step).
//! - `summary.csv`: across-replicate mean and standard error per step.
//!
//! Numbers are printed in Rust's shortest round-trip form, so identical
//! (config, seed) pairs produce byte-identical CSVs. Timestamps exist only
//! in the manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use evorl_core::scenarios::{run_scenario, ScenarioConfig, TrajectorySet};
use evorl_core::stream::StreamTree;
use serde::Serialize;

use crate::config::{snapshot, RawConfig};
use crate::summarize::{summarize, SummaryTable};
use crate::{CliError, VERSION};

const TRAJECTORIES: &str = "trajectories.csv";
const SUMMARY: &str = "summary.csv";
const MANIFEST: &str = "manifest.json";

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a RawConfig,
    seed: u64,
    version: &'a str,
    started_at: String,
    finished_at: Option<String>,
    outputs: Vec<&'static str>,
    status: String,
}

/// Paths produced by a completed run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    /// The run manifest.
    pub manifest: PathBuf,
    /// Per-(replicate, step) records.
    pub trajectories: PathBuf,
    /// Across-replicate statistics.
    pub summary: PathBuf,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

fn write_manifest(path: &Path, manifest: &Manifest) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::Runtime(format!("cannot serialize manifest: {e}")))?;
    fs::write(path, text + "\n")
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Writes a trajectory set as CSV: `replicate`, the step column, then one
/// column per observable.
pub fn write_trajectories(set: &TrajectorySet, path: &Path) -> Result<(), CliError> {
    let failed = |e: std::io::Error| {
        CliError::Runtime(format!("cannot write {}: {e}", path.display()))
    };
    let file = File::create(path).map_err(failed)?;
    let mut out = BufWriter::new(file);
    writeln!(out, "replicate,{},{}", set.step_label, set.observables.join(",")).map_err(failed)?;
    for rec in &set.records {
        write!(out, "{},{}", rec.replicate, rec.step).map_err(failed)?;
        for v in &rec.values {
            write!(out, ",{v}").map_err(failed)?;
        }
        writeln!(out).map_err(failed)?;
    }
    out.flush().map_err(failed)
}

/// Writes a summary table as CSV: the step column, `<observable>_mean` and
/// `<observable>_se` pairs, and the `se_degenerate` flag.
pub fn write_summary(table: &SummaryTable, path: &Path) -> Result<(), CliError> {
    let failed = |e: std::io::Error| {
        CliError::Runtime(format!("cannot write {}: {e}", path.display()))
    };
    let file = File::create(path).map_err(failed)?;
    let mut out = BufWriter::new(file);
    write!(out, "{}", table.step_label).map_err(failed)?;
    for obs in &table.observables {
        write!(out, ",{obs}_mean,{obs}_se").map_err(failed)?;
    }
    writeln!(out, ",se_degenerate").map_err(failed)?;
    for row in &table.rows {
        write!(out, "{}", row.step).map_err(failed)?;
        for (mean, se) in &row.stats {
            write!(out, ",{mean},{se}").map_err(failed)?;
        }
        writeln!(out, ",{}", table.se_degenerate).map_err(failed)?;
    }
    out.flush().map_err(failed)
}

/// Runs the configured scenario and writes manifest, trajectories, and
/// summary into `out_dir` (created if missing).
///
/// On failure after the manifest exists, partial CSVs are removed and the
/// manifest is finalized with an `aborted` status describing the cleanup.
pub fn execute_run(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunOutput, CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;
    let paths = RunOutput {
        manifest: out_dir.join(MANIFEST),
        trajectories: out_dir.join(TRAJECTORIES),
        summary: out_dir.join(SUMMARY),
    };

    let raw = snapshot(cfg);
    let mut manifest = Manifest {
        config: &raw,
        seed: cfg.seed,
        version: VERSION,
        started_at: now(),
        finished_at: None,
        outputs: vec![TRAJECTORIES, SUMMARY],
        status: "running".into(),
    };
    write_manifest(&paths.manifest, &manifest)?;

    match produce(cfg, &paths) {
        Ok(()) => {
            manifest.finished_at = Some(now());
            manifest.status = "complete".into();
            write_manifest(&paths.manifest, &manifest)?;
            Ok(paths)
        }
        Err(e) => {
            let mut removed = Vec::new();
            for partial in [&paths.trajectories, &paths.summary] {
                if fs::remove_file(partial).is_ok() {
                    removed.push(partial.file_name().unwrap().to_string_lossy().into_owned());
                }
            }
            manifest.finished_at = Some(now());
            manifest.status = if removed.is_empty() {
                format!("aborted: {e}")
            } else {
                format!("aborted: {e}; removed partial outputs: {}", removed.join(", "))
            };
            write_manifest(&paths.manifest, &manifest)?;
            Err(e)
        }
    }
}

fn produce(cfg: &ScenarioConfig, paths: &RunOutput) -> Result<(), CliError> {
    let set = run_scenario(cfg, &StreamTree::new(cfg.seed))
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    write_trajectories(&set, &paths.trajectories)?;
    let table = summarize(&set)?;
    write_summary(&table, &paths.summary)
}
