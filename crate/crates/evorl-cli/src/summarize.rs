//! Across-replicate summary statistics for trajectory sets.

use evorl_core::scenarios::TrajectorySet;

use crate::CliError;

/// Per-step across-replicate statistics for every observable.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    /// What a step means: `"generation"` or `"episode"`.
    pub step_label: &'static str,
    /// Observable names, matching `stats` entries by position.
    pub observables: Vec<&'static str>,
    /// One row per step in trajectory order.
    pub rows: Vec<SummaryRow>,
    /// True when the run had a single replicate, in which case every
    /// standard error is 0 by convention rather than by estimation.
    pub se_degenerate: bool,
}

/// Statistics at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    /// Generation or episode index.
    pub step: u64,
    /// `(mean, standard_error)` per observable.
    pub stats: Vec<(f64, f64)>,
}

/// Across-replicate mean and standard error per step per observable.
///
/// Requires at least one record and the same step sequence in every
/// replicate; ragged sets are rejected.
pub fn summarize(set: &TrajectorySet) -> Result<SummaryTable, CliError> {
    if set.records.is_empty() {
        return Err(CliError::Runtime(
            "cannot summarize an empty trajectory set".into(),
        ));
    }

    // Records arrive sorted by (replicate, step); split into replicates and
    // insist on a uniform step sequence.
    let mut per_rep: Vec<(u32, Vec<usize>)> = Vec::new();
    for (i, rec) in set.records.iter().enumerate() {
        match per_rep.last_mut() {
            Some((rep, idx)) if *rep == rec.replicate => idx.push(i),
            _ => per_rep.push((rec.replicate, vec![i])),
        }
    }
    let reference: Vec<u64> = per_rep[0].1.iter().map(|&i| set.records[i].step).collect();
    for (rep, idx) in &per_rep[1..] {
        let steps: Vec<u64> = idx.iter().map(|&i| set.records[i].step).collect();
        if steps != reference {
            return Err(CliError::Runtime(format!(
                "ragged trajectory set: replicate {rep} has {} steps where replicate {} has {}",
                steps.len(),
                per_rep[0].0,
                reference.len()
            )));
        }
    }

    let n = per_rep.len();
    let observables = set.observables.clone();
    let mut rows = Vec::with_capacity(reference.len());
    for (pos, &step) in reference.iter().enumerate() {
        let mut stats = Vec::with_capacity(observables.len());
        for obs in 0..observables.len() {
            // Welford's running moments: exact mean for constant inputs and
            // a numerically stable variance.
            let mut mean = 0.0;
            let mut m2 = 0.0;
            for (k, (_, idx)) in per_rep.iter().enumerate() {
                let v = set.records[idx[pos]].values[obs];
                let delta = v - mean;
                mean += delta / (k + 1) as f64;
                m2 += delta * (v - mean);
            }
            let se = if n < 2 {
                0.0
            } else {
                (m2 / (n - 1) as f64 / n as f64).sqrt()
            };
            stats.push((mean, se));
        }
        rows.push(SummaryRow { step, stats });
    }

    Ok(SummaryTable {
        step_label: set.step_label,
        observables,
        rows,
        se_degenerate: n < 2,
    })
}
