//! Parameter sweeps over replicate seeds, aggregated into tidy tables.

mod canned;
pub mod stats;
mod sweep;

pub use canned::{
    beta_grid, experiment_density_comparison, experiment_intervention_timing, experiment_scope_sweep, experiment_sirs,
    DensityComparisonConfig, InterventionTimingConfig, MeanCurve, ScopeSweepConfig, SirsConfig, SirsResult,
};
pub use sweep::{
    run_point_outcomes, run_replicates, run_single, MeasurementWindow, NetworkSource, PointSummary, PreparedNetwork,
    ReplicateOutcome, SweepSpec,
};

use serde::Serialize;
use thiserror::Error;

use crate::dynamics::SimError;
use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{network} at beta={beta}, replicate {replicate}: {source}")]
    AtPoint {
        network: String,
        beta: f64,
        replicate: usize,
        source: Box<ExperimentError>,
    },
    #[error("csv output failed: {0}")]
    Csv(String),
}

/// One aggregated parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub network: String,
    /// Values of the table's parameter columns, in order.
    pub params: Vec<f64>,
    pub stats: PointSummary,
    /// Values of the table's experiment-specific columns, in order.
    pub extras: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentTable {
    pub experiment: String,
    pub param_names: Vec<String>,
    pub extra_names: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl ExperimentTable {
    pub fn new(experiment: &str, param_names: &[&str], extra_names: &[&str]) -> Self {
        Self {
            experiment: experiment.to_string(),
            param_names: param_names.iter().map(|s| s.to_string()).collect(),
            extra_names: extra_names.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, network: impl Into<String>, params: Vec<f64>, stats: PointSummary, extras: Vec<f64>) {
        debug_assert_eq!(params.len(), self.param_names.len());
        debug_assert_eq!(extras.len(), self.extra_names.len());
        self.rows.push(TableRow {
            network: network.into(),
            params,
            stats,
            extras,
        });
    }

    pub fn extend(&mut self, other: ExperimentTable) {
        debug_assert_eq!(self.param_names, other.param_names);
        self.rows.extend(other.rows);
    }

    /// Index of a parameter or extra column by name.
    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.param_names.iter().position(|p| p == name)
    }

    pub fn extra_index(&self, name: &str) -> Option<usize> {
        self.extra_names.iter().position(|p| p == name)
    }

    /// Rows for `network` whose parameter `name` equals `value`.
    pub fn find(&self, network: &str, name: &str, value: f64) -> Option<&TableRow> {
        let idx = self.param_index(name)?;
        self.rows
            .iter()
            .find(|r| r.network == network && (r.params[idx] - value).abs() < 1e-12)
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["experiment".to_string(), "network".to_string()];
        h.extend(self.param_names.iter().cloned());
        for stat in ["scope", "peak_fraction", "peak_time"] {
            h.push(format!("{stat}_mean"));
            h.push(format!("{stat}_std"));
        }
        h.extend(self.extra_names.iter().cloned());
        h.push("replicates".into());
        h
    }

    pub fn to_csv(&self) -> Result<String, ExperimentError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| ExperimentError::Csv(e.to_string());
        w.write_record(self.header()).map_err(err)?;
        for row in &self.rows {
            let mut rec = vec![self.experiment.clone(), row.network.clone()];
            rec.extend(row.params.iter().map(f64::to_string));
            for s in [row.stats.scope, row.stats.peak_fraction, row.stats.peak_time] {
                rec.push(s.mean.to_string());
                rec.push(s.std.to_string());
            }
            rec.extend(row.extras.iter().map(f64::to_string));
            rec.push(row.stats.replicates.to_string());
            w.write_record(&rec).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| ExperimentError::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Runs a [`SweepSpec`] at every beta of its grid.
///
/// Columns: `beta`, `gamma`, `alpha`; when the spec measures an after-trigger
/// window, `windowed_peak_mean` and `windowed_peak_std` are added.
pub fn sweep(spec: &SweepSpec, experiment: &str) -> Result<ExperimentTable, ExperimentError> {
    spec.validate()?;
    let network = spec.network.prepare()?;
    let windowed = spec.window != MeasurementWindow::None;
    let extras: &[&str] = if windowed {
        &["windowed_peak_mean", "windowed_peak_std"]
    } else {
        &[]
    };
    let mut table = ExperimentTable::new(experiment, &["beta", "gamma", "alpha"], extras);
    let label = spec.network.label();
    for &beta in &spec.betas {
        let outcomes = run_point_outcomes(&network, spec, beta)?;
        let stats = PointSummary::from_outcomes(&outcomes);
        let extra = stats.windowed_peak.map_or_else(Vec::new, |w| vec![w.mean, w.std]);
        table.push(label.clone(), vec![beta, spec.gamma, spec.alpha], stats, extra);
    }
    Ok(table)
}
