//! Replicate runs over parameter points.
//!
//! Replicate `j` of any point uses seed `base_seed + j`; the graph, the
//! initial infected set and the event loop each draw from their own stream
//! derived from that seed. Replicates run on the rayon pool, results are
//! collected in replicate order, so aggregates do not depend on scheduling.

use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::MeanStd;
use super::ExperimentError;
use crate::dynamics::{
    gillespie_run, gillespie_well_mixed, init_state, summarize_trajectory, InitialInfected, RateParams, RunOptions,
    Trajectory, TrajectorySummary,
};
use crate::graph::{generate, read_edge_list_file, EdgeListOptions, GeneratorParams, Graph, GraphModel};
use crate::interventions::InterventionSpec;
use crate::rng::{derive_seed, GRAPH_STREAM, INIT_STREAM, RUN_STREAM};

/// Where the contact structure of a sweep comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NetworkSource {
    Er {
        n: usize,
        p: f64,
    },
    Ws {
        n: usize,
        k: usize,
        p_rewire: f64,
    },
    Ba {
        n: usize,
        m: usize,
    },
    EdgeList {
        path: PathBuf,
        #[serde(default)]
        compact_ids: bool,
    },
    WellMixed {
        n: usize,
        k_avg: f64,
    },
    /// A graph already in memory. Not representable in config files.
    #[serde(skip)]
    Fixed {
        label: String,
        graph: Arc<Graph>,
    },
}

impl NetworkSource {
    pub fn from_model(model: GraphModel) -> Self {
        match model {
            GraphModel::Er { n, p } => NetworkSource::Er { n, p },
            GraphModel::Ws { n, k, p_rewire } => NetworkSource::Ws { n, k, p_rewire },
            GraphModel::Ba { n, m } => NetworkSource::Ba { n, m },
        }
    }

    pub fn fixed(label: impl Into<String>, graph: Graph) -> Self {
        NetworkSource::Fixed {
            label: label.into(),
            graph: Arc::new(graph),
        }
    }

    pub fn graph_model(&self) -> Option<GraphModel> {
        match *self {
            NetworkSource::Er { n, p } => Some(GraphModel::Er { n, p }),
            NetworkSource::Ws { n, k, p_rewire } => Some(GraphModel::Ws { n, k, p_rewire }),
            NetworkSource::Ba { n, m } => Some(GraphModel::Ba { n, m }),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            NetworkSource::Er { .. } => "ER".into(),
            NetworkSource::Ws { .. } => "WS".into(),
            NetworkSource::Ba { .. } => "BA".into(),
            NetworkSource::EdgeList { path, .. } => path
                .file_stem()
                .map_or_else(|| "edge-list".into(), |s| s.to_string_lossy().into_owned()),
            NetworkSource::WellMixed { .. } => "well-mixed".into(),
            NetworkSource::Fixed { label, .. } => label.clone(),
        }
    }

    /// Loads file-backed graphs once and validates generator parameters.
    pub fn prepare(&self) -> Result<PreparedNetwork, ExperimentError> {
        if let Some(model) = self.graph_model() {
            model.validate()?;
            return Ok(PreparedNetwork::Generated(model));
        }
        match self {
            NetworkSource::EdgeList { path, compact_ids } => {
                let loaded = read_edge_list_file(
                    path,
                    EdgeListOptions {
                        compact_ids: *compact_ids,
                    },
                )?;
                Ok(PreparedNetwork::Fixed(Arc::new(loaded.graph)))
            }
            NetworkSource::WellMixed { n, k_avg } => {
                if *n == 0 || !(*k_avg >= 0.0) {
                    return Err(ExperimentError::InvalidSpec(format!(
                        "well-mixed population needs n > 0 and k_avg >= 0, got n={n}, k_avg={k_avg}"
                    )));
                }
                Ok(PreparedNetwork::WellMixed { n: *n, k_avg: *k_avg })
            }
            NetworkSource::Fixed { graph, .. } => Ok(PreparedNetwork::Fixed(graph.clone())),
            _ => unreachable!("generator sources handled above"),
        }
    }
}

/// A network source ready to produce per-replicate contact structures.
#[derive(Debug, Clone)]
pub enum PreparedNetwork {
    /// A fresh graph is drawn for every replicate.
    Generated(GraphModel),
    Fixed(Arc<Graph>),
    WellMixed {
        n: usize,
        k_avg: f64,
    },
}

impl PreparedNetwork {
    pub fn population(&self) -> usize {
        match self {
            PreparedNetwork::Generated(m) => m.node_count(),
            PreparedNetwork::Fixed(g) => g.node_count(),
            PreparedNetwork::WellMixed { n, .. } => *n,
        }
    }
}

/// How the windowed peak column is measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasurementWindow {
    /// No windowed measurement.
    #[default]
    None,
    /// Window `[trigger + delay_fraction * (t_max - trigger), t_max]` after
    /// the intervention trigger.
    AfterTrigger { delay_fraction: f64 },
}

fn default_fraction() -> f64 {
    0.01
}

fn default_replicates() -> usize {
    50
}

/// A replicate sweep over infection rates on one network.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub network: NetworkSource,
    pub betas: Vec<f64>,
    pub gamma: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default = "default_fraction")]
    pub initial_fraction: f64,
    pub t_max: f64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub intervention: Option<InterventionSpec>,
    #[serde(default)]
    pub window: MeasurementWindow,
}

impl SweepSpec {
    pub fn new(network: NetworkSource, betas: Vec<f64>, gamma: f64, t_max: f64) -> Self {
        Self {
            network,
            betas,
            gamma,
            alpha: 0.0,
            initial_fraction: default_fraction(),
            t_max,
            replicates: default_replicates(),
            base_seed: 0,
            intervention: None,
            window: MeasurementWindow::None,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.replicates == 0 {
            return Err(ExperimentError::InvalidSpec("replicates must be >= 1".into()));
        }
        if self.betas.is_empty() {
            return Err(ExperimentError::InvalidSpec("beta grid is empty".into()));
        }
        if let Some(b) = self.betas.iter().find(|b| !(**b >= 0.0) || !b.is_finite()) {
            return Err(ExperimentError::InvalidSpec(format!(
                "beta {b} must be finite and >= 0"
            )));
        }
        RateParams::new(0.0, self.gamma, self.alpha)?;
        if !(self.initial_fraction > 0.0 && self.initial_fraction <= 1.0) {
            return Err(ExperimentError::InvalidSpec(format!(
                "initial fraction {} outside (0, 1]",
                self.initial_fraction
            )));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(ExperimentError::InvalidSpec(format!(
                "t_max {} must be > 0",
                self.t_max
            )));
        }
        if let Some(iv) = &self.intervention {
            iv.validate()?;
            if matches!(self.network, NetworkSource::WellMixed { .. }) {
                return Err(ExperimentError::InvalidSpec(
                    "interventions need a network, not a well-mixed population".into(),
                ));
            }
        }
        if let MeasurementWindow::AfterTrigger { delay_fraction } = self.window {
            if self.intervention.is_none() {
                return Err(ExperimentError::InvalidSpec(
                    "after-trigger window needs an intervention".into(),
                ));
            }
            if !(0.0..=1.0).contains(&delay_fraction) {
                return Err(ExperimentError::InvalidSpec(format!(
                    "delay fraction {delay_fraction} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    fn window_bounds(&self) -> Option<(f64, f64)> {
        match (self.window, self.intervention) {
            (MeasurementWindow::AfterTrigger { delay_fraction }, Some(iv)) => {
                let trigger = iv.trigger_time.min(self.t_max);
                Some((trigger + delay_fraction * (self.t_max - trigger), self.t_max))
            }
            _ => None,
        }
    }
}

/// One finished replicate.
#[derive(Debug, Clone)]
pub struct ReplicateOutcome {
    pub summary: TrajectorySummary,
    pub windowed_peak: Option<f64>,
    pub trajectory: Trajectory,
}

/// Aggregated summary statistics of one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub replicates: usize,
    pub scope: MeanStd,
    pub peak_fraction: MeanStd,
    pub peak_time: MeanStd,
    pub windowed_peak: Option<MeanStd>,
}

impl PointSummary {
    pub fn from_outcomes(outcomes: &[ReplicateOutcome]) -> Self {
        let collect =
            |f: &dyn Fn(&ReplicateOutcome) -> f64| MeanStd::from_values(&outcomes.iter().map(f).collect::<Vec<_>>());
        let windowed: Option<Vec<f64>> = outcomes.iter().map(|o| o.windowed_peak).collect();
        Self {
            replicates: outcomes.len(),
            scope: collect(&|o| o.summary.epidemic_scope),
            peak_fraction: collect(&|o| o.summary.peak_infected_fraction),
            peak_time: collect(&|o| o.summary.peak_time),
            windowed_peak: windowed.map(|w| MeanStd::from_values(&w)),
        }
    }
}

/// Runs one replicate of `spec` at infection rate `beta` with the given seed.
pub fn run_single(
    network: &PreparedNetwork,
    spec: &SweepSpec,
    beta: f64,
    seed: u64,
) -> Result<ReplicateOutcome, ExperimentError> {
    let params = RateParams::new(beta, spec.gamma, spec.alpha)?;
    let opts = RunOptions::new(spec.t_max, derive_seed(seed, RUN_STREAM));
    let initial = InitialInfected::Fraction(spec.initial_fraction);
    let trajectory = match network {
        PreparedNetwork::WellMixed { n, k_avg } => {
            let i0 = initial.resolve(*n)?;
            gillespie_well_mixed(*n, *k_avg, &params, (n - i0, i0, 0), &opts)?
        }
        PreparedNetwork::Generated(model) => {
            let g = generate(&GeneratorParams {
                model: *model,
                seed: derive_seed(seed, GRAPH_STREAM),
            })?;
            run_on_graph(&g, spec, &params, initial, seed, &opts)?
        }
        PreparedNetwork::Fixed(g) => run_on_graph(g, spec, &params, initial, seed, &opts)?,
    };
    let summary = summarize_trajectory(&trajectory)?;
    let windowed_peak = spec
        .window_bounds()
        .map(|(start, end)| trajectory.max_infected_fraction_in(start, end));
    Ok(ReplicateOutcome {
        summary,
        windowed_peak,
        trajectory,
    })
}

fn run_on_graph(
    g: &Graph,
    spec: &SweepSpec,
    params: &RateParams,
    initial: InitialInfected,
    seed: u64,
    opts: &RunOptions,
) -> Result<Trajectory, ExperimentError> {
    let init = init_state(g, initial, derive_seed(seed, INIT_STREAM))?;
    let interventions: Vec<InterventionSpec> = spec.intervention.into_iter().collect();
    Ok(gillespie_run(g, params, &init, opts, &interventions)?)
}

/// Runs all replicates of one point, in parallel, in replicate order.
pub fn run_point_outcomes(
    network: &PreparedNetwork,
    spec: &SweepSpec,
    beta: f64,
) -> Result<Vec<ReplicateOutcome>, ExperimentError> {
    (0..spec.replicates)
        .into_par_iter()
        .map(|j| {
            run_single(network, spec, beta, spec.base_seed.wrapping_add(j as u64)).map_err(|e| {
                ExperimentError::AtPoint {
                    network: spec.network.label(),
                    beta,
                    replicate: j,
                    source: Box::new(e),
                }
            })
        })
        .collect()
}

/// Executes `spec.replicates` runs at infection rate `beta` and aggregates
/// their summaries.
pub fn run_replicates(spec: &SweepSpec, beta: f64) -> Result<PointSummary, ExperimentError> {
    spec.validate()?;
    let network = spec.network.prepare()?;
    let outcomes = run_point_outcomes(&network, spec, beta)?;
    Ok(PointSummary::from_outcomes(&outcomes))
}
