//! The four reference experiments: epidemic scope versus infection rate,
//! ER versus BA across densities, lockdown timing, and SIRS waves.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::stats::{block_average, local_maxima};
use super::{
    run_point_outcomes, sweep, ExperimentError, ExperimentTable, MeasurementWindow, NetworkSource, PointSummary,
    SweepSpec,
};
use crate::interventions::InterventionSpec;

/// Epidemic scope as a function of the infection rate.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScopeSweepConfig {
    pub networks: Vec<NetworkSource>,
    pub betas: Vec<f64>,
    pub gamma: f64,
    pub initial_fraction: f64,
    pub t_max: f64,
    pub replicates: usize,
    pub base_seed: u64,
}

impl Default for ScopeSweepConfig {
    fn default() -> Self {
        Self {
            networks: vec![
                NetworkSource::Ba { n: 1000, m: 5 },
                NetworkSource::Er { n: 1000, p: 0.01 },
                NetworkSource::Ws {
                    n: 1000,
                    k: 10,
                    p_rewire: 0.1,
                },
                NetworkSource::WellMixed { n: 1000, k_avg: 10.0 },
            ],
            betas: beta_grid(0.3, 0.01),
            gamma: 1.0,
            initial_fraction: 0.01,
            t_max: 100.0,
            replicates: 50,
            base_seed: 0,
        }
    }
}

/// `0, step, 2 step, ..., max` (inclusive up to rounding).
pub fn beta_grid(max: f64, step: f64) -> Vec<f64> {
    let n = (max / step + 1e-9).floor() as usize;
    (0..=n).map(|j| (j as f64 * step * 1e9).round() / 1e9).collect()
}

pub fn experiment_scope_sweep(cfg: &ScopeSweepConfig) -> Result<ExperimentTable, ExperimentError> {
    let mut table = ExperimentTable::new("exp01", &["beta", "gamma", "alpha"], &[]);
    for network in &cfg.networks {
        let mut spec = SweepSpec::new(network.clone(), cfg.betas.clone(), cfg.gamma, cfg.t_max);
        spec.initial_fraction = cfg.initial_fraction;
        spec.replicates = cfg.replicates;
        spec.base_seed = cfg.base_seed;
        table.extend(sweep(&spec, "exp01")?);
    }
    Ok(table)
}

/// ER and BA graphs of equal size and matched mean degree over a density grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DensityComparisonConfig {
    pub n: usize,
    pub densities: Vec<f64>,
    pub beta: f64,
    pub gamma: f64,
    pub initial_fraction: f64,
    pub t_max: f64,
    pub replicates: usize,
    pub base_seed: u64,
}

impl Default for DensityComparisonConfig {
    fn default() -> Self {
        Self {
            n: 10_000,
            densities: vec![0.001, 0.002, 0.003, 0.005, 0.0075, 0.01],
            beta: 0.1,
            gamma: 1.0,
            initial_fraction: 0.01,
            t_max: 100.0,
            replicates: 50,
            base_seed: 0,
        }
    }
}

/// Columns: `density`, `mean_degree`, `beta`, `gamma`. For a density `d`
/// the BA graph uses `m = round(d (n - 1) / 2)` and the ER graph the exact
/// density of that BA graph, so both share `<k>`. A zero density yields an
/// edgeless ER graph for both rows.
pub fn experiment_density_comparison(cfg: &DensityComparisonConfig) -> Result<ExperimentTable, ExperimentError> {
    let mut table = ExperimentTable::new("exp02", &["density", "mean_degree", "beta", "gamma"], &[]);
    let n = cfg.n;
    if n < 2 {
        return Err(ExperimentError::InvalidSpec("density comparison needs n >= 2".into()));
    }
    let pairs = n as f64 * (n - 1) as f64 / 2.0;
    for &d in &cfg.densities {
        if !(0.0..=1.0).contains(&d) {
            return Err(ExperimentError::InvalidSpec(format!("density {d} outside [0, 1]")));
        }
        let m = (d * (n - 1) as f64 / 2.0).round() as usize;
        let (ba, p) = if m == 0 {
            (NetworkSource::Er { n, p: 0.0 }, 0.0)
        } else {
            if m >= n {
                return Err(ExperimentError::InvalidSpec(format!(
                    "density {d} too high for BA on {n} nodes"
                )));
            }
            (NetworkSource::Ba { n, m }, (m * (n - m)) as f64 / pairs)
        };
        let mean_degree = p * (n - 1) as f64;
        for (label, network) in [("ER", NetworkSource::Er { n, p }), ("BA", ba)] {
            let mut spec = SweepSpec::new(network, vec![cfg.beta], cfg.gamma, cfg.t_max);
            spec.initial_fraction = cfg.initial_fraction;
            spec.replicates = cfg.replicates;
            spec.base_seed = cfg.base_seed;
            spec.validate()?;
            let prepared = spec.network.prepare()?;
            let stats = PointSummary::from_outcomes(&run_point_outcomes(&prepared, &spec, cfg.beta)?);
            table.push(label, vec![p, mean_degree, cfg.beta, cfg.gamma], stats, vec![]);
        }
    }
    Ok(table)
}

/// Degree-cap lockdown on a BA graph introduced at different times.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InterventionTimingConfig {
    pub n: usize,
    pub m: usize,
    pub cap: usize,
    pub beta: f64,
    pub gamma: f64,
    pub triggers: Vec<f64>,
    pub t_max: f64,
    pub delay_fraction: f64,
    pub initial_fraction: f64,
    pub replicates: usize,
    pub base_seed: u64,
}

impl Default for InterventionTimingConfig {
    fn default() -> Self {
        Self {
            n: 3000,
            m: 20,
            cap: 5,
            beta: 0.1,
            gamma: 1.0,
            triggers: vec![0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5],
            t_max: 12.0,
            delay_fraction: 0.33,
            initial_fraction: 0.01,
            replicates: 50,
            base_seed: 0,
        }
    }
}

/// Columns: `trigger_time`, `beta`, `gamma`, `cap`, plus
/// `windowed_peak_mean`/`windowed_peak_std`: the largest infected fraction
/// over `[trigger + delay (t_max - trigger), t_max]`. Every row shares the
/// replicate seeds, so runs agree with the uncapped run up to the trigger.
pub fn experiment_intervention_timing(cfg: &InterventionTimingConfig) -> Result<ExperimentTable, ExperimentError> {
    let mut table = ExperimentTable::new(
        "exp03",
        &["trigger_time", "beta", "gamma", "cap"],
        &["windowed_peak_mean", "windowed_peak_std"],
    );
    for &trigger in &cfg.triggers {
        if !(trigger >= 0.0 && trigger < cfg.t_max) {
            return Err(ExperimentError::InvalidSpec(format!(
                "trigger {trigger} outside [0, t_max={})",
                cfg.t_max
            )));
        }
        let mut spec = SweepSpec::new(
            NetworkSource::Ba { n: cfg.n, m: cfg.m },
            vec![cfg.beta],
            cfg.gamma,
            cfg.t_max,
        );
        spec.initial_fraction = cfg.initial_fraction;
        spec.replicates = cfg.replicates;
        spec.base_seed = cfg.base_seed;
        spec.intervention = Some(InterventionSpec::degree_cap(trigger, cfg.cap));
        spec.window = MeasurementWindow::AfterTrigger {
            delay_fraction: cfg.delay_fraction,
        };
        let t = sweep(&spec, "exp03")?;
        for row in t.rows {
            let w = row.stats.windowed_peak.expect("window requested");
            table.push(
                row.network,
                vec![trigger, cfg.beta, cfg.gamma, cfg.cap as f64],
                row.stats,
                vec![w.mean, w.std],
            );
        }
    }
    Ok(table)
}

/// SIRS runs with waning immunity and wave counting.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SirsConfig {
    pub networks: Vec<NetworkSource>,
    pub beta: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub t_max: f64,
    pub initial_fraction: f64,
    pub replicates: usize,
    pub base_seed: u64,
    /// The smoothing window is `t_max / smoothing_bins`.
    pub smoothing_bins: usize,
    /// Grid points averaged per smoothing window.
    pub points_per_bin: usize,
    /// Local maxima at or below this infected fraction are ignored.
    pub peak_threshold: f64,
    /// Also run every network with `alpha = 0`.
    pub include_sir_control: bool,
}

impl Default for SirsConfig {
    fn default() -> Self {
        Self {
            networks: vec![
                NetworkSource::Ba { n: 1000, m: 5 },
                NetworkSource::Er { n: 1000, p: 0.01 },
                NetworkSource::Ws {
                    n: 1000,
                    k: 10,
                    p_rewire: 0.1,
                },
            ],
            beta: 0.3,
            gamma: 1.0,
            alpha: 0.2,
            t_max: 100.0,
            initial_fraction: 0.01,
            replicates: 50,
            base_seed: 0,
            smoothing_bins: 100,
            points_per_bin: 10,
            peak_threshold: 0.01,
            include_sir_control: true,
        }
    }
}

/// Replicate-mean infected fraction of one SIRS configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanCurve {
    pub network: String,
    pub alpha: f64,
    pub times: Vec<f64>,
    pub mean_infected: Vec<f64>,
    /// Midpoints of the smoothing windows.
    pub smoothed_times: Vec<f64>,
    pub smoothed: Vec<f64>,
    pub local_maxima: Vec<usize>,
}

impl MeanCurve {
    /// CSV with header `t,I_mean`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,I_mean\n");
        for (t, i) in self.times.iter().zip(&self.mean_infected) {
            let _ = writeln!(out, "{t},{i}");
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SirsResult {
    pub table: ExperimentTable,
    pub curves: Vec<MeanCurve>,
}

/// Columns: `beta`, `gamma`, `alpha`, plus `local_maxima` (count on the
/// smoothed mean infected curve) and `long_run_infected` (mean infected
/// fraction over the second half of the horizon).
pub fn experiment_sirs(cfg: &SirsConfig) -> Result<SirsResult, ExperimentError> {
    if cfg.smoothing_bins < 3 || cfg.points_per_bin == 0 {
        return Err(ExperimentError::InvalidSpec(
            "need at least 3 smoothing bins and 1 point per bin".into(),
        ));
    }
    let mut table = ExperimentTable::new(
        "exp04",
        &["beta", "gamma", "alpha"],
        &["local_maxima", "long_run_infected"],
    );
    let mut curves = Vec::new();
    let mut alphas = vec![cfg.alpha];
    if cfg.include_sir_control && cfg.alpha != 0.0 {
        alphas.push(0.0);
    }
    let points = cfg.smoothing_bins * cfg.points_per_bin;
    let step = cfg.t_max / points as f64;
    let grid: Vec<f64> = (0..points).map(|j| (j as f64 + 0.5) * step).collect();
    let bin_width = cfg.t_max / cfg.smoothing_bins as f64;
    let smoothed_times: Vec<f64> = (0..cfg.smoothing_bins).map(|b| (b as f64 + 0.5) * bin_width).collect();

    for network in &cfg.networks {
        for &alpha in &alphas {
            let mut spec = SweepSpec::new(network.clone(), vec![cfg.beta], cfg.gamma, cfg.t_max);
            spec.alpha = alpha;
            spec.initial_fraction = cfg.initial_fraction;
            spec.replicates = cfg.replicates;
            spec.base_seed = cfg.base_seed;
            spec.validate()?;
            let prepared = network.prepare()?;
            let outcomes = run_point_outcomes(&prepared, &spec, cfg.beta)?;
            let mut mean = vec![0.0; points];
            for o in &outcomes {
                for (acc, v) in mean.iter_mut().zip(o.trajectory.infected_fraction_on_grid(&grid)) {
                    *acc += v;
                }
            }
            mean.iter_mut().for_each(|v| *v /= outcomes.len() as f64);
            let smoothed = block_average(&mean, cfg.points_per_bin);
            let maxima = local_maxima(&smoothed, cfg.peak_threshold);
            let half = points / 2;
            let long_run = mean[half..].iter().sum::<f64>() / (points - half) as f64;
            let stats = PointSummary::from_outcomes(&outcomes);
            let label = network.label();
            table.push(
                label.clone(),
                vec![cfg.beta, cfg.gamma, alpha],
                stats,
                vec![maxima.len() as f64, long_run],
            );
            curves.push(MeanCurve {
                network: label,
                alpha,
                times: grid.clone(),
                mean_infected: mean,
                smoothed_times: smoothed_times.clone(),
                smoothed,
                local_maxima: maxima,
            });
        }
    }
    Ok(SirsResult { table, curves })
}
