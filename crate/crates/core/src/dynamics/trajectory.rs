use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    NetworkGillespie,
    WellMixedGillespie,
    Abm,
    Ode,
}

/// Compartment counts at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub s: usize,
    pub i: usize,
    pub r: usize,
}

impl Sample {
    pub fn total(&self) -> usize {
        self.s + self.i + self.r
    }
}

/// Time series emitted by a stochastic engine. The state between samples is
/// constant (right-continuous step function) up to `t_end`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub engine: Engine,
    pub seed: u64,
    pub population: usize,
    pub samples: Vec<Sample>,
    /// Time up to which the run is valid: the horizon, or the absorption
    /// time if the process stopped earlier.
    pub t_end: f64,
    /// Number of events (or steps, for the agent-based model) executed.
    pub events: u64,
    /// Times at which interventions were applied.
    pub interventions_applied: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub peak_infected_fraction: f64,
    pub peak_time: f64,
    pub final_recovered_fraction: f64,
    /// Final recovered fraction not accounted for by the initially infected
    /// or recovered nodes, i.e. recoveries caused by transmission.
    pub epidemic_scope: f64,
    pub total_events: u64,
    pub seed: u64,
}

impl Trajectory {
    /// State in effect at time `t` (the last sample at or before `t`).
    pub fn state_at(&self, t: f64) -> Option<Sample> {
        let idx = self.samples.partition_point(|s| s.t <= t);
        if idx == 0 {
            None
        } else {
            Some(self.samples[idx - 1])
        }
    }

    /// Infected fraction evaluated at each grid time; times beyond `t_end`
    /// hold the final state.
    pub fn infected_fraction_on_grid(&self, grid: &[f64]) -> Vec<f64> {
        self.fractions_on_grid(grid).into_iter().map(|[_, i, _]| i).collect()
    }

    /// `[s, i, r]` fractions at each grid time.
    pub fn fractions_on_grid(&self, grid: &[f64]) -> Vec<[f64; 3]> {
        let n = self.population.max(1) as f64;
        let mut out = Vec::with_capacity(grid.len());
        let mut idx = 0;
        for &t in grid {
            while idx + 1 < self.samples.len() && self.samples[idx + 1].t <= t {
                idx += 1;
            }
            let s = self.samples[idx];
            out.push([s.s as f64 / n, s.i as f64 / n, s.r as f64 / n]);
        }
        out
    }

    /// Largest infected fraction over the closed window `[start, end]`.
    pub fn max_infected_fraction_in(&self, start: f64, end: f64) -> f64 {
        let n = self.population.max(1) as f64;
        let at_start = self.state_at(start).map_or(0, |s| s.i);
        self.samples
            .iter()
            .filter(|s| s.t > start && s.t <= end)
            .map(|s| s.i)
            .fold(at_start, usize::max) as f64
            / n
    }

    /// CSV with header `t,S,I,R` and one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * self.samples.len() + 8);
        out.push_str("t,S,I,R\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{},{}", s.t, s.s, s.i, s.r);
        }
        out
    }
}

pub fn summarize_trajectory(t: &Trajectory) -> Result<TrajectorySummary, SimError> {
    let last = t.samples.last().ok_or(SimError::EmptyTrajectory)?;
    let first = t.samples[0];
    let n = t.population.max(1) as f64;
    let mut peak = t.samples[0];
    for s in &t.samples[1..] {
        if s.i > peak.i {
            peak = *s;
        }
    }
    Ok(TrajectorySummary {
        peak_infected_fraction: peak.i as f64 / n,
        peak_time: peak.t,
        final_recovered_fraction: last.r as f64 / n,
        epidemic_scope: last.r.saturating_sub(first.r + first.i) as f64 / n,
        total_events: t.events,
        seed: t.seed,
    })
}
