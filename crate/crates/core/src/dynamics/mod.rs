//! Stochastic epidemic engines.
//!
//! * [`gillespie_run`]: exact event-driven SIR/SIRS on a contact graph, with
//!   optional mid-run interventions.
//! * [`gillespie_well_mixed`]: the same event loop on a mass-action
//!   population where only compartment counts matter.
//! * [`abm_run`]: discrete-time, synchronous agent-based SIR with Bernoulli
//!   transitions.
//!
//! All engines emit a [`Trajectory`] of compartment counts.

mod abm;
mod events;
mod network;
mod state;
mod trajectory;
mod well_mixed;

pub use abm::abm_run;
pub use events::{
    compute_event_rates, sample_waiting_time, select_event, waiting_time_from_uniform, AbsorbingState, EventKind,
    EventRates,
};
pub use network::{gillespie_run, NetworkSimulation, StepOutcome};
pub use state::{init_state, CompartmentState, InitialInfected};
pub use trajectory::{summarize_trajectory, Engine, Sample, Trajectory, TrajectorySummary};
pub use well_mixed::{gillespie_well_mixed, WellMixedSimulation};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("inconsistent state: {0}")]
    InconsistentState(String),
    #[error("transition probability {value} exceeds 1 at step {step} ({what})")]
    ProbabilityOverflow {
        what: &'static str,
        value: f64,
        step: usize,
    },
    #[error("cannot summarize an empty trajectory")]
    EmptyTrajectory,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Disease state of a single node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Compartment {
    Susceptible,
    Infected,
    Recovered,
}

impl Compartment {
    /// Numeric label used by the agent-based model: 1, 2, 3 for S, I, R.
    pub fn code(self) -> u8 {
        match self {
            Compartment::Susceptible => 1,
            Compartment::Infected => 2,
            Compartment::Recovered => 3,
        }
    }
}

/// Transition rates of the SIR/SIRS process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateParams {
    /// Infection rate per S–I contact per unit time.
    pub beta: f64,
    /// Recovery rate per infected node.
    pub gamma: f64,
    /// Waning-immunity rate per recovered node; zero gives plain SIR.
    #[serde(default)]
    pub alpha: f64,
}

impl RateParams {
    pub fn new(beta: f64, gamma: f64, alpha: f64) -> Result<Self, SimError> {
        let p = Self { beta, gamma, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn sir(beta: f64, gamma: f64) -> Result<Self, SimError> {
        Self::new(beta, gamma, 0.0)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, v) in [("beta", self.beta), ("gamma", self.gamma), ("alpha", self.alpha)] {
            if !v.is_finite() || v < 0.0 {
                return Err(SimError::InvalidParameter(format!(
                    "{name}={v} must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }

    pub fn is_sir(&self) -> bool {
        self.alpha == 0.0
    }
}

/// Shared run controls for the Gillespie engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub t_max: f64,
    pub seed: u64,
    /// Record every `record_stride`-th event (1 records all of them). The
    /// final state is always recorded.
    pub record_stride: usize,
}

impl RunOptions {
    pub fn new(t_max: f64, seed: u64) -> Self {
        Self {
            t_max,
            seed,
            record_stride: 1,
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        if !(self.t_max > 0.0) {
            return Err(SimError::InvalidParameter(format!("t_max={} must be > 0", self.t_max)));
        }
        if self.record_stride == 0 {
            return Err(SimError::InvalidParameter("record_stride must be >= 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_validation() {
        assert!(RateParams::new(0.1, 1.0, 0.0).is_ok());
        assert!(RateParams::new(-0.1, 1.0, 0.0).is_err());
        assert!(RateParams::new(0.1, f64::NAN, 0.0).is_err());
        assert!(RateParams::sir(0.2, 1.0).unwrap().is_sir());
    }

    #[test]
    fn alpha_defaults_to_zero() {
        let p: RateParams = serde_json::from_str(r#"{"beta":0.1,"gamma":1.0}"#).unwrap();
        assert_eq!(p.alpha, 0.0);
    }

    #[test]
    fn eq4_state_codes() {
        assert_eq!(Compartment::Susceptible.code(), 1);
        assert_eq!(Compartment::Infected.code(), 2);
        assert_eq!(Compartment::Recovered.code(), 3);
    }
}
