//! Gillespie simulation of a homogeneously mixed population.
//!
//! Only the compartment counts matter. The infection propensity is
//! `beta * k_avg * S * I / n`, so the epidemic threshold sits at
//! `beta * k_avg / gamma = 1`, the same place as on a network with mean
//! degree `k_avg`.

use super::events::{sample_waiting_time, select_event, EventKind, EventRates};
use super::trajectory::{Engine, Sample, Trajectory};
use super::{RateParams, RunOptions, SimError};
use crate::rng::{rng_from_seed, SimRng};

pub struct WellMixedSimulation {
    population: usize,
    k_avg: f64,
    params: RateParams,
    s: usize,
    i: usize,
    r: usize,
    time: f64,
    rng: SimRng,
}

impl WellMixedSimulation {
    pub fn new(
        population: usize,
        k_avg: f64,
        params: RateParams,
        init: (usize, usize, usize),
        seed: u64,
    ) -> Result<Self, SimError> {
        params.validate()?;
        if population == 0 {
            return Err(SimError::InvalidParameter("population must be > 0".into()));
        }
        if !(k_avg >= 0.0) || !k_avg.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "k_avg={k_avg} must be finite and >= 0"
            )));
        }
        let (s, i, r) = init;
        if s + i + r != population {
            return Err(SimError::InconsistentState(format!(
                "initial counts {s}+{i}+{r} do not sum to population {population}"
            )));
        }
        Ok(Self {
            population,
            k_avg,
            params,
            s,
            i,
            r,
            time: 0.0,
            rng: rng_from_seed(seed),
        })
    }

    pub fn rates(&self) -> EventRates {
        let n = self.population as f64;
        EventRates::new(
            self.params.beta * self.k_avg * self.s as f64 * self.i as f64 / n,
            self.params.gamma * self.i as f64,
            self.params.alpha * self.r as f64,
        )
    }

    pub fn sample(&self) -> Sample {
        Sample {
            t: self.time,
            s: self.s,
            i: self.i,
            r: self.r,
        }
    }

    /// Advances by one event. Returns `None` on absorption or when the next
    /// event would pass `t_max` (the clock is then set to `t_max`).
    pub fn step(&mut self, t_max: f64) -> Option<EventKind> {
        let rates = self.rates();
        let tau = sample_waiting_time(rates.a_total, &mut self.rng).ok()?;
        if self.time + tau > t_max {
            self.time = t_max;
            return None;
        }
        self.time += tau;
        let kind = select_event(&rates, &mut self.rng).expect("positive total rate");
        match kind {
            EventKind::Infection => {
                self.s -= 1;
                self.i += 1;
            }
            EventKind::Recovery => {
                self.i -= 1;
                self.r += 1;
            }
            EventKind::Waning => {
                self.r -= 1;
                self.s += 1;
            }
        }
        Some(kind)
    }
}

pub fn gillespie_well_mixed(
    population: usize,
    k_avg: f64,
    params: &RateParams,
    init: (usize, usize, usize),
    opts: &RunOptions,
) -> Result<Trajectory, SimError> {
    opts.validate()?;
    let mut sim = WellMixedSimulation::new(population, k_avg, *params, init, opts.seed)?;
    let mut samples = vec![sim.sample()];
    let mut events = 0u64;
    let mut since_record = 0;
    while sim.step(opts.t_max).is_some() {
        events += 1;
        since_record += 1;
        if since_record == opts.record_stride {
            samples.push(sim.sample());
            since_record = 0;
        }
    }
    if since_record > 0 {
        samples.push(sim.sample());
    }
    Ok(Trajectory {
        engine: Engine::WellMixedGillespie,
        seed: opts.seed,
        population,
        samples,
        t_end: sim.time,
        events,
        interventions_applied: Vec::new(),
    })
}
