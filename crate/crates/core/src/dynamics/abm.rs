//! Discrete-time agent-based SIR.
//!
//! Each agent carries a state code (1 = S, 2 = I, 3 = R). Per step, a
//! susceptible agent becomes infected with probability `beta * I(t) / N` and
//! an infected agent recovers with probability `gamma`. All agents read the
//! counts from the start of the step, so the update is synchronous.

use rand::Rng;

use super::trajectory::{Engine, Sample, Trajectory};
use super::{Compartment, RateParams, SimError};
use crate::rng::rng_from_seed;

const S: u8 = 1;
const I: u8 = 2;
const R: u8 = 3;

pub fn abm_run(
    population: usize,
    params: &RateParams,
    init: (usize, usize, usize),
    steps: usize,
    seed: u64,
) -> Result<Trajectory, SimError> {
    params.validate()?;
    if population == 0 {
        return Err(SimError::InvalidParameter("population must be > 0".into()));
    }
    let (s0, i0, r0) = init;
    if s0 + i0 + r0 != population {
        return Err(SimError::InconsistentState(format!(
            "initial counts {s0}+{i0}+{r0} do not sum to population {population}"
        )));
    }
    if params.gamma > 1.0 {
        return Err(SimError::ProbabilityOverflow {
            what: "recovery",
            value: params.gamma,
            step: 0,
        });
    }
    debug_assert_eq!(Compartment::Susceptible.code(), S);

    let mut agents: Vec<u8> = std::iter::repeat_n(S, s0)
        .chain(std::iter::repeat_n(I, i0))
        .chain(std::iter::repeat_n(R, r0))
        .collect();
    let mut rng = rng_from_seed(seed);
    let n = population as f64;
    let (mut s, mut i, mut r) = init;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(Sample { t: 0.0, s, i, r });

    for step in 0..steps {
        let p_infect = params.beta * i as f64 / n;
        if p_infect > 1.0 {
            return Err(SimError::ProbabilityOverflow {
                what: "infection",
                value: p_infect,
                step,
            });
        }
        let (mut new_i, mut new_r) = (0, 0);
        for a in agents.iter_mut() {
            match *a {
                S if rng.gen::<f64>() < p_infect => {
                    *a = I;
                    new_i += 1;
                }
                I if rng.gen::<f64>() < params.gamma => {
                    *a = R;
                    new_r += 1;
                }
                _ => {}
            }
        }
        s -= new_i;
        i = i + new_i - new_r;
        r += new_r;
        samples.push(Sample {
            t: (step + 1) as f64,
            s,
            i,
            r,
        });
    }
    Ok(Trajectory {
        engine: Engine::Abm,
        seed,
        population,
        samples,
        t_end: steps as f64,
        events: steps as u64,
        interventions_applied: Vec::new(),
    })
}
