//! Propensities, waiting times and event selection of the direct method.

use rand::Rng;
use thiserror::Error;

use super::{CompartmentState, RateParams};
use crate::graph::Graph;
use crate::rng::SimRng;

/// Total propensity is zero: no further event can occur.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("absorbing state: total event rate is zero")]
pub struct AbsorbingState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// S -> I
    Infection,
    /// I -> R
    Recovery,
    /// R -> S
    Waning,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRates {
    pub a_infection: f64,
    pub a_recovery: f64,
    pub a_waning: f64,
    pub a_total: f64,
}

impl EventRates {
    pub fn new(a_infection: f64, a_recovery: f64, a_waning: f64) -> Self {
        Self {
            a_infection,
            a_recovery,
            a_waning,
            a_total: a_infection + a_recovery + a_waning,
        }
    }
}

/// Network propensities: infection is `beta` per S–I edge.
pub fn compute_event_rates(_g: &Graph, s: &CompartmentState, p: &RateParams) -> EventRates {
    EventRates::new(
        p.beta * s.si_edges() as f64,
        p.gamma * s.infected() as f64,
        p.alpha * s.recovered() as f64,
    )
}

/// `tau = -ln(u) / a_total`.
pub fn waiting_time_from_uniform(a_total: f64, u: f64) -> Result<f64, AbsorbingState> {
    if !(a_total > 0.0) {
        return Err(AbsorbingState);
    }
    Ok(-u.ln() / a_total)
}

/// Exponentially distributed time to the next event.
///
/// `u` is drawn from the open interval (0, 1) so that `tau` is strictly
/// positive and finite.
pub fn sample_waiting_time(a_total: f64, rng: &mut SimRng) -> Result<f64, AbsorbingState> {
    if !(a_total > 0.0) {
        return Err(AbsorbingState);
    }
    let u = loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            break u;
        }
    };
    waiting_time_from_uniform(a_total, u)
}

/// Picks an event class with probability proportional to its propensity.
pub fn select_event(rates: &EventRates, rng: &mut SimRng) -> Result<EventKind, AbsorbingState> {
    if !(rates.a_total > 0.0) {
        return Err(AbsorbingState);
    }
    let x = rng.gen::<f64>() * rates.a_total;
    Ok(classify(rates, x))
}

fn classify(rates: &EventRates, x: f64) -> EventKind {
    if x < rates.a_infection {
        EventKind::Infection
    } else if x < rates.a_infection + rates.a_recovery {
        EventKind::Recovery
    } else if rates.a_waning > 0.0 {
        EventKind::Waning
    } else if rates.a_recovery > 0.0 {
        // rounding at the upper edge
        EventKind::Recovery
    } else {
        EventKind::Infection
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{init_state, InitialInfected};
    use crate::rng::rng_from_seed;

    #[test]
    fn triangle_rates() {
        let g = Graph::complete(3);
        let s = init_state(&g, InitialInfected::Count(1), 1).unwrap();
        let r = compute_event_rates(&g, &s, &RateParams::new(0.5, 1.0, 0.0).unwrap());
        assert_eq!(
            (r.a_infection, r.a_recovery, r.a_waning, r.a_total),
            (1.0, 1.0, 0.0, 2.0)
        );
    }

    #[test]
    fn only_waning_when_all_recovered() {
        let g = Graph::complete(10);
        let labels = vec![crate::dynamics::Compartment::Recovered; 10];
        let s = CompartmentState::from_labels(&g, labels).unwrap();
        let r = compute_event_rates(&g, &s, &RateParams::new(0.3, 1.0, 0.2).unwrap());
        assert!((r.a_total - 2.0).abs() < 1e-12);
        assert_eq!(r.a_infection + r.a_recovery, 0.0);
        let mut rng = rng_from_seed(1);
        for _ in 0..100 {
            assert_eq!(select_event(&r, &mut rng), Ok(EventKind::Waning));
        }
    }

    #[test]
    fn waiting_time_inversion() {
        let tau = waiting_time_from_uniform(2.0, (-2.0f64).exp()).unwrap();
        assert!((tau - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_rate_is_absorbing() {
        let mut rng = rng_from_seed(1);
        assert_eq!(sample_waiting_time(0.0, &mut rng), Err(AbsorbingState));
        assert_eq!(
            select_event(&EventRates::new(0.0, 0.0, 0.0), &mut rng),
            Err(AbsorbingState)
        );
    }

    #[test]
    fn exponential_mean() {
        let mut rng = rng_from_seed(77);
        let n = 100_000;
        let mean = (0..n).map(|_| sample_waiting_time(1.0, &mut rng).unwrap()).sum::<f64>() / n as f64;
        // Exp(1) has unit variance.
        let sigma = 1.0 / (n as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn selection_probability_from_class_bounds() {
        // (1, 3, 0): the recovery slice covers [1, 4) of a total of 4.
        let r = EventRates::new(1.0, 3.0, 0.0);
        assert_eq!(classify(&r, 0.99), EventKind::Infection);
        assert_eq!(classify(&r, 1.0), EventKind::Recovery);
        assert_eq!(classify(&r, 3.99), EventKind::Recovery);
        let mut rng = rng_from_seed(3);
        let n = 100_000;
        let rec = (0..n)
            .filter(|_| select_event(&r, &mut rng).unwrap() == EventKind::Recovery)
            .count() as f64
            / n as f64;
        let sigma = (0.75f64 * 0.25 / n as f64).sqrt();
        assert!((rec - 0.75).abs() < 3.0 * sigma);
    }

    #[test]
    fn single_class_always_selected() {
        let r = EventRates::new(5.0, 0.0, 0.0);
        let mut rng = rng_from_seed(3);
        assert!((0..1000).all(|_| select_event(&r, &mut rng) == Ok(EventKind::Infection)));
    }

    #[test]
    fn multinomial_frequencies() {
        let r = EventRates::new(1.0, 1.0, 2.0);
        let mut rng = rng_from_seed(2024);
        let n = 100_000usize;
        let mut hits = [0usize; 3];
        for _ in 0..n {
            let k = match select_event(&r, &mut rng).unwrap() {
                EventKind::Infection => 0,
                EventKind::Recovery => 1,
                EventKind::Waning => 2,
            };
            hits[k] += 1;
        }
        for (h, p) in hits.iter().zip([0.25, 0.25, 0.5]) {
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((*h as f64 - n as f64 * p).abs() < 3.0 * sigma, "{hits:?}");
        }
    }
}
