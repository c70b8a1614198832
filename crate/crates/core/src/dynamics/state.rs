use rand::seq::index;

use super::{Compartment, SimError};
use crate::graph::{Graph, NodeId};
use crate::rng::rng_from_seed;

/// How many nodes start infected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialInfected {
    Count(usize),
    /// Fraction of the population, rounded to the nearest count (at least 1).
    Fraction(f64),
}

impl InitialInfected {
    pub fn resolve(self, population: usize) -> Result<usize, SimError> {
        let count = match self {
            InitialInfected::Count(c) => c,
            InitialInfected::Fraction(f) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(SimError::InvalidParameter(format!(
                        "initial infected fraction {f} outside (0, 1]"
                    )));
                }
                ((f * population as f64).round() as usize).max(1)
            }
        };
        if count == 0 || count > population {
            return Err(SimError::InvalidParameter(format!(
                "initial infected count {count} outside 1..={population}"
            )));
        }
        Ok(count)
    }
}

/// Per-node compartment labels with cached counts and S–I edge count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompartmentState {
    labels: Vec<Compartment>,
    counts: [usize; 3],
    si_edges: usize,
}

impl CompartmentState {
    pub fn from_labels(g: &Graph, labels: Vec<Compartment>) -> Result<Self, SimError> {
        if labels.len() != g.node_count() {
            return Err(SimError::InconsistentState(format!(
                "{} labels for a graph with {} nodes",
                labels.len(),
                g.node_count()
            )));
        }
        let mut counts = [0; 3];
        for &l in &labels {
            counts[slot(l)] += 1;
        }
        let si_edges = count_si_edges(g, &labels);
        Ok(Self {
            labels,
            counts,
            si_edges,
        })
    }

    pub fn population(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, node: NodeId) -> Compartment {
        self.labels[node]
    }

    pub fn labels(&self) -> &[Compartment] {
        &self.labels
    }

    pub fn susceptible(&self) -> usize {
        self.counts[0]
    }

    pub fn infected(&self) -> usize {
        self.counts[1]
    }

    pub fn recovered(&self) -> usize {
        self.counts[2]
    }

    /// Cached number of edges joining a susceptible and an infected node.
    pub fn si_edges(&self) -> usize {
        self.si_edges
    }

    /// Checks the cached counts and S–I edge count against a full recount.
    pub fn check_consistency(&self, g: &Graph) -> Result<(), SimError> {
        let fresh = Self::from_labels(g, self.labels.clone())?;
        if fresh.counts != self.counts {
            return Err(SimError::InconsistentState(format!(
                "cached counts {:?} differ from recount {:?}",
                self.counts, fresh.counts
            )));
        }
        if fresh.si_edges != self.si_edges {
            return Err(SimError::InconsistentState(format!(
                "cached S-I edges {} differ from recount {}",
                self.si_edges, fresh.si_edges
            )));
        }
        Ok(())
    }

    pub(crate) fn set_label(&mut self, node: NodeId, to: Compartment) {
        let from = self.labels[node];
        self.counts[slot(from)] -= 1;
        self.counts[slot(to)] += 1;
        self.labels[node] = to;
    }

    pub(crate) fn set_si_edges(&mut self, si: usize) {
        self.si_edges = si;
    }
}

fn slot(c: Compartment) -> usize {
    match c {
        Compartment::Susceptible => 0,
        Compartment::Infected => 1,
        Compartment::Recovered => 2,
    }
}

pub(crate) fn count_si_edges(g: &Graph, labels: &[Compartment]) -> usize {
    g.edges()
        .filter(|&(u, v)| {
            matches!(
                (labels[u], labels[v]),
                (Compartment::Susceptible, Compartment::Infected) | (Compartment::Infected, Compartment::Susceptible)
            )
        })
        .count()
}

/// Infects a uniformly random set of nodes; everyone else is susceptible.
pub fn init_state(g: &Graph, initial: InitialInfected, seed: u64) -> Result<CompartmentState, SimError> {
    let n = g.node_count();
    let count = initial.resolve(n)?;
    let mut rng = rng_from_seed(seed);
    let mut labels = vec![Compartment::Susceptible; n];
    for v in index::sample(&mut rng, n, count) {
        labels[v] = Compartment::Infected;
    }
    CompartmentState::from_labels(g, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_er;

    #[test]
    fn triangle_single_seed() {
        let g = Graph::complete(3);
        let s = init_state(&g, InitialInfected::Count(1), 1).unwrap();
        assert_eq!((s.susceptible(), s.infected(), s.recovered()), (2, 1, 0));
        assert_eq!(s.si_edges(), 2);
    }

    #[test]
    fn one_percent_of_thousand() {
        let g = Graph::new(1000);
        let s = init_state(&g, InitialInfected::Fraction(0.01), 4).unwrap();
        assert_eq!(s.infected(), 10);
    }

    #[test]
    fn tiny_fraction_rounds_up_to_one() {
        let s = init_state(&Graph::new(50), InitialInfected::Fraction(0.001), 4).unwrap();
        assert_eq!(s.infected(), 1);
    }

    #[test]
    fn everyone_infected() {
        let g = generate_er(40, 0.2, 2).unwrap();
        let s = init_state(&g, InitialInfected::Fraction(1.0), 9).unwrap();
        assert_eq!(s.infected(), 40);
        assert_eq!(s.si_edges(), 0);
    }

    #[test]
    fn rejects_out_of_range() {
        let g = Graph::new(10);
        assert!(init_state(&g, InitialInfected::Fraction(1.5), 1).is_err());
        assert!(init_state(&g, InitialInfected::Fraction(0.0), 1).is_err());
        assert!(init_state(&g, InitialInfected::Count(11), 1).is_err());
        assert!(init_state(&g, InitialInfected::Count(0), 1).is_err());
    }

    #[test]
    fn seeded_selection_is_reproducible() {
        let g = Graph::new(100);
        let a = init_state(&g, InitialInfected::Count(7), 5).unwrap();
        let b = init_state(&g, InitialInfected::Count(7), 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn consistency_check_detects_mismatch() {
        let g = Graph::complete(4);
        let mut s = init_state(&g, InitialInfected::Count(1), 1).unwrap();
        s.check_consistency(&g).unwrap();
        s.set_si_edges(0);
        assert!(s.check_consistency(&g).is_err());
    }
}
