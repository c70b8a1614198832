//! Exact Gillespie simulation of SIR/SIRS on a contact graph.
//!
//! Infection targets are drawn uniformly over S–I edges, which is the same as
//! picking a susceptible node with weight equal to its number of infected
//! neighbors. Those weights live in a Fenwick tree so that both selection
//! and updates cost O(log N) per touched node.

use std::borrow::Cow;

use rand::Rng;

use super::events::{compute_event_rates, sample_waiting_time, select_event, EventKind, EventRates};
use super::state::count_si_edges;
use super::trajectory::{Engine, Sample, Trajectory};
use super::{Compartment, CompartmentState, RateParams, RunOptions, SimError};
use crate::graph::{Graph, NodeId};
use crate::interventions::InterventionSpec;
use crate::rng::{rng_from_seed, SimRng};

/// Fenwick tree over non-negative integer node weights.
#[derive(Debug, Clone)]
struct WeightTree {
    tree: Vec<i64>,
    total: i64,
}

impl WeightTree {
    fn new(len: usize) -> Self {
        Self {
            tree: vec![0; len + 1],
            total: 0,
        }
    }

    fn add(&mut self, index: usize, delta: i64) {
        self.total += delta;
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Index whose cumulative weight interval contains `target`
    /// (`0 <= target < total`).
    fn find(&self, mut target: i64) -> usize {
        let mut pos = 0;
        let mut step = (self.tree.len() - 1).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

/// Unordered node set with O(1) insert, remove and uniform sampling.
#[derive(Debug, Clone)]
struct NodeSet {
    members: Vec<NodeId>,
    position: Vec<usize>,
}

impl NodeSet {
    const ABSENT: usize = usize::MAX;

    fn new(n: usize) -> Self {
        Self {
            members: Vec::new(),
            position: vec![Self::ABSENT; n],
        }
    }

    fn insert(&mut self, v: NodeId) {
        debug_assert_eq!(self.position[v], Self::ABSENT);
        self.position[v] = self.members.len();
        self.members.push(v);
    }

    fn remove(&mut self, v: NodeId) {
        let pos = self.position[v];
        debug_assert_ne!(pos, Self::ABSENT);
        let last = *self.members.last().expect("non-empty");
        self.members.swap_remove(pos);
        if last != v {
            self.position[last] = pos;
        }
        self.position[v] = Self::ABSENT;
    }

    fn sample(&self, rng: &mut SimRng) -> NodeId {
        self.members[rng.gen_range(0..self.members.len())]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    /// A transition happened at time `t`.
    Event { t: f64, kind: EventKind, node: NodeId },
    /// An intervention was applied at time `t`; the pending event was dropped.
    Intervention { t: f64 },
    /// No event can occur any more.
    Absorbed,
    /// The next event would fall beyond the horizon.
    Horizon,
}

/// Stepwise network simulation. [`gillespie_run`] drives it to completion.
pub struct NetworkSimulation<'g> {
    graph: Cow<'g, Graph>,
    params: RateParams,
    state: CompartmentState,
    infected_neighbors: Vec<u32>,
    pressure: WeightTree,
    infected: NodeSet,
    recovered: NodeSet,
    pending: Vec<InterventionSpec>,
    rng: SimRng,
    time: f64,
    t_max: f64,
    events: u64,
}

impl<'g> NetworkSimulation<'g> {
    pub fn new(
        graph: &'g Graph,
        params: RateParams,
        init: CompartmentState,
        t_max: f64,
        seed: u64,
        interventions: &[InterventionSpec],
    ) -> Result<Self, SimError> {
        params.validate()?;
        init.check_consistency(graph)?;
        for spec in interventions {
            spec.validate()?;
        }
        let mut pending = interventions.to_vec();
        // Applied in trigger order; popped from the back.
        pending.sort_by(|a, b| b.trigger_time.total_cmp(&a.trigger_time));
        let n = graph.node_count();
        let mut sim = Self {
            graph: Cow::Borrowed(graph),
            params,
            state: init,
            infected_neighbors: vec![0; n],
            pressure: WeightTree::new(n),
            infected: NodeSet::new(n),
            recovered: NodeSet::new(n),
            pending,
            rng: rng_from_seed(seed),
            time: 0.0,
            t_max,
            events: 0,
        };
        sim.rebuild_caches();
        for v in 0..n {
            match sim.state.label(v) {
                Compartment::Infected => sim.infected.insert(v),
                Compartment::Recovered => sim.recovered.insert(v),
                Compartment::Susceptible => {}
            }
        }
        Ok(sim)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn state(&self) -> &CompartmentState {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn rates(&self) -> EventRates {
        compute_event_rates(&self.graph, &self.state, &self.params)
    }

    pub fn sample(&self) -> Sample {
        Sample {
            t: self.time,
            s: self.state.susceptible(),
            i: self.state.infected(),
            r: self.state.recovered(),
        }
    }

    pub fn step(&mut self) -> Result<StepOutcome, SimError> {
        let rates = self.rates();
        let Ok(tau) = sample_waiting_time(rates.a_total, &mut self.rng) else {
            return Ok(StepOutcome::Absorbed);
        };
        if let Some(next) = self.pending.last().copied() {
            if next.trigger_time <= self.t_max && self.time + tau > next.trigger_time {
                self.pending.pop();
                self.time = self.time.max(next.trigger_time);
                let seed = self.rng.gen::<u64>();
                let transformed = next.apply(&self.graph, seed)?;
                self.graph = Cow::Owned(transformed);
                self.rebuild_caches();
                return Ok(StepOutcome::Intervention { t: self.time });
            }
        }
        if self.time + tau > self.t_max {
            self.time = self.t_max;
            return Ok(StepOutcome::Horizon);
        }
        self.time += tau;
        let kind = select_event(&rates, &mut self.rng).expect("positive total rate");
        let node = match kind {
            EventKind::Infection => {
                let target = self.rng.gen_range(0..self.pressure.total);
                let v = self.pressure.find(target);
                self.infect(v);
                v
            }
            EventKind::Recovery => {
                let v = self.infected.sample(&mut self.rng);
                self.recover(v);
                v
            }
            EventKind::Waning => {
                let v = self.recovered.sample(&mut self.rng);
                self.wane(v);
                v
            }
        };
        self.events += 1;
        Ok(StepOutcome::Event {
            t: self.time,
            kind,
            node,
        })
    }

    fn infect(&mut self, v: NodeId) {
        debug_assert_eq!(self.state.label(v), Compartment::Susceptible);
        let own = self.infected_neighbors[v];
        self.pressure.add(v, -(own as i64));
        let mut si = self.state.si_edges() - own as usize;
        for &u in self.graph.neighbors(v) {
            self.infected_neighbors[u] += 1;
            if self.state.label(u) == Compartment::Susceptible {
                self.pressure.add(u, 1);
                si += 1;
            }
        }
        self.state.set_si_edges(si);
        self.state.set_label(v, Compartment::Infected);
        self.infected.insert(v);
    }

    fn recover(&mut self, v: NodeId) {
        let mut si = self.state.si_edges();
        for &u in self.graph.neighbors(v) {
            self.infected_neighbors[u] -= 1;
            if self.state.label(u) == Compartment::Susceptible {
                self.pressure.add(u, -1);
                si -= 1;
            }
        }
        self.state.set_si_edges(si);
        self.state.set_label(v, Compartment::Recovered);
        self.infected.remove(v);
        self.recovered.insert(v);
    }

    fn wane(&mut self, v: NodeId) {
        let own = self.infected_neighbors[v];
        self.pressure.add(v, own as i64);
        self.state.set_si_edges(self.state.si_edges() + own as usize);
        self.state.set_label(v, Compartment::Susceptible);
        self.recovered.remove(v);
    }

    /// Recomputes neighbor counts, infection weights and the S–I edge count
    /// from the labels and the current graph.
    fn rebuild_caches(&mut self) {
        let n = self.graph.node_count();
        self.infected_neighbors.iter_mut().for_each(|c| *c = 0);
        for v in 0..n {
            if self.state.label(v) == Compartment::Infected {
                for &u in self.graph.neighbors(v) {
                    self.infected_neighbors[u] += 1;
                }
            }
        }
        self.pressure = WeightTree::new(n);
        for v in 0..n {
            if self.state.label(v) == Compartment::Susceptible && self.infected_neighbors[v] > 0 {
                self.pressure.add(v, self.infected_neighbors[v] as i64);
            }
        }
        self.state
            .set_si_edges(count_si_edges(&self.graph, self.state.labels()));
    }
}

/// Runs the network Gillespie process until the horizon `opts.t_max` or
/// absorption, recording the trajectory.
pub fn gillespie_run(
    graph: &Graph,
    params: &RateParams,
    init: &CompartmentState,
    opts: &RunOptions,
    interventions: &[InterventionSpec],
) -> Result<Trajectory, SimError> {
    opts.validate()?;
    let mut sim = NetworkSimulation::new(graph, *params, init.clone(), opts.t_max, opts.seed, interventions)?;
    let mut samples = vec![sim.sample()];
    let mut applied = Vec::new();
    let mut since_record = 0usize;
    let t_end = loop {
        match sim.step()? {
            StepOutcome::Event { .. } => {
                since_record += 1;
                if since_record == opts.record_stride {
                    samples.push(sim.sample());
                    since_record = 0;
                }
            }
            StepOutcome::Intervention { t } => applied.push(t),
            StepOutcome::Absorbed => break sim.time(),
            StepOutcome::Horizon => break opts.t_max,
        }
    };
    if since_record > 0 {
        samples.push(sim.sample());
    }
    Ok(Trajectory {
        engine: Engine::NetworkGillespie,
        seed: opts.seed,
        population: graph.node_count(),
        samples,
        t_end,
        events: sim.events(),
        interventions_applied: applied,
    })
}
