//! Contact-reduction measures expressed as graph transformations.
//!
//! These functions are purely structural. Applying them in the middle of a
//! simulation is handled by the network engine.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::graph::{density, Graph, GraphError, NodeId};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case", deny_unknown_fields)]
pub enum InterventionAction {
    /// Lockdown: no node keeps more than `cap` contacts.
    DegreeCap { cap: usize },
    /// Remove uniformly random edges until the density is at most `target`.
    #[serde(rename = "thin")]
    ThinToDensity { target: f64 },
}

/// An action applied once the simulation clock reaches `trigger_time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterventionSpec {
    pub trigger_time: f64,
    pub action: InterventionAction,
}

impl InterventionSpec {
    pub fn degree_cap(trigger_time: f64, cap: usize) -> Self {
        Self {
            trigger_time,
            action: InterventionAction::DegreeCap { cap },
        }
    }

    pub fn thin(trigger_time: f64, target: f64) -> Self {
        Self {
            trigger_time,
            action: InterventionAction::ThinToDensity { target },
        }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if !(self.trigger_time >= 0.0) || !self.trigger_time.is_finite() {
            return Err(GraphError::InvalidParameter(format!(
                "intervention time {} must be finite and >= 0",
                self.trigger_time
            )));
        }
        if let InterventionAction::ThinToDensity { target } = self.action {
            if !(0.0..=1.0).contains(&target) {
                return Err(GraphError::InvalidParameter(format!(
                    "target density {target} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn apply(&self, g: &Graph, seed: u64) -> Result<Graph, GraphError> {
        match self.action {
            InterventionAction::DegreeCap { cap } => Ok(apply_degree_cap(g, cap, seed)),
            InterventionAction::ThinToDensity { target } => thin_to_density(g, target, seed),
        }
    }
}

// JSON form: {"t": 3.0, "action": "degree_cap", "cap": 5}
#[derive(Serialize, Deserialize)]
struct InterventionRepr {
    t: f64,
    #[serde(flatten)]
    action: InterventionAction,
}

impl Serialize for InterventionSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        InterventionRepr {
            t: self.trigger_time,
            action: self.action,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for InterventionSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = InterventionRepr::deserialize(deserializer)?;
        Ok(Self {
            trigger_time: repr.t,
            action: repr.action,
        })
    }
}

/// Caps every node's degree at `cap`.
///
/// Nodes are visited once in descending order of their initial degree (ties
/// by id). A node whose current degree still exceeds `cap` keeps `cap`
/// randomly chosen incident edges and loses the rest; the removals lower the
/// neighbors' degrees before they are visited.
pub fn apply_degree_cap(g: &Graph, cap: usize, seed: u64) -> Graph {
    let mut out = g.clone();
    let mut order: Vec<NodeId> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    let mut rng = rng_from_seed(seed);
    for u in order {
        if out.degree(u) <= cap {
            continue;
        }
        let mut incident = out.neighbors(u).to_vec();
        incident.sort_unstable();
        incident.shuffle(&mut rng);
        for &v in &incident[cap..] {
            out.remove_edge(u, v);
        }
    }
    out
}

/// Removes uniformly random edges so that the density becomes at most
/// `target`. The kept edge count is `floor(target * n(n-1)/2)`.
pub fn thin_to_density(g: &Graph, target: f64, seed: u64) -> Result<Graph, GraphError> {
    let current = density(g)?;
    if !(0.0..=1.0).contains(&target) {
        return Err(GraphError::InvalidParameter(format!(
            "target density {target} outside [0, 1]"
        )));
    }
    if target > current + 1e-12 {
        return Err(GraphError::InvalidParameter(format!(
            "target density {target} exceeds current density {current}"
        )));
    }
    let n = g.node_count() as f64;
    let pairs = n * (n - 1.0) / 2.0;
    let keep = ((target * pairs + 1e-9).floor() as usize).min(g.edge_count());
    if keep == g.edge_count() {
        return Ok(g.clone());
    }
    let mut edges = g.sorted_edges();
    let mut rng = rng_from_seed(seed);
    edges.shuffle(&mut rng);
    let mut out = Graph::new(g.node_count());
    for &(u, v) in &edges[..keep] {
        out.push_edge_unchecked(u, v);
    }
    Ok(out)
}
