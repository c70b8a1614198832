//! Undirected simple contact graphs.
//!
//! Nodes are dense ids `0..node_count`. The adjacency lists are the single
//! source of truth; the edge count is tracked alongside them.

mod generators;
mod io;
mod metrics;
mod powerlaw;

pub use generators::{generate, generate_ba, generate_er, generate_ws, GeneratorParams, GraphModel};
pub use io::{load_edge_list, read_edge_list_file, write_edge_list, EdgeListOptions, LoadedGraph};
pub use metrics::{degree_stats, density, metrics_report, DegreeStats, MetricsReport};
pub use powerlaw::{classify_scale_free, fit_power_law, fit_power_law_degrees, PowerLawFit, MIN_TAIL_SIZE};

use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("metric undefined: {0}")]
    UndefinedMetric(String),
    #[error("power-law fit needs at least {required} tail nodes, found {tail_size}")]
    InsufficientTail { tail_size: usize, required: usize },
    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("graph invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `node_count` nodes.
    pub fn new(node_count: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a simple graph from an edge iterator. Self-loops and duplicate
    /// (or reversed duplicate) pairs are rejected.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Self::new(node_count);
        for (u, v) in edges {
            g.check_node(u)?;
            g.check_node(v)?;
            if u == v {
                return Err(GraphError::Invariant(format!("self-loop at node {u}")));
            }
            if !g.add_edge(u, v) {
                return Err(GraphError::Invariant(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(g)
    }

    pub fn complete(node_count: usize) -> Self {
        let mut g = Self::new(node_count);
        for u in 0..node_count {
            for v in (u + 1)..node_count {
                g.push_edge_unchecked(u, v);
            }
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        if u >= self.node_count() || v >= self.node_count() {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].contains(&b)
    }

    /// Adds the edge `{u, v}`. Returns `false` (and leaves the graph
    /// untouched) for self-loops and existing edges.
    ///
    /// Panics if either endpoint is out of range.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        assert!(
            u < self.node_count() && v < self.node_count(),
            "edge ({u}, {v}) out of range"
        );
        if u == v || self.has_edge(u, v) {
            return false;
        }
        self.push_edge_unchecked(u, v);
        true
    }

    /// Removes the edge `{u, v}` if present.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        if u >= self.node_count() || v >= self.node_count() {
            return false;
        }
        let Some(pos_u) = self.adjacency[u].iter().position(|&x| x == v) else {
            return false;
        };
        self.adjacency[u].swap_remove(pos_u);
        let pos_v = self.adjacency[v]
            .iter()
            .position(|&x| x == u)
            .expect("adjacency symmetry");
        self.adjacency[v].swap_remove(pos_v);
        self.edge_count -= 1;
        true
    }

    /// Edges as `(u, v)` pairs with `u < v`, in adjacency order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Edges sorted lexicographically; a canonical form for comparisons.
    pub fn sorted_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut e: Vec<_> = self.edges().collect();
        e.sort_unstable();
        e
    }

    /// Full scan of the structural invariants: no self-loops, no duplicate
    /// neighbors, symmetric adjacency and a degree sum of twice the edge count.
    pub fn check_invariants(&self) -> Result<(), GraphError> {
        let n = self.node_count();
        let mut seen = vec![usize::MAX; n];
        let mut degree_sum = 0usize;
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            degree_sum += nbrs.len();
            for &v in nbrs {
                if v >= n {
                    return Err(GraphError::Invariant(format!("neighbor {v} of {u} out of range")));
                }
                if v == u {
                    return Err(GraphError::Invariant(format!("self-loop at node {u}")));
                }
                if seen[v] == u {
                    return Err(GraphError::Invariant(format!("duplicate edge ({u}, {v})")));
                }
                seen[v] = u;
                if !self.adjacency[v].contains(&u) {
                    return Err(GraphError::Invariant(format!("asymmetric edge ({u}, {v})")));
                }
            }
        }
        if degree_sum != 2 * self.edge_count {
            return Err(GraphError::Invariant(format!(
                "degree sum {degree_sum} != 2 x {} edges",
                self.edge_count
            )));
        }
        Ok(())
    }

    fn check_node(&self, node: NodeId) -> Result<(), GraphError> {
        if node >= self.node_count() {
            return Err(GraphError::NodeOutOfRange {
                node,
                node_count: self.node_count(),
            });
        }
        Ok(())
    }

    /// Caller guarantees `u != v` and that the edge is absent.
    pub(crate) fn push_edge_unchecked(&mut self, u: NodeId, v: NodeId) {
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
        self.edge_count += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_and_remove_edges() {
        let mut g = Graph::new(4);
        assert!(g.add_edge(0, 1));
        assert!(!g.add_edge(1, 0));
        assert!(!g.add_edge(2, 2));
        assert!(g.add_edge(1, 2));
        assert_eq!(g.edge_count(), 2);
        assert!(g.remove_edge(2, 1));
        assert!(!g.remove_edge(2, 1));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(1), 1);
        g.check_invariants().unwrap();
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(matches!(Graph::from_edges(3, [(0, 0)]), Err(GraphError::Invariant(_))));
        assert!(matches!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(GraphError::Invariant(_))
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::NodeOutOfRange { node: 3, .. })
        ));
    }

    #[test]
    fn complete_graph_edges() {
        let g = Graph::complete(5);
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.sorted_edges().len(), 10);
        g.check_invariants().unwrap();
    }
}
