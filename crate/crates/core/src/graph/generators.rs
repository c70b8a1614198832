//! Random graph generators: Erdős–Rényi, Watts–Strogatz and Barabási–Albert.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, NodeId};
use crate::rng::{rng_from_seed, SimRng};

/// Random graph model and its structural parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphModel {
    /// G(n, p): every pair is an edge independently with probability `p`.
    Er { n: usize, p: f64 },
    /// Ring lattice of even degree `k` with each lattice edge rewired with
    /// probability `p_rewire`.
    Ws { n: usize, k: usize, p_rewire: f64 },
    /// Preferential attachment, `m` edges per arriving node.
    Ba { n: usize, m: usize },
}

impl GraphModel {
    pub fn node_count(&self) -> usize {
        match *self {
            GraphModel::Er { n, .. } | GraphModel::Ws { n, .. } | GraphModel::Ba { n, .. } => n,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GraphModel::Er { .. } => "ER",
            GraphModel::Ws { .. } => "WS",
            GraphModel::Ba { .. } => "BA",
        }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        match *self {
            GraphModel::Er { p, .. } => check_probability("p", p),
            GraphModel::Ws { n, k, p_rewire } => {
                if k % 2 != 0 {
                    return Err(GraphError::InvalidParameter(format!("WS degree k={k} must be even")));
                }
                if k == 0 || k >= n {
                    return Err(GraphError::InvalidParameter(format!(
                        "WS degree k={k} must satisfy 0 < k < n={n}"
                    )));
                }
                check_probability("p_rewire", p_rewire)
            }
            GraphModel::Ba { n, m } => {
                if m < 1 || m >= n {
                    return Err(GraphError::InvalidParameter(format!(
                        "BA requires 1 <= m < n, got m={m}, n={n}"
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub model: GraphModel,
    pub seed: u64,
}

pub fn generate(params: &GeneratorParams) -> Result<Graph, GraphError> {
    match params.model {
        GraphModel::Er { n, p } => generate_er(n, p, params.seed),
        GraphModel::Ws { n, k, p_rewire } => generate_ws(n, k, p_rewire, params.seed),
        GraphModel::Ba { n, m } => generate_ba(n, m, params.seed),
    }
}

fn check_probability(name: &str, p: f64) -> Result<(), GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParameter(format!("{name}={p} outside [0, 1]")));
    }
    Ok(())
}

/// Erdős–Rényi G(n, p).
///
/// Uses geometric skipping over the lexicographically ordered pairs, which
/// samples each pair independently with probability `p` in O(n + |E|).
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    GraphModel::Er { n, p }.validate()?;
    if p == 0.0 || n < 2 {
        return Ok(Graph::new(n));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::new(n);
    let log_q = (1.0 - p).ln();
    // Pairs (v, w) with w < v, enumerated row by row.
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_q).floor();
        w += 1 + skip as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            g.push_edge_unchecked(v, w as usize);
        }
    }
    Ok(g)
}

/// Watts–Strogatz small-world graph.
pub fn generate_ws(n: usize, k: usize, p_rewire: f64, seed: u64) -> Result<Graph, GraphError> {
    GraphModel::Ws { n, k, p_rewire }.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::new(n);
    let half = k / 2;
    for j in 1..=half {
        for u in 0..n {
            g.add_edge(u, (u + j) % n);
        }
    }
    if p_rewire == 0.0 {
        return Ok(g);
    }
    for j in 1..=half {
        for u in 0..n {
            if rng.gen::<f64>() >= p_rewire {
                continue;
            }
            if g.degree(u) >= n - 1 {
                continue;
            }
            let v = (u + j) % n;
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && !g.has_edge(u, w) {
                    break w;
                }
            };
            if g.remove_edge(u, v) {
                g.push_edge_unchecked(u, w);
            }
        }
    }
    Ok(g)
}

/// Barabási–Albert preferential attachment.
///
/// Starts from `m` isolated nodes; the first arrival links to all of them and
/// every later arrival picks `m` distinct targets with probability
/// proportional to degree. The result has exactly `m * (n - m)` edges.
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    GraphModel::Ba { n, m }.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::new(n);
    let mut targets: Vec<NodeId> = (0..m).collect();
    // Each node appears once per incident edge.
    let mut repeated: Vec<NodeId> = Vec::with_capacity(2 * m * n);
    for source in m..n {
        for &t in &targets {
            g.push_edge_unchecked(source, t);
        }
        repeated.extend_from_slice(&targets);
        repeated.extend(std::iter::repeat_n(source, m));
        targets = distinct_sample(&repeated, m, &mut rng);
    }
    Ok(g)
}

fn distinct_sample(pool: &[NodeId], m: usize, rng: &mut SimRng) -> Vec<NodeId> {
    let mut chosen = Vec::with_capacity(m);
    while chosen.len() < m {
        let x = pool[rng.gen_range(0..pool.len())];
        if !chosen.contains(&x) {
            chosen.push(x);
        }
    }
    chosen
}
