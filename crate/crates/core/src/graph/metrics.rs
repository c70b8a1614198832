use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::powerlaw::{classify_scale_free, fit_power_law};
use super::{Graph, GraphError};

/// Degree-based summary of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    /// Mean number of contacts per node, `<k>`.
    pub average_degree: f64,
    /// degree -> number of nodes with that degree
    pub histogram: BTreeMap<usize, usize>,
    /// Zero for graphs with fewer than two nodes.
    pub density: f64,
    pub power_law_exponent: Option<f64>,
    pub scale_free: bool,
}

/// JSON metrics report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub nodes: usize,
    pub edges: usize,
    pub avg_degree: f64,
    pub density: f64,
    pub power_law_exponent: Option<f64>,
    pub scale_free: bool,
}

/// Fraction of node pairs that are edges.
pub fn density(g: &Graph) -> Result<f64, GraphError> {
    let n = g.node_count();
    if n < 2 {
        return Err(GraphError::UndefinedMetric(format!(
            "density needs at least 2 nodes, graph has {n}"
        )));
    }
    Ok(2.0 * g.edge_count() as f64 / (n as f64 * (n - 1) as f64))
}

/// Average degree, histogram, density and a power-law fit with automatic
/// `k_min`. A failed fit leaves the exponent empty and `scale_free` false.
pub fn degree_stats(g: &Graph) -> Result<DegreeStats, GraphError> {
    let n = g.node_count();
    if n == 0 {
        return Err(GraphError::UndefinedMetric(
            "degree statistics of an empty graph".into(),
        ));
    }
    let mut histogram = BTreeMap::new();
    for d in g.degrees() {
        *histogram.entry(d).or_insert(0) += 1;
    }
    let exponent = fit_power_law(g, None).ok().map(|fit| fit.exponent);
    Ok(DegreeStats {
        average_degree: 2.0 * g.edge_count() as f64 / n as f64,
        histogram,
        density: density(g).unwrap_or(0.0),
        power_law_exponent: exponent,
        scale_free: exponent.is_some_and(classify_scale_free),
    })
}

/// Full metrics including a power-law fit. A failed fit (too few tail nodes)
/// yields no exponent and `scale_free = false`.
pub fn metrics_report(g: &Graph, k_min: Option<usize>) -> Result<MetricsReport, GraphError> {
    if g.node_count() == 0 {
        return Err(GraphError::UndefinedMetric("metrics of an empty graph".into()));
    }
    let exponent = fit_power_law(g, k_min).ok().map(|fit| fit.exponent);
    Ok(MetricsReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        avg_degree: 2.0 * g.edge_count() as f64 / g.node_count() as f64,
        density: density(g).unwrap_or(0.0),
        power_law_exponent: exponent,
        scale_free: exponent.is_some_and(classify_scale_free),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        assert_eq!(density(&Graph::complete(5)).unwrap(), 1.0);
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(density(&g).unwrap(), 0.5);
        assert_eq!(density(&Graph::new(7)).unwrap(), 0.0);
        assert!(matches!(density(&Graph::new(1)), Err(GraphError::UndefinedMetric(_))));
    }

    #[test]
    fn density_of_complete_graphs() {
        for n in 2..30 {
            assert_eq!(density(&Graph::complete(n)).unwrap(), 1.0);
        }
    }

    #[test]
    fn triangle_and_star_stats() {
        let tri = Graph::complete(3);
        let s = degree_stats(&tri).unwrap();
        assert_eq!(s.average_degree, 2.0);
        assert_eq!(s.histogram, BTreeMap::from([(2, 3)]));

        let star = Graph::from_edges(5, (1..5).map(|v| (0, v))).unwrap();
        let s = degree_stats(&star).unwrap();
        assert!((s.average_degree - 1.6).abs() < 1e-12);
        assert_eq!(s.histogram, BTreeMap::from([(1, 4), (4, 1)]));
        assert_eq!(s.histogram.values().sum::<usize>(), 5);
    }

    #[test]
    fn empty_graph_has_no_stats() {
        assert!(degree_stats(&Graph::new(0)).is_err());
    }

    #[test]
    fn report_serializes_expected_keys() {
        let r = metrics_report(&Graph::complete(3), None).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "nodes",
            "edges",
            "avg_degree",
            "density",
            "power_law_exponent",
            "scale_free",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["density"], 1.0);
        assert_eq!(v["avg_degree"], 2.0);
        assert!(v["power_law_exponent"].is_null());
    }
}
