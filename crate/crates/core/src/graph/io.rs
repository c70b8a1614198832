//! Plain-text edge-list ingestion and output.
//!
//! Format: one `u v` pair of non-negative integer ids per line, `#` starts a
//! comment, blank lines are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::{Graph, GraphError, NodeId};

/// Ids above this bound require compaction.
const MAX_DENSE_ID: u64 = u32::MAX as u64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeListOptions {
    /// Relabel the ids that occur in the file to `0..k` in ascending order.
    pub compact_ids: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub self_loops_skipped: usize,
    pub duplicates_collapsed: usize,
    /// Original id of each node when ids were compacted.
    pub original_ids: Option<Vec<u64>>,
}

pub fn load_edge_list(text: &str, options: EdgeListOptions) -> Result<LoadedGraph, GraphError> {
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let mut self_loops = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut tokens = content.split_whitespace();
        let Some(first) = tokens.next() else { continue };
        let second = tokens.next().ok_or_else(|| GraphError::Parse {
            line: line_no,
            message: format!("expected two node ids, found one in {raw:?}"),
        })?;
        if tokens.next().is_some() {
            return Err(GraphError::Parse {
                line: line_no,
                message: format!("expected two node ids, found more in {raw:?}"),
            });
        }
        let u = parse_id(first, line_no)?;
        let v = parse_id(second, line_no)?;
        if u == v {
            self_loops += 1;
            continue;
        }
        pairs.push((u, v));
    }

    let (node_count, original_ids, pairs): (usize, Option<Vec<u64>>, Vec<(NodeId, NodeId)>) = if options.compact_ids {
        let mut ids: Vec<u64> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        let index = |x: u64| ids.binary_search(&x).expect("id collected above");
        let mapped = pairs.iter().map(|&(u, v)| (index(u), index(v))).collect();
        (ids.len(), Some(ids), mapped)
    } else {
        let max_id = pairs.iter().map(|&(u, v)| u.max(v)).max();
        if let Some(max_id) = max_id {
            if max_id > MAX_DENSE_ID {
                return Err(GraphError::InvalidParameter(format!(
                    "node id {max_id} too large for dense ids; enable id compaction"
                )));
            }
        }
        let n = max_id.map_or(0, |m| m as usize + 1);
        let mapped = pairs.iter().map(|&(u, v)| (u as usize, v as usize)).collect();
        (n, None, mapped)
    };

    let mut graph = Graph::new(node_count);
    let mut duplicates = 0;
    for (u, v) in pairs {
        if !graph.add_edge(u, v) {
            duplicates += 1;
        }
    }
    Ok(LoadedGraph {
        graph,
        self_loops_skipped: self_loops,
        duplicates_collapsed: duplicates,
        original_ids,
    })
}

pub fn read_edge_list_file(path: &Path, options: EdgeListOptions) -> Result<LoadedGraph, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
    load_edge_list(&text, options)
}

/// Serializes a graph as an edge list with a leading comment line.
pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = String::with_capacity(12 * graph.edge_count() + 32);
    let _ = writeln!(out, "# nodes {} edges {}", graph.node_count(), graph.edge_count());
    for (u, v) in graph.sorted_edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn parse_id(token: &str, line: usize) -> Result<u64, GraphError> {
    token.parse::<u64>().map_err(|_| GraphError::Parse {
        line,
        message: format!("invalid node id {token:?}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> LoadedGraph {
        load_edge_list(text, EdgeListOptions::default()).unwrap()
    }

    #[test]
    fn triangle() {
        let l = load("0 1\n1 2\n2 0\n");
        assert_eq!(l.graph.node_count(), 3);
        assert_eq!(l.graph.edge_count(), 3);
    }

    #[test]
    fn duplicates_and_self_loops() {
        let l = load("0 1\n1 0\n# comment\n0 0\n");
        assert_eq!(l.graph.edge_count(), 1);
        assert_eq!(l.self_loops_skipped, 1);
        assert_eq!(l.duplicates_collapsed, 1);
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let l = load("");
        assert_eq!(l.graph.node_count(), 0);
        let l = load("# only a comment\n\n   \n");
        assert_eq!(l.graph.node_count(), 0);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = load_edge_list("0 1\n1 x\n", EdgeListOptions::default()).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err}");
        let err = load_edge_list("0 1\n\n3\n", EdgeListOptions::default()).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
        let err = load_edge_list("0 1 2\n", EdgeListOptions::default()).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
        let err = load_edge_list("-1 2\n", EdgeListOptions::default()).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
    }

    #[test]
    fn sparse_ids_keep_isolated_nodes_unless_compacted() {
        let l = load("2 7\n7 9\n");
        assert_eq!(l.graph.node_count(), 10);
        assert_eq!(l.graph.edge_count(), 2);

        let c = load_edge_list("2 7\n7 9\n", EdgeListOptions { compact_ids: true }).unwrap();
        assert_eq!(c.graph.node_count(), 3);
        assert_eq!(c.original_ids.as_deref(), Some(&[2, 7, 9][..]));
        assert!(c.graph.has_edge(0, 1) && c.graph.has_edge(1, 2));
    }

    #[test]
    fn inline_comments_and_tabs() {
        let l = load("0\t1 # first\n  1   2\n");
        assert_eq!(l.graph.edge_count(), 2);
    }

    #[test]
    fn written_list_reloads() {
        let g = crate::graph::generate_er(50, 0.1, 3).unwrap();
        let text = write_edge_list(&g);
        let back = load(&text).graph;
        assert_eq!(back.sorted_edges(), g.sorted_edges());
    }
}
