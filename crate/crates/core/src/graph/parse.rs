use std::io::{BufRead, Write};

use rayon::prelude::*;

use super::{Graph, GraphError, NodeId, NodeMapping};

/// Directed citation records as read from an edge-list file.
///
/// Self-loops and repeated `(src, dst)` records are removed during parsing;
/// the counters keep track of how many were dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    /// Retained edges in input order.
    pub edges: Vec<(NodeId, NodeId)>,
    /// Number of distinct node ids seen on any data line.
    pub n_declared: usize,
    /// Largest node id seen on any data line, if any.
    pub max_id: Option<NodeId>,
    pub n_self_loops_dropped: usize,
    pub n_duplicates_dropped: usize,
}

impl EdgeList {
    /// Node count of the graph built from this list: largest id plus one.
    pub fn node_count(&self) -> usize {
        self.max_id.map_or(0, |id| id + 1)
    }
}

/// Parses `src dst` lines.
///
/// Tokens are separated by any run of spaces or tabs, lines whose first
/// non-blank character is `#` are comments, blank lines are skipped and a
/// trailing `\r` is tolerated. Input with no data lines is an error.
pub fn parse_edge_list<R: BufRead>(mut reader: R) -> Result<EdgeList, GraphError> {
    let mut raw: Vec<(NodeId, NodeId)> = Vec::new();
    let mut n_self_loops_dropped = 0;
    let mut max_id: Option<NodeId> = None;
    let mut loop_ids: Vec<NodeId> = Vec::new();
    let mut line = String::new();
    let mut line_no = 0;
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        line_no += 1;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut tokens = body.split_ascii_whitespace();
        let (src, dst) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (
                parse_id(a, line_no)?,
                parse_id(b, line_no)?,
            ),
            _ => {
                return Err(GraphError::Malformed {
                    line: line_no,
                    message: format!(
                        "expected 2 tokens, found {}",
                        body.split_ascii_whitespace().count()
                    ),
                })
            }
        };
        max_id = Some(max_id.map_or(src.max(dst), |m| m.max(src).max(dst)));
        if src == dst {
            n_self_loops_dropped += 1;
            loop_ids.push(src);
        } else {
            raw.push((src, dst));
        }
    }
    if max_id.is_none() {
        return Err(GraphError::EmptyInput);
    }

    // Keep the first occurrence of each directed pair, preserving input order.
    let mut order: Vec<(NodeId, NodeId, usize)> = raw
        .iter()
        .enumerate()
        .map(|(i, &(s, d))| (s, d, i))
        .collect();
    order.par_sort_unstable();
    let mut keep = vec![true; raw.len()];
    for w in order.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            keep[w[1].2] = false;
        }
    }
    drop(order);
    let n_duplicates_dropped = keep.iter().filter(|&&k| !k).count();
    let edges: Vec<(NodeId, NodeId)> = raw
        .into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect();

    let n = max_id.map_or(0, |m| m + 1);
    let mut seen = vec![false; n];
    for &(s, d) in &edges {
        seen[s] = true;
        seen[d] = true;
    }
    for id in loop_ids {
        seen[id] = true;
    }
    let n_declared = seen.iter().filter(|&&s| s).count();

    Ok(EdgeList {
        edges,
        n_declared,
        max_id,
        n_self_loops_dropped,
        n_duplicates_dropped,
    })
}

fn parse_id(token: &str, line: usize) -> Result<NodeId, GraphError> {
    token.parse::<NodeId>().map_err(|_| GraphError::Malformed {
        line,
        message: format!("invalid node id {token:?}"),
    })
}

/// Undirected simple graph over `0..=max_id`; direction is discarded.
pub fn build_graph(list: &EdgeList) -> Graph {
    Graph::with_node_count(list.node_count(), list.edges.iter().copied())
}

/// Writes each undirected edge once as `u v` with `u < v`.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for (u, v, _) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

/// Writes `new_id<TAB>old_id` lines.
pub fn write_mapping<W: Write>(mapping: &NodeMapping, mut out: W) -> std::io::Result<()> {
    for (new, old) in mapping.new_to_old().iter().enumerate() {
        writeln!(out, "{new}\t{old}")?;
    }
    out.flush()
}
