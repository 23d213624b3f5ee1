use std::io::{BufRead, Write};

use super::{ClusterError, Partition};

/// Writes `node_id<TAB>community_id` lines in node order.
pub fn write_partition<W: Write>(p: &Partition, mut out: W) -> std::io::Result<()> {
    for (u, c) in p.assignment().iter().enumerate() {
        writeln!(out, "{u}\t{c}")?;
    }
    out.flush()
}

/// Reads a partition file for a graph with `n` nodes.
///
/// Every node must appear exactly once and community ids must be
/// consecutive from 0. Lines may come in any order.
pub fn read_partition<R: BufRead>(reader: R, n: usize) -> Result<Partition, ClusterError> {
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let bad = |message: String| ClusterError::PartitionFile {
            line: i + 1,
            message,
        };
        let mut tokens = body.split_ascii_whitespace();
        let (node, comm) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(bad("expected node_id<TAB>community_id".into())),
        };
        let node: usize = node
            .parse()
            .map_err(|_| bad(format!("invalid node id {node:?}")))?;
        let comm: usize = comm
            .parse()
            .map_err(|_| bad(format!("invalid community id {comm:?}")))?;
        if node >= n {
            return Err(bad(format!(
                "node {node} out of range for graph with {n} nodes"
            )));
        }
        if assignment[node].replace(comm).is_some() {
            return Err(bad(format!("node {node} assigned twice")));
        }
    }
    let assignment = assignment
        .into_iter()
        .enumerate()
        .map(|(node, c)| c.ok_or(ClusterError::MissingNode { node }))
        .collect::<Result<Vec<_>, _>>()?;
    Partition::new(assignment)
}
