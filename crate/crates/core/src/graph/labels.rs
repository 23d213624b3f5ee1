use std::collections::BTreeMap;
use std::io::BufRead;

use super::{Graph, GraphError, NodeId};

/// Reserved label for nodes that carry no ground-truth label.
pub const UNLABELED: &str = "∅";

/// Ground-truth field labels for a subset of a graph's nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    /// Index into `universe` per node, `None` when unlabeled.
    labels: Vec<Option<usize>>,
    /// Distinct labels in lexicographic order.
    universe: Vec<String>,
}

impl LabelMap {
    /// Builds a map for `n` nodes from `(node, label)` pairs.
    pub fn from_pairs<I, S>(n: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, S)>,
        S: Into<String>,
    {
        let mut raw: Vec<Option<String>> = vec![None; n];
        for (id, label) in pairs {
            let label = label.into();
            if id >= n {
                return Err(GraphError::NodeOutOfRange { id, n });
            }
            match &raw[id] {
                Some(prev) if *prev != label => {
                    return Err(GraphError::ConflictingLabel {
                        id,
                        first: prev.clone(),
                        second: label,
                    })
                }
                _ => raw[id] = Some(label),
            }
        }
        let index: BTreeMap<&str, usize> = raw
            .iter()
            .flatten()
            .map(String::as_str)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        let universe: Vec<String> = index.keys().map(|s| s.to_string()).collect();
        let labels = raw
            .iter()
            .map(|l| l.as_deref().map(|s| index[s]))
            .collect();
        Ok(LabelMap { labels, universe })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, node: NodeId) -> Option<&str> {
        self.labels[node].map(|i| self.universe[i].as_str())
    }

    /// Label index of `node` within [`LabelMap::universe`].
    pub fn label_index(&self, node: NodeId) -> Option<usize> {
        self.labels[node]
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn labeled_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    pub fn has_unlabeled(&self) -> bool {
        self.labels.iter().any(Option::is_none)
    }

    /// Universe extended with [`UNLABELED`] when some node lacks a label,
    /// paired with a per-node index into that extended list.
    pub fn with_reserved(&self) -> (Vec<String>, Vec<usize>) {
        let mut names = self.universe.clone();
        let reserved = names.len();
        if self.has_unlabeled() {
            names.push(UNLABELED.to_string());
        }
        let idx = self.labels.iter().map(|l| l.unwrap_or(reserved)).collect();
        (names, idx)
    }
}

/// Reads `node_id<TAB>label` lines for the nodes of `g`.
///
/// Blank lines and `#` comments are skipped. Ids outside the graph and a
/// node listed twice with different labels are errors.
pub fn load_labels<R: BufRead>(reader: R, g: &Graph) -> Result<LabelMap, GraphError> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.trim_end_matches(['\r', '\n']);
        if body.trim().is_empty() || body.starts_with('#') {
            continue;
        }
        let malformed = |message: String| GraphError::Malformed {
            line: i + 1,
            message,
        };
        let (id, label) = body
            .split_once('\t')
            .ok_or_else(|| malformed("expected node_id<TAB>label".into()))?;
        let id: NodeId = id
            .trim()
            .parse()
            .map_err(|_| malformed(format!("invalid node id {id:?}")))?;
        if label.is_empty() || label.contains('\t') {
            return Err(malformed(format!("invalid label {label:?}")));
        }
        pairs.push((id, label.to_string()));
    }
    LabelMap::from_pairs(g.n(), pairs)
}
