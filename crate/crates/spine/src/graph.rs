//! Weighted undirected simple graph with dense integer node ids and string labels.
//!
//! Graphs are immutable after construction. Canonicalization happens on load:
//! parallel edges are merged by summing weights, self-loops are dropped, and
//! labels map to dense ids `0..V-1` in first-appearance order. Every edge is
//! stored once with `u < v` and a strictly positive finite weight.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// A canonical edge: `u < v`, `weight > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
}

/// Counters reported by the loader for dropped/merged input lines.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadSummary {
    /// Parallel edges folded into an existing edge (weights summed).
    pub merged_parallel: usize,
    /// Self-loop lines discarded.
    pub dropped_self_loops: usize,
}

/// Options for [`parse_edge_list`] / [`load_edge_list`].
#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Weight assigned when the third field is missing.
    pub default_weight: f64,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self { default_weight: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    name: String,
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
    adjacency: Vec<Vec<(NodeId, f64)>>,
    edges: Vec<Edge>,
    total_weight: f64,
}

impl Graph {
    /// Build from labeled edges. The node set is exactly the endpoints of the
    /// surviving (non-self-loop) edges, in first-appearance order.
    pub fn from_labeled_edges<I, S>(name: &str, input: I) -> Result<(Graph, LoadSummary)>
    where
        I: IntoIterator<Item = (S, S, f64)>,
        S: AsRef<str>,
    {
        let mut labels: Vec<String> = Vec::new();
        let mut label_index: HashMap<String, NodeId> = HashMap::new();
        let mut weights: HashMap<(NodeId, NodeId), f64> = HashMap::new();
        let mut order: Vec<(NodeId, NodeId)> = Vec::new();
        let mut summary = LoadSummary::default();

        for (a, b, w) in input {
            let (a, b) = (a.as_ref(), b.as_ref());
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has non-positive or non-finite weight {w}"
                )));
            }
            if a == b {
                summary.dropped_self_loops += 1;
                continue;
            }
            let mut id_of = |label: &str| -> NodeId {
                match label_index.get(label) {
                    Some(&id) => id,
                    None => {
                        let id = labels.len();
                        labels.push(label.to_owned());
                        label_index.insert(label.to_owned(), id);
                        id
                    }
                }
            };
            let ui = id_of(a);
            let vi = id_of(b);
            let key = (ui.min(vi), ui.max(vi));
            match weights.get_mut(&key) {
                Some(existing) => {
                    *existing += w;
                    summary.merged_parallel += 1;
                }
                None => {
                    weights.insert(key, w);
                    order.push(key);
                }
            }
        }

        let mut edges: Vec<Edge> = order
            .into_iter()
            .map(|(u, v)| Edge { u, v, weight: weights[&(u, v)] })
            .collect();
        edges.sort_by_key(|a| (a.u, a.v));

        Ok((Graph::assemble(name, labels, label_index, edges), summary))
    }

    /// Build from integer-id edges; nodes are `0..n_nodes` with decimal labels.
    pub fn from_parts(name: &str, n_nodes: usize, input: &[(NodeId, NodeId, f64)]) -> Result<Graph> {
        let mut weights: HashMap<(NodeId, NodeId), f64> = HashMap::new();
        for &(u, v, w) in input {
            if u >= n_nodes || v >= n_nodes {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a node outside 0..{n_nodes}"
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has non-positive or non-finite weight {w}"
                )));
            }
            if u == v {
                continue;
            }
            *weights.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
        }
        let mut edges: Vec<Edge> = weights
            .into_iter()
            .map(|((u, v), weight)| Edge { u, v, weight })
            .collect();
        edges.sort_by_key(|a| (a.u, a.v));

        let labels: Vec<String> = (0..n_nodes).map(|i| i.to_string()).collect();
        let label_index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Ok(Graph::assemble(name, labels, label_index, edges))
    }

    /// Build from integer-id edges; node count inferred as `max id + 1`.
    pub fn from_edges(name: &str, input: &[(NodeId, NodeId, f64)]) -> Result<Graph> {
        let n = input
            .iter()
            .map(|&(u, v, _)| u.max(v) + 1)
            .max()
            .unwrap_or(0);
        Graph::from_parts(name, n, input)
    }

    fn assemble(
        name: &str,
        labels: Vec<String>,
        label_index: HashMap<String, NodeId>,
        edges: Vec<Edge>,
    ) -> Graph {
        let mut adjacency: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); labels.len()];
        let mut total_weight = 0.0;
        for e in &edges {
            adjacency[e.u].push((e.v, e.weight));
            adjacency[e.v].push((e.u, e.weight));
            total_weight += e.weight;
        }
        for nbrs in &mut adjacency {
            nbrs.sort_by_key(|a| a.0);
        }
        Graph {
            name: name.to_owned(),
            labels,
            label_index,
            adjacency,
            edges,
            total_weight,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of all edge weights `W`; node strengths sum to `2W`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.label_index.get(label).copied()
    }

    /// Neighbors of `node` with edge weights, sorted by neighbor id.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    /// Node strength `s_i`: sum of incident edge weights.
    pub fn strength(&self, node: NodeId) -> f64 {
        self.adjacency[node].iter().map(|&(_, w)| w).sum()
    }

    /// Degree sequence (ascending) and weight sequence (ascending).
    pub fn degree_and_weight_sequences(&self) -> (Vec<usize>, Vec<f64>) {
        let mut degrees: Vec<usize> = (0..self.node_count()).map(|i| self.degree(i)).collect();
        degrees.sort_unstable();
        let mut weights: Vec<f64> = self.edges.iter().map(|e| e.weight).collect();
        weights.sort_by(|a, b| a.partial_cmp(b).expect("finite weights"));
        (degrees, weights)
    }

    /// Edge map keyed by lexicographically ordered label pairs.
    pub fn labeled_edge_map(&self) -> HashMap<(&str, &str), f64> {
        self.edges
            .iter()
            .map(|e| {
                let (a, b) = (self.label(e.u), self.label(e.v));
                if a <= b { ((a, b), e.weight) } else { ((b, a), e.weight) }
            })
            .collect()
    }

    /// Subgraph induced by a subset of this graph's edges. Nodes are the edge
    /// endpoints, re-indexed densely in parent-id order; labels carry over.
    pub fn subgraph_from_edges<'a, I>(&self, name: &str, subset: I) -> Graph
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let subset: Vec<Edge> = subset.into_iter().copied().collect();
        let mut present = vec![false; self.node_count()];
        for e in &subset {
            present[e.u] = true;
            present[e.v] = true;
        }
        let mut remap = vec![usize::MAX; self.node_count()];
        let mut labels = Vec::new();
        for (old, keep) in present.iter().enumerate() {
            if *keep {
                remap[old] = labels.len();
                labels.push(self.labels[old].clone());
            }
        }
        let mut edges: Vec<Edge> = subset
            .into_iter()
            .map(|e| Edge { u: remap[e.u], v: remap[e.v], weight: e.weight })
            .collect();
        edges.sort_by_key(|a| (a.u, a.v));
        let label_index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Graph::assemble(name, labels, label_index, edges)
    }

    /// Subgraph on nodes with degree >= 1.
    pub fn prune_isolated(&self) -> Graph {
        self.subgraph_from_edges(&self.name, self.edges.iter())
    }

    /// BFS hop distances from `source`; `u32::MAX` marks unreachable nodes.
    pub(crate) fn bfs_distances(&self, source: NodeId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.node_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &(v, _) in &self.adjacency[u] {
                if dist[v] == u32::MAX {
                    dist[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected components as sorted node-id lists, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &(v, _) in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn component_count(&self) -> usize {
        self.connected_components().len()
    }

    /// Serialize as `label label weight` lines, edges sorted by id pair.
    pub fn write_edge_list<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        let mut buf = String::new();
        for e in &self.edges {
            buf.clear();
            let _ = writeln!(buf, "{} {} {}", self.label(e.u), self.label(e.v), e.weight);
            out.write_all(buf.as_bytes())?;
        }
        Ok(())
    }

    /// Sidecar `id<TAB>label` mapping, one node per line.
    pub fn write_nodes_tsv<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        for (id, label) in self.labels.iter().enumerate() {
            writeln!(out, "{id}\t{label}")?;
        }
        Ok(())
    }
}

/// Parse edge-list text: one `u v [w]` edge per line, `#` comments, fields
/// split on whitespace or single commas. Returns the canonicalized graph and
/// the load summary.
pub fn parse_edge_list(
    text: &str,
    source_name: &str,
    options: &ParseOptions,
) -> Result<(Graph, LoadSummary)> {
    let mut parsed: Vec<(String, String, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = if line.contains(',') {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.iter().any(|f| f.is_empty() || f.contains(char::is_whitespace)) {
                return Err(Error::Parse {
                    source_name: source_name.to_owned(),
                    line: line_no,
                    message: "empty or whitespace-containing field in comma-separated line"
                        .to_owned(),
                });
            }
            fields
        } else {
            line.split_whitespace().collect()
        };
        let (u, v, w) = match fields.as_slice() {
            [u, v] => (*u, *v, options.default_weight),
            [u, v, w] => {
                let weight: f64 = w.parse().map_err(|_| Error::Parse {
                    source_name: source_name.to_owned(),
                    line: line_no,
                    message: format!("cannot parse weight `{w}`"),
                })?;
                (*u, *v, weight)
            }
            _ => {
                return Err(Error::Parse {
                    source_name: source_name.to_owned(),
                    line: line_no,
                    message: format!("expected 2 or 3 fields, found {}", fields.len()),
                })
            }
        };
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Parse {
                source_name: source_name.to_owned(),
                line: line_no,
                message: format!("weight must be positive and finite, found {w}"),
            });
        }
        parsed.push((u.to_owned(), v.to_owned(), w));
    }
    Graph::from_labeled_edges(source_name, parsed)
}

/// Load an edge-list file; the graph name is the file stem.
pub fn load_edge_list<P: AsRef<Path>>(
    path: P,
    options: &ParseOptions,
) -> Result<(Graph, LoadSummary)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    parse_edge_list(&text, &name, options)
}
