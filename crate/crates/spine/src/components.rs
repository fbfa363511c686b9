//! Decomposition of a partitioned graph into local components (one per
//! community, induced on intra-community edges) and global components
//! (connected components of the inter-community edge subgraph).
//!
//! The edge sets of all locals plus all globals partition the original edge
//! set exactly; a boundary node may appear in one local and in one or more
//! globals, so downstream unions must work on edge identity, not node
//! identity.

use crate::community::Partition;
use crate::error::Result;
use crate::graph::{Edge, Graph, NodeId};

#[derive(Debug, Clone)]
pub struct ComponentStructure {
    /// One graph per community with at least one internal edge, isolated
    /// nodes pruned, ordered by community id.
    pub locals: Vec<Graph>,
    /// Connected components of the inter-community subgraph, ordered by
    /// smallest original node id.
    pub globals: Vec<Graph>,
    /// The partition that produced this decomposition.
    pub partition: Partition,
}

impl ComponentStructure {
    pub fn component_count(&self) -> usize {
        self.locals.len() + self.globals.len()
    }

    /// All components, locals first, with their kind tag.
    pub fn all(&self) -> impl Iterator<Item = (ComponentKind, usize, &Graph)> {
        self.locals
            .iter()
            .enumerate()
            .map(|(i, g)| (ComponentKind::Local, i, g))
            .chain(
                self.globals
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (ComponentKind::Global, i, g)),
            )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Local,
    Global,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::Local => "local",
            ComponentKind::Global => "global",
        }
    }
}

/// Split `g` into local and global components under partition `p`.
///
/// Communities whose induced subgraph has no edges contribute no local
/// component (a zero-edge component cannot receive a backbone budget).
pub fn extract_component_structure(g: &Graph, p: &Partition) -> Result<ComponentStructure> {
    crate::community::community_connectivity(g, p)?; // validates coverage

    let mut intra: Vec<Vec<Edge>> = vec![Vec::new(); p.community_count()];
    let mut inter: Vec<Edge> = Vec::new();
    for e in g.edges() {
        if p.community_of(e.u) == p.community_of(e.v) {
            intra[p.community_of(e.u)].push(*e);
        } else {
            inter.push(*e);
        }
    }

    let locals: Vec<Graph> = intra
        .iter()
        .enumerate()
        .filter(|(_, edges)| !edges.is_empty())
        .map(|(c, edges)| g.subgraph_from_edges(&format!("{}:local_{c}", g.name()), edges))
        .collect();

    // Group inter-community edges by connected component (union-find over
    // original node ids).
    let mut parent: Vec<NodeId> = (0..g.node_count()).collect();
    fn find(parent: &mut [NodeId], mut x: NodeId) -> NodeId {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in &inter {
        let (ru, rv) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if ru != rv {
            let (lo, hi) = (ru.min(rv), ru.max(rv));
            parent[hi] = lo;
        }
    }
    let mut grouped: std::collections::BTreeMap<NodeId, Vec<Edge>> =
        std::collections::BTreeMap::new();
    for e in &inter {
        grouped.entry(find(&mut parent, e.u)).or_default().push(*e);
    }
    let globals: Vec<Graph> = grouped
        .values()
        .enumerate()
        .map(|(i, edges)| g.subgraph_from_edges(&format!("{}:global_{i}", g.name()), edges))
        .collect();

    Ok(ComponentStructure {
        locals,
        globals,
        partition: p.clone(),
    })
}
