//! Louvain community detection and mesoscopic metrics: weighted modularity,
//! participation coefficients, inter-/intra-community connectivity.
//!
//! The Louvain implementation is the standard two-phase scheme (greedy local
//! moves, then aggregation) on weighted graphs. Determinism contract: for a
//! fixed seed the result is bit-reproducible: the seed drives the node-visit
//! shuffle, gain ties break toward the lowest community id, and all internal
//! maps are iterated in sorted order.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

pub type CommunityId = usize;

/// Node -> community assignment with dense community ids `0..C-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<CommunityId>,
    community_count: usize,
}

impl Partition {
    /// Renumbers arbitrary community labels densely, in order of first
    /// appearance, so equal partitions get equal representations.
    pub fn from_assignment(raw: Vec<usize>) -> Partition {
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut next = 0;
        let mut assignment = Vec::with_capacity(raw.len());
        for label in raw {
            let id = *remap.entry(label).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            assignment.push(id);
        }
        Partition { assignment, community_count: next }
    }

    pub fn singletons(n: usize) -> Partition {
        Partition { assignment: (0..n).collect(), community_count: n }
    }

    pub fn community_of(&self, node: NodeId) -> CommunityId {
        self.assignment[node]
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[CommunityId] {
        &self.assignment
    }

    /// Members of each community, by community id.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.community_count];
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c].push(node);
        }
        out
    }

    /// Serialize as `node_label<TAB>community_id` lines.
    pub fn write_tsv<W: std::io::Write>(&self, g: &Graph, mut out: W) -> std::io::Result<()> {
        for node in 0..self.assignment.len() {
            writeln!(out, "{}\t{}", g.label(node), self.assignment[node])?;
        }
        Ok(())
    }

    fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.assignment.len() != g.node_count() {
            return Err(Error::InvalidPlan(format!(
                "partition covers {} nodes but graph `{}` has {}",
                self.assignment.len(),
                g.name(),
                g.node_count()
            )));
        }
        Ok(())
    }
}

/// Weighted modularity (Kronecker-delta form): sums, per community, the
/// internal weight fraction minus the squared strength fraction.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    p.check_covers(g)?;
    let w = g.total_weight();
    if w <= 0.0 {
        return Err(Error::InvalidGraph(format!(
            "graph `{}` has zero total weight; modularity undefined",
            g.name()
        )));
    }
    let mut internal = vec![0.0f64; p.community_count()];
    let mut strength = vec![0.0f64; p.community_count()];
    for e in g.edges() {
        if p.community_of(e.u) == p.community_of(e.v) {
            internal[p.community_of(e.u)] += e.weight;
        }
    }
    for node in 0..g.node_count() {
        strength[p.community_of(node)] += g.strength(node);
    }
    let mut q = 0.0;
    for c in 0..p.community_count() {
        q += internal[c] / w - (strength[c] / (2.0 * w)).powi(2);
    }
    Ok(q)
}

/// Louvain at resolution 1. `seed` drives the node-visit shuffle only.
/// Edge-free graphs yield the singleton partition with a warning.
pub fn louvain(g: &Graph, seed: u64) -> Result<Partition> {
    Ok(louvain_with_trace(g, seed)?.0)
}

/// Louvain plus the modularity recorded after every aggregation pass, for
/// callers that want to assert the monotone-improvement invariant.
pub fn louvain_with_trace(g: &Graph, seed: u64) -> Result<(Partition, Vec<f64>)> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph(g.name().to_owned()));
    }
    if g.edge_count() == 0 {
        log::warn!(
            "louvain on `{}`: no edges, returning singleton partition",
            g.name()
        );
        return Ok((Partition::singletons(g.node_count()), Vec::new()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = LevelGraph::from_graph(g);
    // membership[node] = current meta-node of each original node
    let mut membership: Vec<usize> = (0..g.node_count()).collect();
    let mut trace: Vec<f64> = Vec::new();

    loop {
        let (local, moved) = level.local_moving(&mut rng);
        if !moved && !trace.is_empty() {
            break;
        }
        let dense = Partition::from_assignment(local);
        for m in membership.iter_mut() {
            *m = dense.community_of(*m);
        }
        let q = modularity(g, &Partition::from_assignment(membership.clone()))?;
        if let Some(&prev) = trace.last() {
            if q - prev < 1e-9 {
                break; // negligible improvement; stop before another level
            }
        }
        trace.push(q);
        if dense.community_count() == level.node_count() {
            break;
        }
        level = level.aggregate(&dense);
    }

    Ok((Partition::from_assignment(membership), trace))
}

/// Best-of-k Louvain: runs seeds `0..k`, keeps the max-modularity partition,
/// ties broken by the lowest seed. Returns the partition and the chosen seed.
pub fn louvain_best_of(g: &Graph, k: u64) -> Result<(Partition, u64)> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph(g.name().to_owned()));
    }
    if g.edge_count() == 0 {
        return Ok((Partition::singletons(g.node_count()), 0));
    }
    let runs: Vec<(u64, Partition, f64)> = (0..k)
        .into_par_iter()
        .map(|seed| {
            let p = louvain(g, seed)?;
            let q = modularity(g, &p)?;
            Ok((seed, p, q))
        })
        .collect::<Result<_>>()?;
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.2 > a.2 { b } else { a })
        .expect("k >= 1 louvain runs");
    Ok((best.1, best.0))
}

/// Default seed count for "auto" seeding.
pub const AUTO_SEED_RUNS: u64 = 10;

/// Participation coefficient per node: `1 - sum_c (k_{i,c} / k_i)^2` with
/// edge counts (unweighted); isolated nodes get 0.
pub fn participation_coefficients(g: &Graph, p: &Partition) -> Result<Vec<f64>> {
    p.check_covers(g)?;
    let mut out = Vec::with_capacity(g.node_count());
    for node in 0..g.node_count() {
        let k = g.degree(node);
        if k == 0 {
            out.push(0.0);
            continue;
        }
        let mut per_community: BTreeMap<CommunityId, usize> = BTreeMap::new();
        for &(nbr, _) in g.neighbors(node) {
            *per_community.entry(p.community_of(nbr)).or_insert(0) += 1;
        }
        let sum_sq: f64 = per_community
            .values()
            .map(|&count| (count as f64 / k as f64).powi(2))
            .sum();
        out.push(1.0 - sum_sq);
    }
    Ok(out)
}

/// Total weight on inter-community edges and on intra-community edges.
/// The two always add up to the graph's total weight.
pub fn community_connectivity(g: &Graph, p: &Partition) -> Result<(f64, f64)> {
    p.check_covers(g)?;
    let mut inter = 0.0;
    let mut intra = 0.0;
    for e in g.edges() {
        if p.community_of(e.u) == p.community_of(e.v) {
            intra += e.weight;
        } else {
            inter += e.weight;
        }
    }
    Ok((inter, intra))
}

/// Working graph for one Louvain level: meta-nodes with inter-node weights
/// and self-loops carrying the weight folded inside each meta-node.
struct LevelGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    strengths: Vec<f64>,
    total_weight: f64,
}

impl LevelGraph {
    fn from_graph(g: &Graph) -> LevelGraph {
        let n = g.node_count();
        let adjacency: Vec<Vec<(usize, f64)>> =
            (0..n).map(|i| g.neighbors(i).to_vec()).collect();
        let strengths = (0..n).map(|i| g.strength(i)).collect();
        LevelGraph {
            adjacency,
            self_loops: vec![0.0; n],
            strengths,
            total_weight: g.total_weight(),
        }
    }

    fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Phase 1: greedy local moves until no node improves modularity.
    /// Returns the level-local assignment and whether anything moved.
    fn local_moving(&self, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.node_count();
        let two_m = 2.0 * self.total_weight;
        let mut community: Vec<usize> = (0..n).collect();
        let mut community_strength: Vec<f64> = self.strengths.clone();

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut any_moved = false;
        // Strictly improving moves raise Q and tie moves strictly lower a
        // node's community id, so sweeps terminate; the cap guards off any
        // floating-point edge case.
        for _sweep in 0..200 {
            let mut moved_this_sweep = false;
            for &node in &order {
                let current = community[node];
                let k_i = self.strengths[node];
                community_strength[current] -= k_i;

                // Weight from `node` toward each neighboring community,
                // gathered in community-id order for deterministic ties.
                let mut toward: BTreeMap<usize, f64> = BTreeMap::new();
                toward.insert(current, 0.0);
                for &(nbr, w) in &self.adjacency[node] {
                    *toward.entry(community[nbr]).or_insert(0.0) += w;
                }

                let mut best_comm = current;
                let mut best_gain = f64::NEG_INFINITY;
                for (&cand, &k_i_in) in &toward {
                    let gain = k_i_in - community_strength[cand] * k_i / two_m;
                    if gain > best_gain {
                        best_gain = gain;
                        best_comm = cand;
                    }
                }

                community_strength[best_comm] += k_i;
                if best_comm != current {
                    community[node] = best_comm;
                    moved_this_sweep = true;
                    any_moved = true;
                }
            }
            if !moved_this_sweep {
                break;
            }
        }
        (community, any_moved)
    }

    /// Phase 2: collapse each community to a meta-node.
    fn aggregate(&self, dense: &Partition) -> LevelGraph {
        let n_new = dense.community_count();
        let mut self_loops = vec![0.0; n_new];
        let mut between: BTreeMap<(usize, usize), f64> = BTreeMap::new();

        for (node, loops) in self.self_loops.iter().enumerate() {
            self_loops[dense.community_of(node)] += loops;
        }
        for (node, nbrs) in self.adjacency.iter().enumerate() {
            let cu = dense.community_of(node);
            for &(nbr, w) in nbrs {
                if nbr < node {
                    continue; // each undirected pair once
                }
                let cv = dense.community_of(nbr);
                if cu == cv {
                    self_loops[cu] += w;
                } else {
                    *between.entry((cu.min(cv), cu.max(cv))).or_insert(0.0) += w;
                }
            }
        }

        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_new];
        for (&(a, b), &w) in &between {
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }
        for nbrs in &mut adjacency {
            nbrs.sort_by_key(|a| a.0);
        }
        let strengths: Vec<f64> = (0..n_new)
            .map(|i| {
                adjacency[i].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_loops[i]
            })
            .collect();
        LevelGraph {
            adjacency,
            self_loops,
            strengths,
            total_weight: self.total_weight,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn clique_pair() -> Graph {
        // Two 4-cliques, no bridge.
        let mut edges = Vec::new();
        for base in [0usize, 4] {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    edges.push((base + i, base + j, 1.0));
                }
            }
        }
        Graph::from_edges("cliques", &edges).unwrap()
    }

    fn barbell() -> Graph {
        let mut edges = Vec::new();
        for base in [0usize, 4] {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    edges.push((base + i, base + j, 1.0));
                }
            }
        }
        edges.push((3, 4, 1.0));
        Graph::from_edges("barbell", &edges).unwrap()
    }

    #[test]
    fn modularity_of_single_community_is_zero() {
        let g = barbell();
        let p = Partition::from_assignment(vec![0; 8]);
        assert!(modularity(&g, &p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn modularity_of_two_disjoint_cliques_is_half() {
        let g = clique_pair();
        let p = Partition::from_assignment(vec![0, 0, 0, 0, 1, 1, 1, 1]);
        assert!((modularity(&g, &p).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn louvain_splits_disjoint_cliques() {
        let g = clique_pair();
        let p = louvain(&g, 0).unwrap();
        assert_eq!(p.community_count(), 2);
        for i in 1..4 {
            assert_eq!(p.community_of(0), p.community_of(i));
            assert_eq!(p.community_of(4), p.community_of(4 + i));
        }
        assert_ne!(p.community_of(0), p.community_of(4));
    }

    /// Enumerate every partition of `n` nodes (restricted growth strings).
    fn all_partitions(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = vec![0usize; n];
        fn recurse(current: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
            if pos == current.len() {
                out.push(current.clone());
                return;
            }
            for c in 0..=max_used + 1 {
                current[pos] = c;
                recurse(current, pos + 1, max_used.max(c), out);
            }
        }
        recurse(&mut current, 1, 0, &mut out);
        out
    }

    #[test]
    fn louvain_matches_exhaustive_max_modularity_on_barbell() {
        let g = barbell();
        let mut best_q = f64::NEG_INFINITY;
        let mut best = Vec::new();
        for assignment in all_partitions(8) {
            let q = modularity(&g, &Partition::from_assignment(assignment.clone())).unwrap();
            if q > best_q {
                best_q = q;
                best = assignment;
            }
        }
        let brute = Partition::from_assignment(best);
        assert_eq!(brute.community_count(), 2, "optimum should be the two cliques");

        let (p, _seed) = louvain_best_of(&g, 10).unwrap();
        let q = modularity(&g, &p).unwrap();
        assert!(
            (q - best_q).abs() < 1e-12,
            "louvain Q {q} vs brute-force optimum {best_q}"
        );
        assert_eq!(p.community_count(), 2);
    }

    #[test]
    fn louvain_is_reproducible_for_fixed_seed() {
        let g = barbell();
        let a = louvain(&g, 42).unwrap();
        let b = louvain(&g, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn louvain_trace_never_decreases() {
        let g = barbell();
        for seed in 0..5 {
            let (_, trace) = louvain_with_trace(&g, seed).unwrap();
            for pair in trace.windows(2) {
                assert!(pair[1] >= pair[0] - 1e-12, "trace decreased: {trace:?}");
            }
        }
    }

    #[test]
    fn edgeless_graph_returns_singletons() {
        let g = Graph::from_parts("iso", 4, &[]).unwrap();
        let p = louvain(&g, 0).unwrap();
        assert_eq!(p.community_count(), 4);
    }

    #[test]
    fn participation_examples() {
        // Node 1 has both neighbors in its own community.
        let g = Graph::from_edges("t", &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let own = Partition::from_assignment(vec![0, 0, 0]);
        let p = participation_coefficients(&g, &own).unwrap();
        assert_eq!(p[1], 0.0);

        // Degree 2 split across two communities: 1 - 2 (1/2)^2 = 1/2.
        let split = Partition::from_assignment(vec![0, 0, 1]);
        let p = participation_coefficients(&g, &split).unwrap();
        assert!((p[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn participation_bound_by_community_count() {
        // Exhaustive bound check on small random graphs: 0 <= P_i <= 1 - 1/C.
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v, rng.gen_range(1..5) as f64));
                    }
                }
            }
            let g = Graph::from_parts("r", n, &edges).unwrap();
            let assignment: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            let p = Partition::from_assignment(assignment);
            let coefficients = participation_coefficients(&g, &p).unwrap();
            let cap = 1.0 - 1.0 / p.community_count() as f64;
            for (node, &value) in coefficients.iter().enumerate() {
                assert!(value >= -1e-12, "negative P at {node}");
                if g.degree(node) > 0 {
                    assert!(value <= cap + 1e-12, "P {value} above 1 - 1/C {cap}");
                }
            }
        }
    }

    #[test]
    fn connectivity_splits_total_weight() {
        let g = barbell();
        let p = louvain(&g, 1).unwrap();
        let (inter, intra) = community_connectivity(&g, &p).unwrap();
        assert!(((inter + intra) - g.total_weight()).abs() < 1e-9 * g.total_weight());

        let one = Partition::from_assignment(vec![0; 8]);
        let (inter, intra) = community_connectivity(&g, &one).unwrap();
        assert_eq!(inter, 0.0);
        assert_eq!(intra, g.total_weight());

        let singles = Partition::singletons(8);
        let (inter, intra) = community_connectivity(&g, &singles).unwrap();
        assert_eq!(intra, 0.0);
        assert_eq!(inter, g.total_weight());
    }
}
