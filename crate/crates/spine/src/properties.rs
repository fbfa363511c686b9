//! Basic global properties of a graph: density, diameter, mean shortest path,
//! degree statistics, assortativity, clustering, transitivity, efficiency.
//!
//! All path-based quantities are hop counts on the unweighted topology and are
//! averaged over reachable ordered pairs only, so they stay defined on the
//! disconnected graphs that backbone extraction routinely produces. Weights
//! enter only through `avg_weighted_degree` and `total_weight`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalProperties {
    pub node_count: usize,
    pub edge_count: usize,
    /// Density `2E / (V (V-1))`.
    pub density: f64,
    /// Max hop distance over reachable pairs; `None` when E = 0.
    pub diameter: Option<u32>,
    /// Mean hop distance over reachable ordered pairs; `None` when E = 0.
    pub avg_shortest_path: Option<f64>,
    /// The small-world estimate `ln V / ln <k>`, reported for reference only;
    /// `None` when `<k> <= 1`.
    pub avg_shortest_path_log_estimate: Option<f64>,
    pub avg_degree: f64,
    pub avg_weighted_degree: f64,
    pub max_degree: usize,
    /// Degree assortativity; `None` when the degree variance term vanishes
    /// (regular graphs, E = 0).
    pub assortativity: Option<f64>,
    /// Mean local clustering coefficient (nodes of degree < 2 count as 0).
    pub avg_clustering: f64,
    /// Global transitivity: 3 * triangles / triads.
    pub transitivity: f64,
    /// Mean inverse hop distance over ordered pairs, unreachable pairs as 0.
    pub global_efficiency: f64,
    pub total_weight: f64,
    pub connected_components: usize,
}

struct BfsAccumulator {
    reachable_pairs: u64,
    distance_sum: u64,
    inverse_sum: f64,
    max_distance: u32,
}

/// Compute every [`GlobalProperties`] field. Errors on an empty node set.
pub fn global_properties(g: &Graph) -> Result<GlobalProperties> {
    let v = g.node_count();
    if v == 0 {
        return Err(Error::EmptyGraph(g.name().to_owned()));
    }
    let e = g.edge_count();

    let density = if v > 1 {
        2.0 * e as f64 / (v as f64 * (v as f64 - 1.0))
    } else {
        0.0
    };
    let avg_degree = 2.0 * e as f64 / v as f64;
    let avg_weighted_degree = 2.0 * g.total_weight() / v as f64;
    let max_degree = (0..v).map(|i| g.degree(i)).max().unwrap_or(0);

    let bfs = (0..v)
        .into_par_iter()
        .map(|source| {
            let dist = g.bfs_distances(source);
            let mut acc = BfsAccumulator {
                reachable_pairs: 0,
                distance_sum: 0,
                inverse_sum: 0.0,
                max_distance: 0,
            };
            for (target, &d) in dist.iter().enumerate() {
                if target == source || d == u32::MAX {
                    continue;
                }
                acc.reachable_pairs += 1;
                acc.distance_sum += u64::from(d);
                acc.inverse_sum += 1.0 / f64::from(d);
                acc.max_distance = acc.max_distance.max(d);
            }
            acc
        })
        .collect::<Vec<_>>();

    let mut reachable_pairs = 0u64;
    let mut distance_sum = 0u64;
    let mut inverse_sum = 0.0f64;
    let mut max_distance = 0u32;
    for acc in bfs {
        reachable_pairs += acc.reachable_pairs;
        distance_sum += acc.distance_sum;
        inverse_sum += acc.inverse_sum;
        max_distance = max_distance.max(acc.max_distance);
    }

    let (diameter, avg_shortest_path) = if reachable_pairs > 0 {
        (
            Some(max_distance),
            Some(distance_sum as f64 / reachable_pairs as f64),
        )
    } else {
        (None, None)
    };
    let global_efficiency = if v > 1 {
        inverse_sum / (v as f64 * (v as f64 - 1.0))
    } else {
        0.0
    };
    let avg_shortest_path_log_estimate = if avg_degree > 1.0 {
        Some((v as f64).ln() / avg_degree.ln())
    } else {
        None
    };

    // Triangle counts per node: links among each node's neighborhood.
    let triangles_at: Vec<u64> = (0..v)
        .into_par_iter()
        .map(|i| {
            let nbrs = g.neighbors(i);
            let mut count = 0u64;
            for (a_idx, &(a, _)) in nbrs.iter().enumerate() {
                let a_nbrs = g.neighbors(a);
                for &(b, _) in &nbrs[a_idx + 1..] {
                    if a_nbrs.binary_search_by(|probe| probe.0.cmp(&b)).is_ok() {
                        count += 1;
                    }
                }
            }
            count
        })
        .collect();

    let mut clustering_sum = 0.0;
    let mut closed_triads = 0u64;
    let mut triads = 0u64;
    for (i, &triangles) in triangles_at.iter().enumerate() {
        let k = g.degree(i) as u64;
        if k >= 2 {
            let possible = k * (k - 1) / 2;
            clustering_sum += triangles as f64 / possible as f64;
            triads += possible;
            closed_triads += triangles;
        }
    }
    let avg_clustering = clustering_sum / v as f64;
    let transitivity = if triads > 0 {
        closed_triads as f64 / triads as f64
    } else {
        0.0
    };

    Ok(GlobalProperties {
        node_count: v,
        edge_count: e,
        density,
        diameter,
        avg_shortest_path,
        avg_shortest_path_log_estimate,
        avg_degree,
        avg_weighted_degree,
        max_degree,
        assortativity: assortativity(g),
        avg_clustering,
        transitivity,
        global_efficiency,
        total_weight: g.total_weight(),
        connected_components: g.component_count(),
    })
}

/// Degree assortativity: Pearson correlation of endpoint degrees over edges.
/// `None` when the variance term is zero (regular graphs), never NaN.
pub fn assortativity(g: &Graph) -> Option<f64> {
    if g.edge_count() == 0 {
        return None;
    }
    let m = g.edge_count() as f64;
    let mut sum_prod = 0.0;
    let mut sum_half = 0.0;
    let mut sum_sq_half = 0.0;
    for e in g.edges() {
        let x = g.degree(e.u) as f64;
        let y = g.degree(e.v) as f64;
        sum_prod += x * y;
        sum_half += 0.5 * (x + y);
        sum_sq_half += 0.5 * (x * x + y * y);
    }
    let mean_half = sum_half / m;
    let numerator = sum_prod / m - mean_half * mean_half;
    let denominator = sum_sq_half / m - mean_half * mean_half;
    if denominator.abs() < 1e-12 * (1.0 + sum_sq_half / m) {
        None
    } else {
        Some(numerator / denominator)
    }
}
