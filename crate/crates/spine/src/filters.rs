//! Edge filters behind a common "score, then keep a budget" interface.
//!
//! Two filters are provided. The global threshold ranks edges by weight and
//! keeps the heaviest ones up to the budget. The disparity filter scores each
//! edge against a per-node null model in which a node's normalized weights are
//! uniformly split: from node `i`'s side an edge gets
//! `alpha_ij = (1 - w_ij / s_i)^(k_i - 1)`, the edge keeps the more
//! significant (smaller) of its two side scores, and degree-1 sides score 1
//! because the null model is undefined there.
//!
//! Selection order is part of the public contract so backbones are
//! bit-reproducible: weight descending, then endpoint ids ascending; the
//! disparity filter ranks by score ascending first. Budgets use
//! round-half-to-even.

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, Graph};

/// Version tag recorded in provenance for the deterministic selection order.
pub const TIEBREAK_VERSION: &str = "weight-desc,endpoint-asc/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    GlobalThreshold,
    Disparity,
}

impl FilterKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterKind::GlobalThreshold => "global_threshold",
            FilterKind::Disparity => "disparity_filter",
        }
    }
}

/// How many / which edges to keep: a fraction of the edge count, or a
/// significance level for the disparity filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    Fraction(f64),
    Alpha(f64),
}

/// Per-edge significance score; lower scores are retained first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeScore {
    pub edge: Edge,
    pub score: f64,
}

/// An extracted backbone: the retained subgraph plus how it was produced.
#[derive(Debug, Clone)]
pub struct Backbone {
    pub graph: Graph,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    pub mode: String,
    pub fraction: Option<f64>,
    pub alpha: Option<f64>,
    /// Louvain seed that produced the partition (multilevel only).
    pub partition_seed: Option<u64>,
    pub seed_policy: Option<String>,
    pub source: String,
    pub tiebreak_version: String,
    /// Per-component sizes and budgets (empty for classical extraction).
    pub components: Vec<ComponentBudget>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentBudget {
    pub kind: String,
    pub index: usize,
    pub nodes: usize,
    pub edges: usize,
    pub budget: usize,
}

impl Provenance {
    pub fn classical(method: FilterKind, selection: Selection, source: &str) -> Provenance {
        let (fraction, alpha) = match selection {
            Selection::Fraction(f) => (Some(f), None),
            Selection::Alpha(a) => (None, Some(a)),
        };
        Provenance {
            method: method.as_str().to_owned(),
            mode: "classical".to_owned(),
            fraction,
            alpha,
            partition_seed: None,
            seed_policy: None,
            source: source.to_owned(),
            tiebreak_version: TIEBREAK_VERSION.to_owned(),
            components: Vec::new(),
        }
    }
}

/// Retained-edge target: round-half-to-even of `fraction * edge_count`.
pub fn edge_budget(edge_count: usize, fraction: f64) -> usize {
    assert!(
        (0.0..=1.0).contains(&fraction),
        "fraction must lie in [0, 1], got {fraction}"
    );
    let x = fraction * edge_count as f64;
    let floor = x.floor();
    // Snap near-half remainders to an exact tie so that decimal fractions
    // (0.3 * 1255 = 376.5) hit the half-to-even rule despite binary rounding.
    if (x - floor - 0.5).abs() < 1e-9 {
        if (floor as u64).is_multiple_of(2) {
            floor as usize
        } else {
            floor as usize + 1
        }
    } else {
        x.round() as usize
    }
}

/// Edges ranked heaviest-first with the deterministic tiebreak.
fn rank_by_weight(g: &Graph) -> Vec<Edge> {
    let mut edges = g.edges().to_vec();
    edges.sort_by(|a, b| {
        b.weight
            .partial_cmp(&a.weight)
            .expect("finite weights")
            .then(a.u.cmp(&b.u))
            .then(a.v.cmp(&b.v))
    });
    edges
}

/// The edges the global threshold keeps at `fraction`, in rank order.
pub fn global_threshold_edges(g: &Graph, fraction: f64) -> Vec<Edge> {
    let budget = edge_budget(g.edge_count(), fraction);
    let mut edges = rank_by_weight(g);
    edges.truncate(budget);
    edges
}

/// Global threshold backbone: keep the `edge_budget` heaviest edges.
pub fn global_threshold(g: &Graph, fraction: f64) -> Backbone {
    let kept = global_threshold_edges(g, fraction);
    Backbone {
        graph: g.subgraph_from_edges(g.name(), &kept),
        provenance: Provenance::classical(
            FilterKind::GlobalThreshold,
            Selection::Fraction(fraction),
            g.name(),
        ),
    }
}

fn disparity_side(degree: usize, weight: f64, strength: f64) -> f64 {
    if degree <= 1 {
        return 1.0;
    }
    let p = weight / strength;
    (1.0 - p).powi(degree as i32 - 1)
}

/// Disparity score for every edge: the minimum of the two side scores.
pub fn disparity_scores(g: &Graph) -> Vec<EdgeScore> {
    let strengths: Vec<f64> = (0..g.node_count()).map(|i| g.strength(i)).collect();
    g.edges()
        .iter()
        .map(|e| {
            let a = disparity_side(g.degree(e.u), e.weight, strengths[e.u]);
            let b = disparity_side(g.degree(e.v), e.weight, strengths[e.v]);
            EdgeScore { edge: *e, score: a.min(b) }
        })
        .collect()
}

/// The edges the disparity filter keeps, in rank order.
pub fn disparity_filter_edges(g: &Graph, selection: Selection) -> Vec<Edge> {
    let mut scored = disparity_scores(g);
    scored.sort_by(|a, b| {
        a.score
            .partial_cmp(&b.score)
            .expect("finite scores")
            .then(b.edge.weight.partial_cmp(&a.edge.weight).expect("finite weights"))
            .then(a.edge.u.cmp(&b.edge.u))
            .then(a.edge.v.cmp(&b.edge.v))
    });
    match selection {
        Selection::Fraction(fraction) => {
            let budget = edge_budget(g.edge_count(), fraction);
            scored.truncate(budget);
        }
        Selection::Alpha(alpha) => {
            scored.retain(|s| s.score < alpha);
        }
    }
    scored.into_iter().map(|s| s.edge).collect()
}

/// Disparity filter backbone, in fraction (budget) or alpha (significance)
/// mode.
pub fn disparity_filter(g: &Graph, selection: Selection) -> Backbone {
    let kept = disparity_filter_edges(g, selection);
    Backbone {
        graph: g.subgraph_from_edges(g.name(), &kept),
        provenance: Provenance::classical(FilterKind::Disparity, selection, g.name()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn budget_reproduces_thirty_percent_columns() {
        // All seven (E, 0.3) pairs used across the studied networks; the
        // 1255-edge case lands exactly on .5 and pins half-to-even.
        for (edges, expected) in [
            (78, 23),
            (336, 101),
            (243, 73),
            (254, 76),
            (1255, 376),
            (16313, 4894),
            (47594, 14278),
        ] {
            assert_eq!(edge_budget(edges, 0.3), expected, "E={edges}");
        }
    }

    #[test]
    fn budget_bounds_and_exact_ties() {
        assert_eq!(edge_budget(10, 0.0), 0);
        assert_eq!(edge_budget(10, 1.0), 10);
        assert_eq!(edge_budget(7, 0.5), 4); // 3.5 -> even 4
        assert_eq!(edge_budget(5, 0.5), 2); // 2.5 -> even 2
        assert_eq!(edge_budget(0, 0.7), 0);
    }

    #[test]
    fn global_threshold_keeps_heaviest() {
        let g = Graph::from_edges("t", &[(0, 1, 5.0), (1, 2, 3.0), (2, 3, 1.0)]).unwrap();
        let b = global_threshold(&g, 1.0 / 3.0);
        assert_eq!(b.graph.edge_count(), 1);
        assert_eq!(b.graph.edges()[0].weight, 5.0);

        let identity = global_threshold(&g, 1.0);
        assert_eq!(identity.graph.labeled_edge_map(), g.labeled_edge_map());
    }

    #[test]
    fn global_threshold_nesting() {
        let g = Graph::from_edges(
            "t",
            &[(0, 1, 5.0), (1, 2, 5.0), (2, 3, 3.0), (3, 4, 2.0), (4, 5, 1.0)],
        )
        .unwrap();
        let keyset = |b: &Backbone| -> std::collections::HashSet<(String, String)> {
            b.graph
                .labeled_edge_map()
                .into_keys()
                .map(|(a, b)| (a.to_owned(), b.to_owned()))
                .collect()
        };
        let mut previous = std::collections::HashSet::new();
        for i in 1..=10 {
            let current = keyset(&global_threshold(&g, i as f64 / 10.0));
            assert!(
                previous.is_subset(&current),
                "nesting broken at fraction {i}/10"
            );
            previous = current;
        }
    }

    #[test]
    fn disparity_side_scores() {
        // Node of degree 3 whose edge carries half its strength:
        // (1 - 0.5)^2 = 0.25.
        assert_eq!(disparity_side(3, 2.0, 4.0), 0.25);
        // Degree-1 side never significant.
        assert_eq!(disparity_side(1, 7.0, 7.0), 1.0);
    }

    #[test]
    fn leaf_edge_scored_by_hub_side_only() {
        // Hub 0 with 4 unit-weight spokes; edge (0,4) seen from the leaf is 1,
        // so its score is the hub side (1 - 1/4)^3.
        let g = Graph::from_edges(
            "star",
            &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (0, 4, 1.0)],
        )
        .unwrap();
        let scores = disparity_scores(&g);
        let expected = (1.0_f64 - 0.25).powi(3);
        for s in scores {
            assert!((s.score - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn equal_weight_star_is_emptied_at_low_alpha() {
        // Hub side score (1 - 1/k)^(k-1) stays above 0.05 for k <= 50, so an
        // alpha of 0.05 keeps nothing.
        for k in 2..=50usize {
            let side = (1.0 - 1.0 / k as f64).powi(k as i32 - 1);
            assert!(side > 0.05, "k={k} side={side}");
        }
        let edges: Vec<_> = (1..=6).map(|leaf| (0, leaf, 2.0)).collect();
        let g = Graph::from_edges("star", &edges).unwrap();
        let b = disparity_filter(&g, Selection::Alpha(0.05));
        assert_eq!(b.graph.edge_count(), 0);
        assert_eq!(b.graph.node_count(), 0);
    }

    #[test]
    fn fraction_mode_budget_is_exact_and_identity_at_one() {
        let g = Graph::from_edges(
            "t",
            &[(0, 1, 9.0), (0, 2, 1.0), (1, 2, 3.0), (2, 3, 4.0), (1, 3, 2.0)],
        )
        .unwrap();
        for i in 0..=10 {
            let f = i as f64 / 10.0;
            let b = disparity_filter(&g, Selection::Fraction(f));
            assert_eq!(b.graph.edge_count(), edge_budget(g.edge_count(), f));
        }
        let identity = disparity_filter(&g, Selection::Fraction(1.0));
        assert_eq!(identity.graph.labeled_edge_map(), g.labeled_edge_map());
    }

    #[test]
    fn disparity_scores_are_scale_covariant() {
        let base = vec![(0usize, 1usize, 3.0), (1, 2, 5.0), (0, 2, 2.0), (2, 3, 7.0)];
        let scaled: Vec<_> = base.iter().map(|&(u, v, w)| (u, v, w * 1000.0)).collect();
        let g1 = Graph::from_edges("a", &base).unwrap();
        let g2 = Graph::from_edges("b", &scaled).unwrap();
        for (s1, s2) in disparity_scores(&g1).iter().zip(disparity_scores(&g2).iter()) {
            assert_eq!(s1.score, s2.score, "integer weights scale exactly");
        }
    }

    #[test]
    fn backbone_weights_match_parent_bit_exactly() {
        let g = Graph::from_edges("t", &[(0, 1, 0.1 + 0.2), (1, 2, 1.5), (0, 2, 2.5)]).unwrap();
        let parent = g.labeled_edge_map();
        let b = global_threshold(&g, 0.67);
        for ((a, c), w) in b.graph.labeled_edge_map() {
            assert_eq!(parent[&(a, c)].to_bits(), w.to_bits());
        }
    }
}
