//! Backbone extraction orchestration: the multilevel scheme applies the
//! chosen filter independently to every local and global component and unions
//! the per-component backbones; the classical baseline applies the filter
//! once to the whole graph.
//!
//! The partition is detected once on the original graph and never re-detected
//! per component. Because the component edge sets partition the original edge
//! set, the union is a plain concatenation and the result is deterministic
//! regardless of component processing order.

use crate::community::{louvain, louvain_best_of, Partition, AUTO_SEED_RUNS};
use crate::components::extract_component_structure;
use crate::error::{Error, Result};
use crate::filters::{
    disparity_filter_edges, edge_budget, global_threshold_edges, Backbone, ComponentBudget,
    FilterKind, Provenance, Selection,
};
use crate::graph::{Edge, Graph};

/// Seeding policy for partition detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedPolicy {
    Fixed(u64),
    /// Best modularity over seeds `0..AUTO_SEED_RUNS`, lowest seed on ties.
    Auto,
}

impl SeedPolicy {
    pub fn describe(&self) -> String {
        match self {
            SeedPolicy::Fixed(s) => format!("fixed:{s}"),
            SeedPolicy::Auto => format!("auto:best-of-{AUTO_SEED_RUNS}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionMode {
    Classical,
    Multilevel,
}

impl ExtractionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtractionMode::Classical => "classical",
            ExtractionMode::Multilevel => "multilevel",
        }
    }
}

/// Everything needed to run one extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionPlan {
    pub filter: FilterKind,
    pub selection: Selection,
    pub partition_seed: SeedPolicy,
    pub mode: ExtractionMode,
}

impl ExtractionPlan {
    pub fn validate(&self) -> Result<()> {
        match self.selection {
            Selection::Fraction(f) if !(0.0..=1.0).contains(&f) => Err(Error::InvalidPlan(
                format!("fraction {f} outside [0, 1]"),
            )),
            Selection::Alpha(a) if !(a.is_finite() && a > 0.0) => Err(Error::InvalidPlan(
                format!("alpha {a} must be positive and finite"),
            )),
            Selection::Alpha(_) if self.filter == FilterKind::GlobalThreshold => Err(
                Error::InvalidPlan("alpha mode applies to the disparity filter only".to_owned()),
            ),
            _ => Ok(()),
        }
    }
}

fn select_edges(g: &Graph, filter: FilterKind, selection: Selection) -> Vec<Edge> {
    match filter {
        FilterKind::GlobalThreshold => match selection {
            Selection::Fraction(f) => global_threshold_edges(g, f),
            Selection::Alpha(_) => unreachable!("rejected by ExtractionPlan::validate"),
        },
        FilterKind::Disparity => disparity_filter_edges(g, selection),
    }
}

/// Run the plan: classical or multilevel extraction.
pub fn extract_backbone(g: &Graph, plan: &ExtractionPlan) -> Result<Backbone> {
    plan.validate()?;
    match plan.mode {
        ExtractionMode::Classical => classical_backbone(g, plan),
        ExtractionMode::Multilevel => multilevel_backbone(g, plan),
    }
}

/// Apply the chosen filter once to the whole graph.
pub fn classical_backbone(g: &Graph, plan: &ExtractionPlan) -> Result<Backbone> {
    plan.validate()?;
    let kept = select_edges(g, plan.filter, plan.selection);
    let mut provenance = Provenance::classical(plan.filter, plan.selection, g.name());
    provenance.mode = ExtractionMode::Classical.as_str().to_owned();
    Ok(Backbone {
        graph: g.subgraph_from_edges(g.name(), &kept),
        provenance,
    })
}

/// Detect the partition, split into components, filter each independently,
/// and union the component backbones.
pub fn multilevel_backbone(g: &Graph, plan: &ExtractionPlan) -> Result<Backbone> {
    plan.validate()?;
    if g.edge_count() == 0 {
        log::warn!(
            "multilevel extraction on `{}`: no edges, backbone is empty",
            g.name()
        );
        let mut provenance = Provenance::classical(plan.filter, plan.selection, g.name());
        provenance.mode = ExtractionMode::Multilevel.as_str().to_owned();
        provenance.seed_policy = Some(plan.partition_seed.describe());
        return Ok(Backbone {
            graph: g.subgraph_from_edges(g.name(), []),
            provenance,
        });
    }
    let (partition, seed) = match plan.partition_seed {
        SeedPolicy::Fixed(s) => (louvain(g, s)?, s),
        SeedPolicy::Auto => louvain_best_of(g, AUTO_SEED_RUNS)?,
    };
    multilevel_backbone_with_partition(g, &partition, Some(seed), plan)
}

/// Multilevel extraction under a caller-supplied partition (used by sweeps,
/// which detect one partition per run and reuse it across fractions).
pub fn multilevel_backbone_with_partition(
    g: &Graph,
    partition: &Partition,
    partition_seed: Option<u64>,
    plan: &ExtractionPlan,
) -> Result<Backbone> {
    plan.validate()?;
    let structure = extract_component_structure(g, partition)?;

    let mut kept: Vec<Edge> = Vec::new();
    let mut budgets: Vec<ComponentBudget> = Vec::new();
    for (kind, index, component) in structure.all() {
        let selected = select_edges(component, plan.filter, plan.selection);
        budgets.push(ComponentBudget {
            kind: kind.as_str().to_owned(),
            index,
            nodes: component.node_count(),
            edges: component.edge_count(),
            budget: match plan.selection {
                Selection::Fraction(f) => edge_budget(component.edge_count(), f),
                Selection::Alpha(_) => selected.len(),
            },
        });
        // Map component-local edges back into parent ids via labels; the
        // component edge sets are disjoint, so this is a plain concatenation.
        for e in &selected {
            let u = g
                .node_by_label(component.label(e.u))
                .expect("component labels come from the parent");
            let v = g
                .node_by_label(component.label(e.v))
                .expect("component labels come from the parent");
            kept.push(Edge {
                u: u.min(v),
                v: u.max(v),
                weight: e.weight,
            });
        }
    }

    let (fraction, alpha) = match plan.selection {
        Selection::Fraction(f) => (Some(f), None),
        Selection::Alpha(a) => (None, Some(a)),
    };
    Ok(Backbone {
        graph: g.subgraph_from_edges(g.name(), &kept),
        provenance: Provenance {
            method: plan.filter.as_str().to_owned(),
            mode: ExtractionMode::Multilevel.as_str().to_owned(),
            fraction,
            alpha,
            partition_seed,
            seed_policy: Some(plan.partition_seed.describe()),
            source: g.name().to_owned(),
            tiebreak_version: crate::filters::TIEBREAK_VERSION.to_owned(),
            components: budgets,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::Partition;
    use crate::graph::Graph;

    fn plan(filter: FilterKind, fraction: f64, mode: ExtractionMode) -> ExtractionPlan {
        ExtractionPlan {
            filter,
            selection: Selection::Fraction(fraction),
            partition_seed: SeedPolicy::Fixed(0),
            mode,
        }
    }

    /// Two weighted triangles bridged by one edge.
    fn bridged() -> Graph {
        Graph::from_edges(
            "bridged",
            &[
                (0, 1, 5.0),
                (1, 2, 4.0),
                (0, 2, 3.0),
                (3, 4, 5.0),
                (4, 5, 4.0),
                (3, 5, 3.0),
                (2, 3, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fraction_one_is_identity() {
        let g = bridged();
        for mode in [ExtractionMode::Classical, ExtractionMode::Multilevel] {
            for filter in [FilterKind::GlobalThreshold, FilterKind::Disparity] {
                let b = extract_backbone(&g, &plan(filter, 1.0, mode)).unwrap();
                assert_eq!(b.graph.labeled_edge_map(), g.labeled_edge_map());
            }
        }
    }

    #[test]
    fn fraction_zero_is_empty() {
        let g = bridged();
        let b = classical_backbone(&g, &plan(FilterKind::GlobalThreshold, 0.0, ExtractionMode::Classical))
            .unwrap();
        assert_eq!(b.graph.edge_count(), 0);
        assert_eq!(b.graph.node_count(), 0);
    }

    #[test]
    fn single_community_partition_matches_classical() {
        let g = bridged();
        let single = Partition::from_assignment(vec![0; g.node_count()]);
        for filter in [FilterKind::GlobalThreshold, FilterKind::Disparity] {
            for i in 0..=10 {
                let f = i as f64 / 10.0;
                let p = plan(filter, f, ExtractionMode::Multilevel);
                let ml = multilevel_backbone_with_partition(&g, &single, None, &p).unwrap();
                let cl = classical_backbone(&g, &plan(filter, f, ExtractionMode::Classical)).unwrap();
                assert_eq!(
                    ml.graph.labeled_edge_map(),
                    cl.graph.labeled_edge_map(),
                    "filter {filter:?} fraction {f}"
                );
            }
        }
    }

    #[test]
    fn multilevel_budget_is_per_component_sum() {
        let g = bridged();
        let p = Partition::from_assignment(vec![0, 0, 0, 1, 1, 1]);
        let b = multilevel_backbone_with_partition(
            &g,
            &p,
            None,
            &plan(FilterKind::GlobalThreshold, 0.3, ExtractionMode::Multilevel),
        )
        .unwrap();
        // Components: two 3-edge locals (budget 1 each: 0.9 -> 1) and one
        // 1-edge global (budget 0.3 -> 0); the bridge component vanishes.
        let expected: usize = b.provenance.components.iter().map(|c| c.budget).sum();
        assert_eq!(b.graph.edge_count(), expected);
        assert_eq!(b.graph.edge_count(), 2);
        assert!(b
            .provenance
            .components
            .iter()
            .any(|c| c.kind == "global" && c.budget == 0));
        // The kept edges are each triangle's heaviest.
        let m = b.graph.labeled_edge_map();
        assert_eq!(m[&("0", "1")], 5.0);
        assert_eq!(m[&("3", "4")], 5.0);
    }

    #[test]
    fn empty_graph_yields_empty_backbone() {
        let g = Graph::from_parts("iso", 3, &[]).unwrap();
        let b = multilevel_backbone(&g, &plan(FilterKind::GlobalThreshold, 0.5, ExtractionMode::Multilevel))
            .unwrap();
        assert_eq!(b.graph.edge_count(), 0);
    }

    #[test]
    fn invalid_plans_are_rejected() {
        let bad_fraction = ExtractionPlan {
            filter: FilterKind::GlobalThreshold,
            selection: Selection::Fraction(1.5),
            partition_seed: SeedPolicy::Auto,
            mode: ExtractionMode::Classical,
        };
        assert!(bad_fraction.validate().is_err());
        let gt_alpha = ExtractionPlan {
            filter: FilterKind::GlobalThreshold,
            selection: Selection::Alpha(0.05),
            partition_seed: SeedPolicy::Auto,
            mode: ExtractionMode::Classical,
        };
        assert!(gt_alpha.validate().is_err());
    }

    #[test]
    fn multilevel_is_deterministic_for_fixed_seed() {
        let g = bridged();
        let p = plan(FilterKind::Disparity, 0.4, ExtractionMode::Multilevel);
        let a = multilevel_backbone(&g, &p).unwrap();
        let b = multilevel_backbone(&g, &p).unwrap();
        assert_eq!(a.graph.labeled_edge_map(), b.graph.labeled_edge_map());
        assert_eq!(a.provenance, b.provenance);
    }
}
