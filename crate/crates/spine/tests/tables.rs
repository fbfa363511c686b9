//! Reproduction of the published reference numbers on the bundled networks.
//!
//! Edge counts are exact (they follow from the budget rule); node counts get
//! small tolerance bands because the published tables do not state their
//! tie-breaking, and a handful of boundary edges can swing which nodes keep
//! degree >= 1.
//!
//! The Madrid train bombing and wind surfers networks are not redistributed
//! in this repository; their tests no-op with a notice until
//! `scripts/fetch-datasets.sh` has placed them in the data directory.

use spine::community::{community_connectivity, louvain, louvain_best_of, modularity};
use spine::components::extract_component_structure;
use spine::datasets;
use spine::distances::ks_statistic;
use spine::filters::{disparity_filter, global_threshold, FilterKind, Selection};
use spine::graph::Graph;
use spine::multilevel::{
    multilevel_backbone, ExtractionMode, ExtractionPlan, SeedPolicy,
};
use spine::properties::global_properties;
use spine::report::{evaluate_with_partition, EvaluationOptions};

fn assert_close(name: &str, got: f64, want: f64, tol: f64) {
    assert!(
        (got - want).abs() <= tol,
        "{name}: got {got}, want {want} +- {tol}"
    );
}

fn fetched(name: &str) -> Option<Graph> {
    match datasets::load(name).expect("dataset loads cleanly") {
        Some(g) => Some(g),
        None => {
            eprintln!("skipping: dataset `{name}` not fetched (run scripts/fetch-datasets.sh)");
            None
        }
    }
}

#[test]
fn karate_global_properties_match_reported_values() {
    let g = datasets::karate();
    let p = global_properties(&g).unwrap();
    assert_eq!(p.node_count, 34);
    assert_eq!(p.edge_count, 78);
    assert_close("density", p.density, 0.139, 0.001);
    assert_eq!(p.diameter, Some(5));
    assert_close("avg shortest path", p.avg_shortest_path.unwrap(), 2.41, 0.01);
    assert_close("avg degree", p.avg_degree, 4.59, 0.01);
    assert_eq!(p.max_degree, 17);
    assert_close("assortativity", p.assortativity.unwrap(), -0.476, 0.005);
    assert_close("avg clustering", p.avg_clustering, 0.57, 0.01);
    assert_close("transitivity", p.transitivity, 0.256, 0.002);
    assert_close("efficiency", p.global_efficiency, 0.492, 0.002);
    assert_close("avg weighted degree", p.avg_weighted_degree, 13.59, 0.01);
    assert_eq!(p.total_weight, 231.0);
}

#[test]
fn lesmiserables_global_properties_match_reported_values() {
    let g = datasets::les_miserables();
    let p = global_properties(&g).unwrap();
    assert_eq!(p.node_count, 77);
    assert_eq!(p.edge_count, 254);
    assert_close("density", p.density, 0.0868, 0.0005);
    assert_eq!(p.diameter, Some(5));
    assert_close("avg shortest path", p.avg_shortest_path.unwrap(), 2.64, 0.01);
    assert_close("avg degree", p.avg_degree, 6.60, 0.01);
    assert_eq!(p.max_degree, 36);
    assert_close("assortativity", p.assortativity.unwrap(), -0.165, 0.005);
    assert_close("avg clustering", p.avg_clustering, 0.57, 0.01);
    assert_close("transitivity", p.transitivity, 0.499, 0.002);
    assert_close("efficiency", p.global_efficiency, 0.435, 0.002);
    assert_close("avg weighted degree", p.avg_weighted_degree, 21.30, 0.01);
    assert_eq!(p.total_weight, 820.0);
}

#[test]
fn karate_classical_backbones_match_reported_sizes() {
    let g = datasets::karate();

    let gt = global_threshold(&g, 0.3);
    assert_eq!(gt.graph.edge_count(), 23);
    let v = gt.graph.node_count();
    assert!((17..=21).contains(&v), "GT nodes {v} outside [17, 21]");

    let df = disparity_filter(&g, Selection::Fraction(0.3));
    assert_eq!(df.graph.edge_count(), 23);
    let v = df.graph.node_count();
    assert!((19..=23).contains(&v), "DF nodes {v} outside [19, 23]");
}

#[test]
fn lesmiserables_classical_backbones_match_reported_sizes() {
    let g = datasets::les_miserables();

    let gt = global_threshold(&g, 0.3);
    assert_eq!(gt.graph.edge_count(), 76);
    let v = gt.graph.node_count();
    assert!((33..=37).contains(&v), "GT nodes {v} outside 35 +- 2");

    let df = disparity_filter(&g, Selection::Fraction(0.3));
    assert_eq!(df.graph.edge_count(), 76);
    let v = df.graph.node_count();
    assert!((43..=47).contains(&v), "DF nodes {v} outside 45 +- 2");
}

#[test]
fn karate_ks_statistics_match_reported_values() {
    let g = datasets::karate();
    let seq = |g: &Graph| {
        let (deg, w) = g.degree_and_weight_sequences();
        (
            deg.iter().map(|&d| d as f64).collect::<Vec<_>>(),
            w,
        )
    };
    let (deg_o, w_o) = seq(&g);

    let gt = global_threshold(&g, 0.3);
    let (deg_b, w_b) = seq(&gt.graph);
    assert_close(
        "GT ks degree",
        ks_statistic(&deg_o, &deg_b).unwrap(),
        0.339,
        0.05,
    );
    assert_close(
        "GT ks weight",
        ks_statistic(&w_o, &w_b).unwrap(),
        0.644,
        0.05,
    );

    let df = disparity_filter(&g, Selection::Fraction(0.3));
    let (deg_b, w_b) = seq(&df.graph);
    assert_close(
        "DF ks degree",
        ks_statistic(&deg_o, &deg_b).unwrap(),
        0.447,
        0.05,
    );
    assert_close(
        "DF ks weight",
        ks_statistic(&w_o, &w_b).unwrap(),
        0.513,
        0.05,
    );
}

#[test]
fn karate_multilevel_budget_sum_is_reported_edge_count() {
    // The per-community budget sums reproduce the reported multilevel edge
    // count (23) for every partition seed.
    let g = datasets::karate();
    for seed in 0..10 {
        let plan = ExtractionPlan {
            filter: FilterKind::GlobalThreshold,
            selection: Selection::Fraction(0.3),
            partition_seed: SeedPolicy::Fixed(seed),
            mode: ExtractionMode::Multilevel,
        };
        let b = multilevel_backbone(&g, &plan).unwrap();
        assert_eq!(b.graph.edge_count(), 23, "seed {seed}");
        let budget_sum: usize = b.provenance.components.iter().map(|c| c.budget).sum();
        assert_eq!(b.graph.edge_count(), budget_sum);
    }
}

#[test]
fn karate_mesoscopic_metrics_match_reported_values() {
    let g = datasets::karate();

    // Best-of-10 reaches the reported weighted modularity.
    let (best, _) = louvain_best_of(&g, 10).unwrap();
    let q = modularity(&g, &best).unwrap();
    assert_close("best-of-10 Q", q, 0.444, 0.02);

    // Seed 1 reproduces the partition behind the reported connectivity
    // split: inter 51, intra 180, total 231.
    let p = louvain(&g, 1).unwrap();
    let q = modularity(&g, &p).unwrap();
    assert!(q >= 0.42, "seed-1 partition quality {q}");
    let (inter, intra) = community_connectivity(&g, &p).unwrap();
    assert_eq!(inter, 51.0);
    assert_eq!(intra, 180.0);
    assert_eq!(inter + intra, 231.0);
}

#[test]
fn lesmiserables_louvain_reaches_reported_modularity() {
    let g = datasets::les_miserables();
    let (best, _) = louvain_best_of(&g, 10).unwrap();
    let q = modularity(&g, &best).unwrap();
    assert!(q >= 0.54, "best-of-10 Q {q} below reported 0.565 band");
}

#[test]
fn karate_sweep_distance_trends() {
    // Distances decay to zero as the fraction grows and hit exactly zero at
    // f = 1.0; the portrait divergence never climbs by more than the noise
    // tolerance between consecutive fractions; the classical filter's
    // preserved weight dominates the multilevel's whenever the two retain
    // equally many edges (with unequal budgets the comparison is ill-posed;
    // rounding can hand the multilevel variant an extra edge). Seed 1 pins
    // the partition whose connectivity split matches the reported tables.
    let g = datasets::karate();
    let seed = 1u64;
    let partition = louvain(&g, seed).unwrap();
    let options = EvaluationOptions {
        seed_policy: SeedPolicy::Fixed(seed),
        ..EvaluationOptions::default()
    };
    let fractions: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();

    for mode in [ExtractionMode::Classical, ExtractionMode::Multilevel] {
        let mut previous: Option<f64> = None;
        for &f in &fractions {
            let plan = ExtractionPlan {
                filter: FilterKind::GlobalThreshold,
                selection: Selection::Fraction(f),
                partition_seed: SeedPolicy::Fixed(seed),
                mode,
            };
            let backbone = match mode {
                ExtractionMode::Classical => {
                    spine::multilevel::classical_backbone(&g, &plan).unwrap()
                }
                ExtractionMode::Multilevel => {
                    spine::multilevel::multilevel_backbone_with_partition(
                        &g, &partition, Some(seed), &plan,
                    )
                    .unwrap()
                }
            };
            let report =
                evaluate_with_partition(&g, &backbone, &partition, Some(seed), &options).unwrap();
            if let Some(prev) = previous {
                assert!(
                    report.portrait_divergence <= prev + 0.05,
                    "portrait divergence rose past tolerance at f={f} ({mode:?})"
                );
            }
            previous = Some(report.portrait_divergence);
            if f == 1.0 {
                assert_eq!(report.portrait_divergence, 0.0);
                assert_eq!(report.laplacian_distance, Some(0.0));
                assert_eq!(report.netlsd_distance, Some(0.0));
                assert_eq!(report.ks_degree, 0.0);
                assert_eq!(report.ks_weight, 0.0);
            }
        }
    }

    // Equal-budget weight comparison.
    for &f in &fractions {
        let classical = spine::filters::global_threshold(&g, f);
        let plan = ExtractionPlan {
            filter: FilterKind::GlobalThreshold,
            selection: Selection::Fraction(f),
            partition_seed: SeedPolicy::Fixed(seed),
            mode: ExtractionMode::Multilevel,
        };
        let multilevel =
            spine::multilevel::multilevel_backbone_with_partition(&g, &partition, Some(seed), &plan)
                .unwrap();
        if classical.graph.edge_count() == multilevel.graph.edge_count() {
            assert!(
                classical.graph.total_weight() >= multilevel.graph.total_weight(),
                "classical weight fell below multilevel at equal budget, f={f}"
            );
        }
    }
}

#[test]
fn madrid_tables_when_fetched() {
    let Some(g) = fetched("madrid") else { return };
    assert_eq!(g.node_count(), 64);
    assert_eq!(g.edge_count(), 243);
    assert_close("total weight", g.total_weight(), 282.0, 0.5);

    let gt = global_threshold(&g, 0.3);
    assert_eq!(gt.graph.edge_count(), 73);

    let (partition, _) = louvain_best_of(&g, 10).unwrap();
    let structure = extract_component_structure(&g, &partition).unwrap();
    let locals = structure.locals.len();
    assert!(
        (5..=7).contains(&locals),
        "local components {locals} far from reported 6"
    );

    let plan = ExtractionPlan {
        filter: FilterKind::GlobalThreshold,
        selection: Selection::Fraction(0.3),
        partition_seed: SeedPolicy::Auto,
        mode: ExtractionMode::Multilevel,
    };
    let ml = multilevel_backbone(&g, &plan).unwrap();
    let e = ml.graph.edge_count();
    assert!((71..=73).contains(&e), "multilevel edges {e} outside [71, 73]");
    let v = ml.graph.node_count();
    assert!((38..=44).contains(&v), "multilevel nodes {v} outside 41 +- 3");
}

#[test]
fn windsurfers_tables_when_fetched() {
    let Some(g) = fetched("windsurfers") else { return };
    assert_eq!(g.node_count(), 43);
    assert_eq!(g.edge_count(), 336);
    assert_close("total weight", g.total_weight(), 1206.0, 0.5);

    let gt = global_threshold(&g, 0.3);
    assert_eq!(gt.graph.edge_count(), 101);

    let plan = ExtractionPlan {
        filter: FilterKind::GlobalThreshold,
        selection: Selection::Fraction(0.3),
        partition_seed: SeedPolicy::Auto,
        mode: ExtractionMode::Multilevel,
    };
    let ml = multilevel_backbone(&g, &plan).unwrap();
    assert_eq!(ml.graph.edge_count(), 101, "multilevel edges must sum to 101");
    let v = ml.graph.node_count();
    assert!((33..=39).contains(&v), "multilevel nodes {v} outside 36 +- 3");
}
