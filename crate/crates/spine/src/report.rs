//! Full evaluation of an (original, backbone) pair, and fraction sweeps.
//!
//! `evaluate` assembles every comparison the toolkit knows about into one
//! serializable report: global properties of both graphs, preserved node and
//! weight fractions, KS statistics on the degree and weight sequences, the
//! three graph distances, and the mesoscopic metrics (modularity,
//! participation histograms, inter-/intra-community connectivity).
//!
//! Spectral distances are skipped above a node limit unless forced: dense
//! eigensolves on the largest studied networks are not desk-scale.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::{
    community_connectivity, louvain, louvain_best_of, modularity, participation_coefficients,
    Partition, AUTO_SEED_RUNS,
};
use crate::distances::{ks_statistic, laplacian_spectrum_distance, netlsd_distance, portrait_divergence};
use crate::error::{Error, Result};
use crate::filters::{Backbone, FilterKind, Provenance, Selection, TIEBREAK_VERSION};
use crate::graph::Graph;
use crate::multilevel::{
    classical_backbone, multilevel_backbone_with_partition, ExtractionMode, ExtractionPlan,
    SeedPolicy,
};
use crate::properties::{global_properties, GlobalProperties};

#[derive(Debug, Clone)]
pub struct EvaluationOptions {
    pub seed_policy: SeedPolicy,
    /// Node count above which spectral distances are skipped.
    pub spectral_node_limit: usize,
    pub force_spectral: bool,
    /// Histogram bins over [0, 1] for participation coefficients.
    pub participation_bins: usize,
}

impl Default for EvaluationOptions {
    fn default() -> Self {
        Self {
            seed_policy: SeedPolicy::Auto,
            spectral_node_limit: 5000,
            force_spectral: false,
            participation_bins: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterIntra {
    pub inter: f64,
    pub intra: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterIntraReport {
    /// Original graph under its own partition.
    pub original: InterIntra,
    /// Backbone edges under the original graph's partition.
    pub backbone_original_partition: InterIntra,
    /// Backbone under its own freshly detected partition.
    pub backbone_fresh_partition: InterIntra,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipationHistograms {
    pub bins: usize,
    pub original: Vec<usize>,
    pub backbone: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportProvenance {
    pub original_graph: String,
    pub backbone: Provenance,
    pub seed_policy: String,
    pub partition_seed_original: Option<u64>,
    pub partition_seed_backbone: Option<u64>,
    /// "computed", "forced", or "skipped:<reason>".
    pub spectral: String,
    pub tiebreak_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub original: GlobalProperties,
    pub backbone: GlobalProperties,
    pub preserved_node_fraction: f64,
    pub preserved_weight_fraction: f64,
    pub ks_degree: f64,
    pub ks_weight: f64,
    pub portrait_divergence: f64,
    pub laplacian_distance: Option<f64>,
    pub netlsd_distance: Option<f64>,
    pub modularity_original: f64,
    pub modularity_backbone: f64,
    pub participation_histograms: ParticipationHistograms,
    pub inter_intra: InterIntraReport,
    pub provenance: ReportProvenance,
}

fn resolve_partition(g: &Graph, policy: &SeedPolicy) -> Result<(Partition, Option<u64>)> {
    match policy {
        SeedPolicy::Fixed(s) => Ok((louvain(g, *s)?, Some(*s))),
        SeedPolicy::Auto => {
            let (p, seed) = louvain_best_of(g, AUTO_SEED_RUNS)?;
            Ok((p, Some(seed)))
        }
    }
}

fn histogram(values: &[f64], bins: usize) -> Vec<usize> {
    let mut out = vec![0usize; bins];
    for &v in values {
        let idx = ((v * bins as f64).floor() as usize).min(bins - 1);
        out[idx] += 1;
    }
    out
}

/// Check that every backbone edge exists in the original with the same
/// weight (bit-exact), comparing by node labels.
fn check_containment(original: &Graph, backbone: &Graph) -> Result<()> {
    let parent = original.labeled_edge_map();
    for e in backbone.edges() {
        let (a, b) = (backbone.label(e.u), backbone.label(e.v));
        let key = if a <= b { (a, b) } else { (b, a) };
        match parent.get(&key) {
            Some(w) if w.to_bits() == e.weight.to_bits() => {}
            Some(w) => {
                return Err(Error::Containment(format!(
                    "edge ({}, {}) weight {} differs from original {w}",
                    key.0, key.1, e.weight
                )))
            }
            None => {
                return Err(Error::Containment(format!(
                    "edge ({}, {}) does not exist in the original graph",
                    key.0, key.1
                )))
            }
        }
    }
    Ok(())
}

/// Evaluate a backbone against its original graph. Detects the original's
/// partition according to `options.seed_policy`.
pub fn evaluate(
    original: &Graph,
    backbone: &Backbone,
    options: &EvaluationOptions,
) -> Result<MetricsReport> {
    let (partition, seed) = resolve_partition(original, &options.seed_policy)?;
    evaluate_with_partition(original, backbone, &partition, seed, options)
}

/// Evaluate with a caller-supplied partition of the original graph (sweeps
/// reuse one partition across fractions).
pub fn evaluate_with_partition(
    original: &Graph,
    backbone: &Backbone,
    original_partition: &Partition,
    original_partition_seed: Option<u64>,
    options: &EvaluationOptions,
) -> Result<MetricsReport> {
    check_containment(original, &backbone.graph)?;
    let original_props = global_properties(original)?;
    let backbone_props = global_properties(&backbone.graph)?;

    let preserved_node_fraction = backbone_props.node_count as f64 / original_props.node_count as f64;
    let preserved_weight_fraction = backbone_props.total_weight / original_props.total_weight;

    let (deg_o, w_o) = original.degree_and_weight_sequences();
    let (deg_b, w_b) = backbone.graph.degree_and_weight_sequences();
    let to_f64 = |v: &[usize]| v.iter().map(|&d| d as f64).collect::<Vec<_>>();
    let ks_degree = ks_statistic(&to_f64(&deg_o), &to_f64(&deg_b))?;
    let ks_weight = ks_statistic(&w_o, &w_b)?;

    let divergence = portrait_divergence(original, &backbone.graph);

    let largest = original_props.node_count.max(backbone_props.node_count);
    let spectral_ok = largest <= options.spectral_node_limit || options.force_spectral;
    let (laplacian, netlsd, spectral_note) = if spectral_ok {
        let note = if largest > options.spectral_node_limit {
            "forced".to_owned()
        } else {
            "computed".to_owned()
        };
        (
            Some(laplacian_spectrum_distance(original, &backbone.graph)?),
            Some(netlsd_distance(original, &backbone.graph)?),
            note,
        )
    } else {
        (
            None,
            None,
            format!("skipped:{largest} nodes exceed limit {}", options.spectral_node_limit),
        )
    };

    let modularity_original = modularity(original, original_partition)?;
    // Backbone modularity comes from fresh detection on the backbone graph:
    // reusing the original optimum on a subgraph cannot reproduce the
    // reported backbone values, which sometimes exceed the original's.
    let (backbone_partition, backbone_seed) = resolve_partition(&backbone.graph, &options.seed_policy)?;
    let modularity_backbone = modularity(&backbone.graph, &backbone_partition)?;

    let inter_intra_original = {
        let (inter, intra) = community_connectivity(original, original_partition)?;
        InterIntra { inter, intra }
    };
    let restricted = restrict_partition(original, original_partition, &backbone.graph);
    let inter_intra_backbone_original = {
        let (inter, intra) = community_connectivity(&backbone.graph, &restricted)?;
        InterIntra { inter, intra }
    };
    let inter_intra_backbone_fresh = {
        let (inter, intra) = community_connectivity(&backbone.graph, &backbone_partition)?;
        InterIntra { inter, intra }
    };

    let participation_original = participation_coefficients(original, original_partition)?;
    let participation_backbone =
        participation_coefficients(&backbone.graph, &backbone_partition)?;

    Ok(MetricsReport {
        original: original_props,
        backbone: backbone_props,
        preserved_node_fraction,
        preserved_weight_fraction,
        ks_degree,
        ks_weight,
        portrait_divergence: divergence,
        laplacian_distance: laplacian,
        netlsd_distance: netlsd,
        modularity_original,
        modularity_backbone,
        participation_histograms: ParticipationHistograms {
            bins: options.participation_bins,
            original: histogram(&participation_original, options.participation_bins),
            backbone: histogram(&participation_backbone, options.participation_bins),
        },
        inter_intra: InterIntraReport {
            original: inter_intra_original,
            backbone_original_partition: inter_intra_backbone_original,
            backbone_fresh_partition: inter_intra_backbone_fresh,
        },
        provenance: ReportProvenance {
            original_graph: original.name().to_owned(),
            backbone: backbone.provenance.clone(),
            seed_policy: options.seed_policy.describe(),
            partition_seed_original: original_partition_seed,
            partition_seed_backbone: backbone_seed,
            spectral: spectral_note,
            tiebreak_version: TIEBREAK_VERSION.to_owned(),
        },
    })
}

/// Map the original graph's partition onto a subgraph by node label.
pub fn restrict_partition(original: &Graph, partition: &Partition, subgraph: &Graph) -> Partition {
    let assignment: Vec<usize> = (0..subgraph.node_count())
        .map(|node| {
            let original_id = original
                .node_by_label(subgraph.label(node))
                .expect("subgraph labels come from the original");
            partition.community_of(original_id)
        })
        .collect();
    Partition::from_assignment(assignment)
}

/// One long-format sweep entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub fraction: f64,
    pub mode: String,
    pub filter: String,
    pub metric: String,
    pub value: f64,
}

fn report_rows(fraction: f64, mode: ExtractionMode, filter: FilterKind, report: &MetricsReport) -> Vec<SweepRow> {
    let mut metrics: Vec<(&str, f64)> = vec![
        ("preserved_node_fraction", report.preserved_node_fraction),
        ("preserved_weight_fraction", report.preserved_weight_fraction),
        ("ks_degree", report.ks_degree),
        ("ks_weight", report.ks_weight),
        ("portrait_divergence", report.portrait_divergence),
        ("modularity_backbone", report.modularity_backbone),
        (
            "inter_community_weight",
            report.inter_intra.backbone_original_partition.inter,
        ),
        (
            "intra_community_weight",
            report.inter_intra.backbone_original_partition.intra,
        ),
    ];
    if let Some(d) = report.laplacian_distance {
        metrics.push(("laplacian_distance", d));
    }
    if let Some(d) = report.netlsd_distance {
        metrics.push(("netlsd_distance", d));
    }
    metrics
        .into_iter()
        .map(|(metric, value)| SweepRow {
            fraction,
            mode: mode.as_str().to_owned(),
            filter: filter.as_str().to_owned(),
            metric: metric.to_owned(),
            value,
        })
        .collect()
}

/// Evaluate both extraction modes at every fraction. Fractions must be
/// non-empty, sorted ascending, each in (0, 1]. One partition is detected on
/// the original and reused for every multilevel extraction and evaluation.
pub fn sweep(
    original: &Graph,
    filter: FilterKind,
    fractions: &[f64],
    options: &EvaluationOptions,
) -> Result<Vec<SweepRow>> {
    if fractions.is_empty() {
        return Err(Error::InvalidPlan("empty fractions list".to_owned()));
    }
    for pair in fractions.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidPlan(
                "fractions must be strictly ascending".to_owned(),
            ));
        }
    }
    if fractions.iter().any(|f| !(*f > 0.0 && *f <= 1.0)) {
        return Err(Error::InvalidPlan(
            "fractions must lie in (0, 1]".to_owned(),
        ));
    }

    let (partition, seed) = resolve_partition(original, &options.seed_policy)?;

    let jobs: Vec<(f64, ExtractionMode)> = fractions
        .iter()
        .flat_map(|&f| {
            [
                (f, ExtractionMode::Classical),
                (f, ExtractionMode::Multilevel),
            ]
        })
        .collect();

    let rows: Vec<Vec<SweepRow>> = jobs
        .into_par_iter()
        .map(|(fraction, mode)| {
            let plan = ExtractionPlan {
                filter,
                selection: Selection::Fraction(fraction),
                partition_seed: options.seed_policy,
                mode,
            };
            let backbone = match mode {
                ExtractionMode::Classical => classical_backbone(original, &plan)?,
                ExtractionMode::Multilevel => {
                    multilevel_backbone_with_partition(original, &partition, seed, &plan)?
                }
            };
            let report = evaluate_with_partition(original, &backbone, &partition, seed, options)?;
            Ok(report_rows(fraction, mode, filter, &report))
        })
        .collect::<Result<_>>()?;

    Ok(rows.into_iter().flatten().collect())
}

/// Long-format CSV: `fraction,mode,filter,metric,value`.
pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "fraction,mode,filter,metric,value")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.fraction, row.mode, row.filter, row.metric, row.value
        )?;
    }
    Ok(())
}
