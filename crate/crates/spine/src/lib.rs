//! `spine`: weighted-network backbone extraction and evaluation.
//!
//! The crate extracts backbones from undirected weighted graphs with two edge
//! filters (global threshold and disparity filter), either applied to the
//! whole graph ("classical") or independently to every local and global
//! component of the graph's community structure ("multilevel"), and ships the
//! full comparison battery used to judge a backbone against its original:
//! global properties, degree/weight distribution KS statistics, portrait
//! divergence, Laplacian spectrum and NetLSD distances, and mesoscopic
//! metrics (modularity, participation coefficients, inter-/intra-community
//! connectivity).
//!
//! ```
//! use spine::prelude::*;
//!
//! let g = spine::datasets::karate();
//! let plan = ExtractionPlan {
//!     filter: FilterKind::GlobalThreshold,
//!     selection: Selection::Fraction(0.3),
//!     partition_seed: SeedPolicy::Auto,
//!     mode: ExtractionMode::Classical,
//! };
//! let backbone = extract_backbone(&g, &plan).unwrap();
//! assert_eq!(backbone.graph.edge_count(), 23);
//! ```

pub mod community;
pub mod components;
pub mod datasets;
pub mod distances;
pub mod error;
pub mod filters;
pub mod graph;
pub mod multilevel;
pub mod properties;
pub mod report;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::community::{
        community_connectivity, louvain, louvain_best_of, modularity,
        participation_coefficients, Partition,
    };
    pub use crate::components::{extract_component_structure, ComponentStructure};
    pub use crate::distances::{
        ks_statistic, laplacian_spectrum, laplacian_spectrum_distance, netlsd_distance,
        netlsd_signature, netlsd_times, portrait, portrait_divergence,
    };
    pub use crate::error::{Error, Result};
    pub use crate::filters::{
        disparity_filter, disparity_scores, edge_budget, global_threshold, Backbone, FilterKind,
        Selection,
    };
    pub use crate::graph::{load_edge_list, parse_edge_list, Graph, ParseOptions};
    pub use crate::multilevel::{
        classical_backbone, extract_backbone, multilevel_backbone, ExtractionMode,
        ExtractionPlan, SeedPolicy,
    };
    pub use crate::properties::{global_properties, GlobalProperties};
    pub use crate::report::{evaluate, sweep, EvaluationOptions, MetricsReport};
}
