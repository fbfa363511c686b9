//! Small public weighted networks used throughout the test suite and bundled
//! with the CLI.
//!
//! Two networks ship embedded in the crate. Two more (the Madrid train
//! bombing contact network and the wind surfers contact network) are not
//! redistributed here; `scripts/fetch-datasets.sh` downloads them into the
//! crate's `data/` directory, after which [`load_fetched`] picks them up.
//! The `SPINE_DATA_DIR` environment variable overrides the lookup directory.

use std::path::PathBuf;

use crate::error::Result;
use crate::graph::{parse_edge_list, Graph, ParseOptions};

pub const KARATE_EDGES: &str = include_str!("../data/karate.edges");
pub const LES_MISERABLES_EDGES: &str = include_str!("../data/lesmiserables.edges");

#[derive(Debug, Clone, Copy)]
pub struct DatasetInfo {
    pub name: &'static str,
    pub file_name: &'static str,
    pub description: &'static str,
    /// Edge-list text for datasets embedded in the crate.
    pub contents: Option<&'static str>,
}

pub const DATASETS: &[DatasetInfo] = &[
    DatasetInfo {
        name: "karate",
        file_name: "karate.edges",
        description: "Zachary karate club friendships, 34 nodes / 78 weighted edges",
        contents: Some(KARATE_EDGES),
    },
    DatasetInfo {
        name: "lesmiserables",
        file_name: "lesmiserables.edges",
        description: "Les Miserables character co-appearances, 77 nodes / 254 weighted edges",
        contents: Some(LES_MISERABLES_EDGES),
    },
    DatasetInfo {
        name: "madrid",
        file_name: "madrid.edges",
        description: "Madrid train bombing contacts, 64 nodes / 243 weighted edges (fetched)",
        contents: None,
    },
    DatasetInfo {
        name: "windsurfers",
        file_name: "windsurfers.edges",
        description: "Wind surfers beach contacts, 43 nodes / 336 weighted edges (fetched)",
        contents: None,
    },
];

pub fn info(name: &str) -> Option<&'static DatasetInfo> {
    DATASETS.iter().find(|d| d.name == name)
}

pub fn karate() -> Graph {
    parse_edge_list(KARATE_EDGES, "karate", &ParseOptions::default())
        .expect("embedded karate data parses")
        .0
}

pub fn les_miserables() -> Graph {
    parse_edge_list(LES_MISERABLES_EDGES, "lesmiserables", &ParseOptions::default())
        .expect("embedded lesmiserables data parses")
        .0
}

/// Directory searched for fetched datasets.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("SPINE_DATA_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"),
    }
}

/// Load a dataset by name: embedded ones always succeed; fetched ones return
/// `Ok(None)` until their file exists in [`data_dir`].
pub fn load(name: &str) -> Result<Option<Graph>> {
    if let Some(info) = info(name) {
        if let Some(contents) = info.contents {
            return Ok(Some(
                parse_edge_list(contents, info.name, &ParseOptions::default())?.0,
            ));
        }
        let path = data_dir().join(info.file_name);
        if path.exists() {
            let (g, _) = crate::graph::load_edge_list(&path, &ParseOptions::default())?;
            return Ok(Some(g));
        }
        return Ok(None);
    }
    Ok(None)
}
