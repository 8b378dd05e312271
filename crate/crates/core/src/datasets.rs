//! Bundled and user-supplied benchmark networks.
//!
//! Zachary's karate club ships with the crate. Other networks are looked up
//! by name in the directory named by `NCB_DATA_DIR`, falling back to the
//! crate's `data/` directory.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{load_edge_list, load_gml, EdgeListOptions, Graph};
use crate::partition::{read_csv, Partition};

pub const KARATE_GML: &str = include_str!("../data/karate.gml");
pub const KARATE_EDGE_LIST: &str = include_str!("../data/karate.txt");
/// Two-faction split, 16 / 18 members, labels as in [`KARATE_GML`].
pub const KARATE_TRUTH_CSV: &str = include_str!("../data/karate_truth.csv");

pub fn karate() -> Graph {
    load_gml(KARATE_GML.as_bytes()).expect("bundled karate GML is valid")
}

pub fn karate_truth(g: &Graph) -> Result<Partition> {
    read_csv(g, KARATE_TRUTH_CSV.as_bytes())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    EdgeList,
    Gml,
}

impl InputFormat {
    /// `.gml` is GML; anything else is read as an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("gml") => InputFormat::Gml,
            _ => InputFormat::EdgeList,
        }
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edgelist" | "txt" => Ok(InputFormat::EdgeList),
            "gml" => Ok(InputFormat::Gml),
            other => Err(Error::Config(format!("unknown input format `{other}`"))),
        }
    }
}

pub fn load_path(path: &Path, format: Option<InputFormat>) -> Result<Graph> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let reader = BufReader::new(file);
    match format.unwrap_or_else(|| InputFormat::from_path(path)) {
        InputFormat::Gml => load_gml(reader),
        InputFormat::EdgeList => load_edge_list(reader, EdgeListOptions::default()),
    }
}

pub fn data_dir() -> PathBuf {
    std::env::var_os("NCB_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data"))
}

/// First existing `<name>.gml`, `<name>.txt` or `<name>.edges` in
/// [`data_dir`].
pub fn locate(name: &str) -> Option<PathBuf> {
    let dir = data_dir();
    ["gml", "txt", "edges"]
        .iter()
        .map(|ext| dir.join(format!("{name}.{ext}")))
        .find(|p| p.is_file())
}

/// Ground-truth partition `<name>_truth.csv` next to the dataset, if any.
pub fn locate_truth(name: &str) -> Option<PathBuf> {
    let p = data_dir().join(format!("{name}_truth.csv"));
    p.is_file().then_some(p)
}
