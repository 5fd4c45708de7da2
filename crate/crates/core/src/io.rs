//! JSON and CSV file formats and the bundled example devices.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codes::AdditiveCode;
use crate::compiler::TermSet;
use crate::device::{Coloring, DeviceGraph, Hyperedge, Model};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperedgeFile {
    pub sites: Vec<usize>,
    #[serde(default = "default_model")]
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<Vec<char>>>,
}

fn default_model() -> String {
    "all".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviceFile {
    pub vertices: Vec<usize>,
    #[serde(default)]
    pub hyperedges: Vec<HyperedgeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub onsite: Option<BTreeMap<usize, Vec<char>>>,
}

impl DeviceFile {
    /// Applies `model` to every hyperedge in place of the file's own models.
    pub fn into_device(self, model: Option<&Model>) -> Result<DeviceGraph> {
        let edges = self
            .hyperedges
            .into_iter()
            .map(|h| {
                let m = match model {
                    Some(m) => m.clone(),
                    None => Model::parse(&h.model, h.alphabet)?,
                };
                Hyperedge::new(h.sites, m)
            })
            .collect::<Result<Vec<_>>>()?;
        DeviceGraph::new(self.vertices, edges, self.onsite.unwrap_or_default())
    }

    pub fn from_device(g: &DeviceGraph) -> Self {
        DeviceFile {
            vertices: g.vertices.clone(),
            hyperedges: g
                .hyperedges
                .iter()
                .map(|h| HyperedgeFile {
                    sites: h.sites.clone(),
                    model: h.model.name().into(),
                    alphabet: match &h.model {
                        Model::Custom(a) => Some(a.clone()),
                        _ => None,
                    },
                })
                .collect(),
            onsite: Some(g.onsite.clone()),
        }
    }
}

pub fn parse_device(json: &str, model: Option<&Model>) -> Result<DeviceGraph> {
    serde_json::from_str::<DeviceFile>(json)?.into_device(model)
}

pub fn device_to_json(g: &DeviceGraph) -> Result<String> {
    Ok(serde_json::to_string_pretty(&DeviceFile::from_device(g))?)
}

pub fn parse_coloring(json: &str) -> Result<Coloring> {
    let c: Coloring = serde_json::from_str(json)?;
    if c.assignment.values().any(|&v| v == 0) {
        return Err(Error::Parse("colours are numbered from 1".into()));
    }
    Ok(c)
}

/// Code file; generators are re-checked for independence.
pub fn parse_code(json: &str) -> Result<AdditiveCode> {
    let c: AdditiveCode = serde_json::from_str(json)?;
    AdditiveCode::new(c.n, c.generators, c.alphabet)
}

pub fn parse_hamiltonian(json: &str) -> Result<TermSet> {
    let ts: TermSet = serde_json::from_str(json)?;
    ts.validate()?;
    Ok(ts)
}

pub fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(fs::write(path, contents)?)
}

/// Example devices shipped with the library.
pub const BUNDLED: [&str; 6] = ["bilinear7", "ring7", "heavy_hex", "square", "trilinear", "kitaev_folded"];

macro_rules! bundled_files {
    ($($name:literal),*) => {
        fn bundled_pair(name: &str) -> Option<(&'static str, &'static str)> {
            match name {
                $($name => Some((
                    include_str!(concat!("../data/devices/", $name, ".json")),
                    include_str!(concat!("../data/colorings/", $name, ".json")),
                )),)*
                _ => None,
            }
        }
    };
}

bundled_files!("bilinear7", "ring7", "heavy_hex", "square", "trilinear", "kitaev_folded");

fn bundled_name(name: &str) -> &str {
    name.trim_end_matches(".json")
}

pub fn bundled_device(name: &str) -> Result<DeviceGraph> {
    let (dev, _) = bundled_pair(bundled_name(name))
        .ok_or_else(|| Error::Invalid(format!("no bundled device {name:?}")))?;
    parse_device(dev, None)
}

pub fn bundled_coloring(name: &str) -> Result<Coloring> {
    let (_, col) = bundled_pair(bundled_name(name))
        .ok_or_else(|| Error::Invalid(format!("no bundled device {name:?}")))?;
    parse_coloring(col)
}
