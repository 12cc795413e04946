//! JSON frame files.
//!
//! ```json
//! { "field": "C", "dim": 2, "atomic": true,
//!   "nodes": [ { "weight": 1.0, "vector": [[1.0, 0.0], [0.0, 0.0]] } ] }
//! ```
//!
//! Real-field files may write entries as bare reals. Export always writes bare
//! reals for real frames and `[re, im]` pairs for complex ones.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SampledFrame;
use crate::error::{Error, Result};
use crate::field::FieldTag;
use crate::measure::QuadratureMeasure;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameFileEntry {
    Real(f64),
    Complex([f64; 2]),
}

impl FrameFileEntry {
    fn to_complex(self) -> Complex64 {
        match self {
            FrameFileEntry::Real(x) => Complex64::new(x, 0.0),
            FrameFileEntry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFileNode {
    pub weight: f64,
    pub vector: Vec<FrameFileEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub field: FieldTag,
    pub dim: usize,
    pub atomic: bool,
    pub nodes: Vec<FrameFileNode>,
}

fn validation(e: impl std::fmt::Display) -> Error {
    Error::Validation(e.to_string())
}

impl FrameFile {
    pub fn from_frame(f: &SampledFrame) -> Self {
        let nodes = f
            .weights()
            .iter()
            .zip(f.vectors())
            .map(|(&weight, v)| FrameFileNode {
                weight,
                vector: v
                    .iter()
                    .map(|z| match f.field() {
                        FieldTag::Real => FrameFileEntry::Real(z.re),
                        FieldTag::Complex => FrameFileEntry::Complex([z.re, z.im]),
                    })
                    .collect(),
            })
            .collect();
        Self {
            field: f.field(),
            dim: f.dim(),
            atomic: f.measure().is_atomic(),
            nodes,
        }
    }

    /// Converts to a frame, reporting every invariant failure as [`Error::Validation`].
    pub fn into_frame(self) -> Result<SampledFrame> {
        if self.nodes.is_empty() {
            return Err(validation("frame file has no nodes"));
        }
        let weights: Vec<f64> = self.nodes.iter().map(|n| n.weight).collect();
        let vectors: Vec<Vec<Complex64>> = self
            .nodes
            .iter()
            .map(|n| n.vector.iter().map(|e| e.to_complex()).collect())
            .collect();
        let measure = QuadratureMeasure::weighted(weights, self.atomic).map_err(validation)?;
        SampledFrame::new(self.field, self.dim, measure, vectors).map_err(validation)
    }
}

impl SampledFrame {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: FrameFile = serde_json::from_str(s).map_err(|e| validation(format!("malformed frame file: {e}")))?;
        file.into_frame()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&FrameFile::from_frame(self)).expect("frame files always serialize")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }
}
