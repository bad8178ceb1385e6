//! Instance files: `{"d": int, "n": int, "A": [[...]], "b": [...], "z": [...]}`.

use crate::interpolate::{GeneralLP, SolveError};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
    #[error("invalid program: {0}")]
    Invalid(#[from] SolveError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub d: usize,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub z: Vec<f64>,
}

impl InstanceFile {
    pub fn from_lp(lp: &GeneralLP) -> Self {
        InstanceFile {
            d: lp.d(),
            n: lp.n(),
            a: lp.rows().map(|r| r.to_vec()).collect(),
            b: lp.b().to_vec(),
            z: lp.z().to_vec(),
        }
    }

    pub fn to_lp(&self) -> Result<GeneralLP, InstanceError> {
        let field = |field, message: String| Err(InstanceError::Field { field, message });
        if self.a.len() != self.n {
            return field("A", format!("expected {} rows, found {}", self.n, self.a.len()));
        }
        if let Some((i, r)) = self.a.iter().enumerate().find(|(_, r)| r.len() != self.d) {
            return field("A", format!("row {i} has {} entries, expected {}", r.len(), self.d));
        }
        if self.b.len() != self.n {
            return field("b", format!("expected {} entries, found {}", self.n, self.b.len()));
        }
        if self.z.len() != self.d {
            return field("z", format!("expected {} entries, found {}", self.d, self.z.len()));
        }
        Ok(GeneralLP::from_rows(&self.a, self.b.clone(), self.z.clone())?)
    }
}

pub fn parse_instance(text: &str) -> Result<GeneralLP, InstanceError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| InstanceError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.to_lp()
}

pub fn read_instance(path: &Path) -> Result<GeneralLP, InstanceError> {
    let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io { path: path.display().to_string(), source })?;
    parse_instance(&text)
}
