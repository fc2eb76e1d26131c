//! JSON module files.
//!
//! ```json
//! { "p": 3, "field_degree": 1, "r": 2, "dim": 3,
//!   "generators": [[[0,0,0],[1,0,0],[0,0,0]], [[0,0,0],[0,0,0],[1,0,0]]],
//!   "name": "optional", "labels": ["optional"], "provenance": {"optional": "notes"} }
//! ```
//!
//! Matrices are row-major and act on column vectors. Over `F_{p^k}` with
//! `k > 1` each entry is an array of `k` coefficients in the power basis of
//! the modulus, which is stored alongside.

use std::io::Read;
use std::path::Path;

use cjt_core::{validate_generators, KEModule};
use cjt_exact::{AlgebraError, FieldCtx, FieldScalar, Matrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed module file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed module file: {0}")]
    Shape(String),
    #[error("field: {0}")]
    Field(#[from] AlgebraError),
    #[error("generators do not define a module: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Scalar(u32),
    Coefficients(Vec<u32>),
}

fn one() -> u32 {
    1
}

fn is_one(k: &u32) -> bool {
    *k == 1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: u32,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub field_degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub r: usize,
    pub dim: usize,
    pub generators: Vec<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

impl ModuleFile {
    pub fn from_module(m: &KEModule, name: Option<String>) -> Self {
        let f = m.field();
        let k = f.degree();
        let entry = |x: FieldScalar| {
            if k == 1 {
                Entry::Scalar(f.coeffs(x)[0])
            } else {
                Entry::Coefficients(f.coeffs(x))
            }
        };
        let generators = m
            .generators()
            .iter()
            .map(|g| (0..g.rows()).map(|i| g.row(i).iter().map(|&x| entry(x)).collect()).collect())
            .collect();
        ModuleFile {
            name,
            p: f.p(),
            field_degree: k,
            modulus: (k > 1).then(|| f.modulus().to_vec()),
            r: m.rank(),
            dim: m.dim(),
            generators,
            labels: m.labels().map(<[String]>::to_vec),
            provenance: None,
        }
    }

    pub fn field(&self) -> Result<FieldCtx, FormatError> {
        Ok(FieldCtx::new(self.p, self.field_degree, self.modulus.clone())?)
    }

    fn scalar(&self, f: &FieldCtx, e: &Entry) -> Result<FieldScalar, FormatError> {
        let coeffs = match e {
            Entry::Scalar(c) => vec![*c],
            Entry::Coefficients(c) if c.len() == self.field_degree as usize => c.clone(),
            Entry::Coefficients(c) => {
                return Err(FormatError::Shape(format!(
                    "entry has {} coefficients, field degree is {}",
                    c.len(),
                    self.field_degree
                )))
            }
        };
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(FormatError::Shape(format!("entry {c} is not reduced mod {}", self.p)));
        }
        Ok(f.from_coeffs(&coeffs)?)
    }

    pub fn to_module(&self) -> Result<KEModule, FormatError> {
        let f = self.field()?;
        if self.generators.len() != self.r {
            return Err(FormatError::Shape(format!("r = {} but {} generators", self.r, self.generators.len())));
        }
        let mut gens = Vec::with_capacity(self.r);
        for (g, rows) in self.generators.iter().enumerate() {
            if rows.len() != self.dim || rows.iter().any(|row| row.len() != self.dim) {
                return Err(FormatError::Shape(format!("generator {} is not {d}x{d}", g + 1, d = self.dim)));
            }
            let data = rows
                .iter()
                .map(|row| row.iter().map(|e| self.scalar(&f, e)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            gens.push(Matrix::from_rows(self.dim, data));
        }
        let violations = validate_generators(&f, self.dim, &gens);
        if !violations.is_empty() {
            return Err(FormatError::Invalid(violations.iter().map(ToString::to_string).collect()));
        }
        let m = KEModule::new(f, self.dim, gens).map_err(|e| FormatError::Invalid(vec![e.to_string()]))?;
        match &self.labels {
            Some(l) => m.with_labels(l.clone()).map_err(|e| FormatError::Shape(e.to_string())),
            None => Ok(m),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("module files serialize") + "\n"
    }
}

/// Reads a module file from a path, or from stdin for `None` or `-`.
pub fn read_module_file(path: Option<&Path>) -> Result<ModuleFile, FormatError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|source| FormatError::Io { path: p.display().to_string(), source })?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|source| FormatError::Io { path: "<stdin>".into(), source })?;
        }
    }
    ModuleFile::parse(&text)
}

pub fn read_module(path: Option<&Path>) -> Result<KEModule, FormatError> {
    read_module_file(path)?.to_module()
}

/// Matrix given as `"a11,a12;a21,a22"` with integer entries reduced mod `p`.
pub fn parse_matrix(f: &FieldCtx, text: &str) -> Result<Matrix<FieldScalar>, FormatError> {
    let rows: Vec<Vec<FieldScalar>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map(|v| f.from_int(v))
                        .map_err(|_| FormatError::Shape(format!("matrix entry {x:?} is not an integer")))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(FormatError::Shape(format!("matrix {text:?} is not rectangular")));
    }
    Ok(Matrix::from_rows(cols, rows))
}

/// Point given as `"l1,l2,..."`.
pub fn parse_point(f: &FieldCtx, text: &str) -> Result<Vec<FieldScalar>, FormatError> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map(|v| f.from_int(v))
                .map_err(|_| FormatError::Shape(format!("point coordinate {x:?} is not an integer")))
        })
        .collect()
}
