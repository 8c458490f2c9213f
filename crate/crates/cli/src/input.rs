//! JSON code descriptions.
//!
//! ```json
//! {"kind": "matrix", "field": {"p": 2}, "n": 4, "m": 2,
//!  "generators": [[[1, 0], [0, 0], [1, 1], [0, 1]], …]}
//! {"kind": "vector", "field": {"p": 2}, "m": 3, "n": 4,
//!  "generator": [[1, 0, 4, 3], [0, 1, 1, 4]]}
//! ```
//!
//! Matrix codes may carry a `subcode` (generators of `C2`); vector codes may
//! fix the expansion `basis` (big-field encodings). `alternates` lists other
//! descriptions of the same code.

use std::path::Path;
use std::sync::Arc;

use qleak_core::{ExtField, Field, MatrixCode, VectorCode};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CodeSpec {
    Matrix {
        field: FieldSpec,
        n: usize,
        m: usize,
        generators: Vec<Vec<Vec<u32>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subcode: Option<Vec<Vec<Vec<u32>>>>,
    },
    Vector {
        field: FieldSpec,
        m: u32,
        n: usize,
        generator: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<Vec<u32>>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(flatten)]
    pub code: CodeSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternates: Vec<CodeSpec>,
}

/// A code ready for analysis: always a matrix code, plus the vector form
/// when one was given.
#[derive(Clone, Debug)]
pub struct LoadedCode {
    pub matrix: MatrixCode,
    pub vector: Option<VectorCode>,
    pub subcode: Option<MatrixCode>,
}

impl LoadedCode {
    pub fn field(&self) -> &Arc<Field> {
        self.matrix.field()
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn require_vector(&self) -> CliResult<&VectorCode> {
        self.vector
            .as_ref()
            .ok_or_else(|| CliError::Input("this command needs a vector code (\"kind\": \"vector\")".into()))
    }
}

impl CodeSpec {
    pub fn build(&self) -> CliResult<LoadedCode> {
        match self {
            CodeSpec::Matrix { field, n, m, generators, subcode } => {
                let f = Field::shared(field.p, field.e)?;
                let matrix = MatrixCode::new(f.clone(), *n, *m, generators)?;
                let subcode = match subcode {
                    Some(g) => {
                        let c2 = MatrixCode::new(f, *n, *m, g)?;
                        if !c2.is_subcode_of(&matrix) {
                            return Err(CliError::Input("`subcode` is not contained in the code".into()));
                        }
                        Some(c2)
                    }
                    None => None,
                };
                Ok(LoadedCode { matrix, vector: None, subcode })
            }
            CodeSpec::Vector { field, m, n, generator, basis } => {
                let small = Field::shared(field.p, field.e)?;
                let big = Field::shared(field.p, field.e * m)?;
                let ext = Arc::new(ExtField::new(small, big, basis.clone())?);
                let vector = VectorCode::new(ext, *n, generator.clone())?;
                Ok(LoadedCode { matrix: vector.expand(), vector: Some(vector), subcode: None })
            }
        }
    }
}

pub fn parse_code_file(text: &str) -> CliResult<CodeFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_code_file(path: &Path) -> CliResult<CodeFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed JSON in {}: {e}", path.display())))
}

pub fn load_code(path: &Path) -> CliResult<LoadedCode> {
    load_code_file(path)?.code.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_code_file("{\"kind\": \"matrix\",\n \"n\": }").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unsupported_field_is_an_input_error() {
        let doc = r#"{"kind": "matrix", "field": {"p": 4}, "n": 1, "m": 1, "generators": [[[1]]]}"#;
        let err = parse_code_file(doc).unwrap().code.build().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
