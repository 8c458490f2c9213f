//! The bundled example codes, embedded from `fixtures/`.

use qleak_core::{Error, MatrixCode, VectorCode};

use crate::input::{parse_code_file, CodeFile, CodeSpec};

pub const BINARY_4X2: &str = include_str!("../fixtures/binary_4x2.json");
pub const F8_4_2: &str = include_str!("../fixtures/f8_4_2.json");

fn parsed(text: &str) -> Result<CodeFile, Error> {
    parse_code_file(text).map_err(|e| Error::InvalidParameters(e.to_string()))
}

fn build(spec: &CodeSpec) -> Result<crate::input::LoadedCode, Error> {
    spec.build().map_err(|e| Error::InvalidParameters(e.to_string()))
}

/// The four-generator code in `F_2^{4×2}`.
pub fn binary_4x2_matrix() -> Result<MatrixCode, Error> {
    Ok(build(&parsed(BINARY_4X2)?.code)?.matrix)
}

/// The same code as an `F_4`-linear vector code.
pub fn binary_4x2_vector() -> Result<VectorCode, Error> {
    let file = parsed(BINARY_4X2)?;
    let alt = file.alternates.first().ok_or_else(|| Error::InvalidParameters("missing vector form".into()))?;
    build(alt)?.vector.ok_or_else(|| Error::InvalidParameters("alternate is not a vector code".into()))
}

/// The `[4, 2]` code over `F_8`.
pub fn f8_4_2() -> Result<VectorCode, Error> {
    build(&parsed(F8_4_2)?.code)?
        .vector
        .ok_or_else(|| Error::InvalidParameters("fixture is not a vector code".into()))
}
