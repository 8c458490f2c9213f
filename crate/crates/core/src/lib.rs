//! Finite-field linear algebra, q-polymatroids of rank-metric codes, and
//! information leakage in nested coset coding.

pub mod access;
pub mod code;
pub mod error;
pub mod gf;
pub mod leakage;
pub mod minimal;
pub mod polymatroid;
pub mod subspace;

pub use code::{MatrixCode, VectorCode};
pub use error::{Error, Result};
pub use gf::{ExtField, Field};
pub use polymatroid::QPolymatroid;
pub use subspace::{BilinearForm, MatrixFq, QuotientCtx, Subspace};
