//! s-number asymptotics for embeddings of weighted block sequence spaces and
//! of function spaces on quasi-bounded domains.

pub mod blockspace;
pub mod cli;
pub mod domain;
pub mod envelope;
pub mod error;
pub mod exponents;
pub mod format;
pub mod params;
pub mod suite;
pub mod widths;

pub use error::{Error, Result};
