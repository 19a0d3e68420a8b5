//! Gaussian-state dynamics of a scalar field in a cavity with an
//! oscillating boundary: closed-form resonant solutions, mode-truncated
//! numerical integration, and entanglement measures.

pub mod config;
pub mod dce1d;
pub mod dcend;
pub mod elliptic;
pub mod error;
pub mod gaussian;
pub mod jet;
pub mod oracle;
pub mod output;
pub mod scenarios;

pub use error::{CasimirError, Result};
