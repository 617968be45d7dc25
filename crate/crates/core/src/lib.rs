//! Picard groups of stable module categories via multiplicative spectral sequences.

pub mod algebra;
pub mod cache;
pub mod chart;
pub mod error;
pub mod gf;
pub mod groups;
mod gf_table;
pub mod linalg;
pub mod picard;
pub mod report;
pub mod reproduce;
pub mod specseq;

pub use error::{Error, Result};
