//! Exact and numerical tools for Runge's method on modular curves X_G.

pub mod error;
pub mod exactmath;
pub mod gl2;
pub mod cusps;
pub mod units;
pub mod runge;
pub mod bounds;
pub mod analytic;
pub mod group_spec;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
