//! Longest edges in discrete and continuous long-range percolation.

pub mod analytic;
pub mod config;
pub mod connection;
pub mod error;
pub mod geometry;
pub mod model;
pub mod norming;
pub mod runner;
pub mod sampler;
pub mod special;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use model::Model;
