//! File formats, acquisition streaming and reporting around
//! [`rfsc_core`].

pub mod circuit;
pub mod config;
pub mod report;
pub mod stream;
pub mod tracefile;

pub use rfsc_core;
