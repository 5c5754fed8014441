//! Analysis and simulation core for radio-frequency side channels of
//! trapped-ion processors.
//!
//! The crate is `no_std` (with `alloc`) and contains no I/O. It is split in
//! three parts:
//!
//! - [`sigproc`]: STFT, global power threshold, 8-connected component
//!   labeling, pulse extraction and alias arithmetic.
//! - [`emitsim`]: a circuit-to-emission simulator that produces sampled RF
//!   traces together with the ground truth that generated them.
//! - [`reconstruct`]: shot segmentation, region labeling, ion assignment,
//!   gate classification, statistics and gate unitaries.
//!
//! [`analysis`] wires the detector and the reconstruction steps into one
//! call.

#![no_std]
// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod emitsim;
pub mod reconstruct;
mod region;
pub mod sigproc;

pub use analysis::{analyze, profile_trace, Analysis, AnalysisConfig, AnalysisError};
pub use region::Region;
pub use sigproc::{Pulse, SampleTrace, Spectrogram, StftConfig};
