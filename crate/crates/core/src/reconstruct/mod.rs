//! From detected pulses back to a gate sequence: shot segmentation,
//! baseline profiling, ion assignment, gate classification and statistics.

mod baseline;
mod classify;
mod ions;
pub(crate) mod shots;
mod stats;
mod unitary;

pub use baseline::{label_regions, profile_baseline, BaselineConfig, BaselineProfile, TemplatePulse};
pub use classify::{classify_gates, ClassifierConfig, EventKind, GateEvent, PulseMeasurement};
pub use ions::{assign_ions, AddressingTable, IonAddress, MEASURED_ADDRESSING_HZ};
pub use shots::{idle_times, inter_shot_gaps, segment_shots, Shot, DEFAULT_GAP_THRESHOLD_S};
pub use stats::{aggregate_stats, IonStats, PulseSummary, StatsTable};
pub use unitary::{gate_unitary, sigma_phi};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReconstructError {
    #[error("baseline needs at least {need} shots, got {got}")]
    InsufficientShots { got: usize, need: usize },
    #[error("invalid addressing table: {0}")]
    InvalidTable(&'static str),
    #[error("levels ({i}, {j}) invalid for qudit dimension {dim}")]
    InvalidLevels { i: usize, j: usize, dim: usize },
}
