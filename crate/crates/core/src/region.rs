/// Execution stage a pulse belongs to: preparation (A), gates (B) or
/// readout (C).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Region {
    A,
    B,
    C,
    #[default]
    Unknown,
}
