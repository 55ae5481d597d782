use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension {0} unsupported (expected 2, 3 or 4)")]
    Dimension(usize),
    #[error("empty interval [{lo}, {hi}] on axis {axis}")]
    EmptyInterval { axis: usize, lo: i32, hi: i32 },
    #[error("degree {k} out of range for dimension {dim}")]
    Degree { k: usize, dim: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("forms live on different boxes or groups")]
    DomainMismatch,
    #[error("group order {0} unsupported (need 2..=255)")]
    Modulus(u8),
    #[error("expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("value {value} not allowed at slot {slot}")]
    BadValue { slot: usize, value: u8 },
    #[error("cell lies outside the box")]
    OutsideBox,
    #[error("form is not closed")]
    NotClosed,
}
