//! Samplers for the gauge measure (heat bath in unitary gauge) and for the
//! clock-gradient measure, plus gauge transformations and Wilson loops.

mod clock;
mod gauge;
mod heatbath;
pub mod rng;

pub use clock::{single_site_gradient, ClockSampler, SpinField};
pub use gauge::{gauge_transform, wilson_loop};
pub use heatbath::{ChainState, EdgeStencil, HeatBath, PlaqTerm};

use crate::error::LatticeError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("beta = infinity has no edge heat bath; sample the clock gradient instead")]
    InfiniteBeta,
    #[error("loop leaves the box")]
    LoopOutsideBox,
    #[error("expected a 1-form and two 0-forms")]
    Shape,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
