//! Fixed-length lattice Higgs model with structure group `Z_n` on boxes in
//! `Z^m`: discrete forms and their calculus, Gibbs weights and theorem
//! quantities, heat-bath and clock samplers, the gauge/clock coupling,
//! exact enumeration on tiny boxes, and the Wilson-loop experiment harness.

pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod lattice;
pub mod oracle;
pub mod theory;
pub mod zn;

pub use error::LatticeError;
pub use lattice::{Cell, Form, Lattice, Site};
pub use coupling::{couple, coupled_region, CoupledPair, CoupledSampler, CouplingError};
pub use dynamics::{ChainState, ClockSampler, DynamicsError, HeatBath, SpinField};
pub use experiments::{ExperimentConfig, ExperimentError, Loop, LoopSpec, ResultRow};
pub use oracle::{enumerate_distribution, Ensemble, ExactDistribution, OracleError};
pub use theory::{GroupSpec, ModelParams, ParamError};
