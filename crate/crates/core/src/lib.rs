//! Simulation library for RIS-aided holographic MIMO links.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`] places transmit/receive surface elements and RIS unit cells in space.
//! - [`channels`] builds the near-field LoS, NLoS and Rician-combined channel matrices.
//! - [`optimizer`] maximises the log-det rate over RIS phases and transmit covariance
//!   with a two-step-size projected gradient method.
//! - [`schemes`] implements the four RIS configuration strategies and water-filling.
//! - [`metrics`] computes achievable rate, effective rank and the mode fields seen at the RIS.
//! - [`experiments`] is the seeded Monte Carlo sweep harness with CSV output.

pub mod channels;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod linalg;
pub mod metrics;
pub mod optimizer;
pub mod schemes;

pub use channels::{ChannelParams, ChannelSet, StreamKey};
pub use error::{Error, Result};
pub use geometry::{Point3, ScenarioGeometry, SurfaceKind, SurfaceSpec};
pub use linalg::{c64, CMat};
pub use metrics::{achievable_rate, effective_rank, mode_fields, ModeField};
pub use optimizer::{
    pgm_solve, PgmSettings, PgmSolution, PgmStatus, PgmTrace, RisPhaseProfile, TransmitCovariance,
};
pub use schemes::{water_filling, SchemeId, SchemeOutcome, WaterFilling};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
