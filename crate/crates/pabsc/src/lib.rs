//! Covert backscatter link analysis for pinching-antenna systems.
//!
//! A pinching antenna is a radiating element that slides along a
//! ceiling-mounted dielectric waveguide, so the radiator can be placed close
//! to the device it serves. This crate models an indoor deployment in which a
//! transmit pinching antenna (TPA) powers a passive backscatter device (BD)
//! on the floor, a receive pinching antenna (RPA) on a second waveguide reads
//! the reflected signal, and a warden on the floor runs an energy detector to
//! decide whether the device is transmitting.
//!
//! The crate provides, end to end:
//!
//! - **Link budgets** ([`channel`]): free-space gains, harvested power at the
//!   device, received backscatter power, SNR and achievable rate.
//! - **Detection analysis** ([`detection`]): the warden's false-alarm /
//!   miss-detection probabilities under bounded noise uncertainty, the
//!   optimal energy-detection threshold, the minimum total detection error
//!   probability (DEP), and its worst case under bounded location and CSI
//!   estimation errors. A seeded Monte-Carlo estimator serves as an
//!   independent check of every closed form.
//! - **Rate optimization** ([`optimizer`]): alternating optimization of the
//!   transmit power and the TPA position under reliability (SNR floor) and
//!   covertness (DEP floor) constraints, with closed-form subproblems, plus
//!   fixed-position baselines.
//! - **Brute-force oracles** ([`oracle`]): dense-grid searches that certify
//!   the closed-form threshold, position and joint power/position optima.
//! - **Batch tooling** ([`config`], [`sweep`], [`plot`], [`commands`]):
//!   scenario files, reproducible parameter sweeps with CSV output and
//!   self-contained SVG plots, and the subcommand entry points used by the
//!   `pabsc` binary.
//!
//! See the crate `examples/` directory for one runnable walk-through per
//! capability; `cargo run --example covert_rate_solve` is a good start.

pub mod channel;
pub mod commands;
pub mod config;
pub mod detection;
pub mod geometry;
pub mod optimizer;
pub mod oracle;
pub mod plot;
pub mod sweep;
pub mod units;

pub use channel::{LinkBudget, PowerConfig, RfConstants};
pub use config::ScenarioConfig;
pub use detection::{DetectionReport, EveUncertainty, NoiseUncertainty};
pub use geometry::{NodeLayout, Point3, Room, Scenario, WaveguidePair};
pub use optimizer::{
    AoParams, BindingConstraint, CovertnessSpec, Problem, ReliabilitySpec, SolveResult,
};
pub use oracle::{GridSpec, OracleVerdict};

/// Errors produced by scenario construction and the analytic operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A scalar parameter violated its domain (non-positive length, fraction
    /// outside [0, 1], ...).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: String,
    },
    /// A path-loss expression was evaluated at zero distance.
    #[error("zero distance on the {link} link (1/d path-loss model is singular)")]
    ZeroDistance { link: &'static str },
    /// The warden's location-uncertainty ball contains the backscatter
    /// device, so the worst-case device-to-warden distance is not positive.
    #[error("eavesdropper uncertainty region contains the device (distance {distance} m <= chi {chi} m)")]
    UncertaintyBallContainsDevice { distance: f64, chi: f64 },
    /// The covertness target leaves no transmit-power budget at all
    /// (`xi <= 0`, i.e. `epsilon = 0`).
    #[error("covertness constraint admits no positive transmit power (xi = {xi})")]
    CovertnessInfeasible { xi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
