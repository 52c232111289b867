//! Joint channel detection and decoding for discrete memoryless channels.
//!
//! A codeword is transmitted over one of two candidate DMCs, `W` (the null
//! hypothesis) or `V` (the alternative). The receiver must simultaneously
//! decide which channel is operating and, if it declares `W`, decode the
//! message. This crate provides:
//!
//! * the decision rules themselves ([`detectors`]): the finite-blocklength
//!   optimal rule, its asymptotic Neyman-Pearson form, a type-enumerator
//!   form, low-rate (GLRT) and high-rate (output statistics) simplifications,
//!   and a universal rule for channel sets;
//! * exact and Monte Carlo evaluation of false-alarm, misdetection and
//!   inclusive-error probabilities over random code ensembles ([`sim`]);
//! * achievable error exponents: exact type-enumeration random coding and
//!   expurgated exponents, the simplified detectors' exponents, and
//!   Gallager/Forney-style bounds, with closed-form fast paths for pairs of
//!   binary symmetric channels ([`exponents`]);
//! * composite (channel-set) detection: generalized log-likelihoods,
//!   worst-case probabilities, and the universal random coding exponent
//!   ([`composite`]).
//!
//! All rates, exponents and log-likelihoods are in nats.

pub mod channel;
pub mod composite;
pub mod config;
pub mod detectors;
pub mod exponents;
pub mod joint;
pub mod logdomain;
pub mod optimize;
pub mod sim;
pub mod verify;

pub use channel::{capacity, BinaryChannelPair, Dmc, InputDistribution};
pub use detectors::{Codebook, Decision, DetectorRule};
pub use joint::JointType;
pub use logdomain::LogValue;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sequence length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("exact enumeration needs {needed} outcomes, cap is {cap}; use Monte Carlo")]
    EnumerationCapExceeded { needed: u128, cap: u64 },
    #[error("fixed composition infeasible: {0}")]
    CompositionInfeasible(String),
    #[error("empty channel set")]
    EmptyChannelSet,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Tolerance used when validating that probabilities sum to one.
pub const PROB_TOL: f64 = 1e-12;

/// Slack applied to closed-form feasibility constraints in exponent searches.
pub const FEAS_TOL: f64 = 1e-9;
