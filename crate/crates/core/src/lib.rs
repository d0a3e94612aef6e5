//! Spectrum sharing between a primary link and a multi-antenna secondary
//! transmitter that relays primary traffic and harvests the primary
//! transmitter's energy.
//!
//! Four cooperation schemes are solved for the largest secondary rate under
//! a primary rate target:
//!
//! - [`ideal`]: the relay knows the primary message and receives energy over
//!   a cable.
//! - [`power_split`]: the relay splits received RF power between decoding
//!   and harvesting, then amplifies and forwards.
//! - [`time_split`]: a dedicated energy slot precedes the listen and forward
//!   phases.
//! - A no-harvesting baseline (power splitting pinned at `ρ = 1`).
//!
//! Each scheme also has a zero-forcing variant. [`dual`] holds the shared
//! two-user beamforming solver, [`oracle`] the brute-force checks, and
//! [`harness`] the Monte Carlo experiments behind the `ecoop` binary.

// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod cvec;
pub mod dual;
pub mod error;
pub mod harness;
pub mod ideal;
pub mod model;
pub mod oracle;
pub mod power_split;
pub mod presets;
pub mod region;
pub mod search;
pub mod time_split;

pub use config::{parse_config, parse_config_str, Experiment, ExperimentConfig, Sweep, SweepVar};
pub use error::{CoopError, Result};
pub use harness::{run, OutageRecord, Report};
pub use model::{ChannelSet, RateRegionCurve, Scheme, SchemeSolution, SolverSettings, Split, SystemConfig};
pub use presets::{Preset, PresetName};
