//! Rate comparison of reconfigurable intelligent surfaces (RIS) against
//! decode-and-forward relays in a two-dimensional free-space link.
//!
//! - [`wavefield`]: cylindrical-wave power gains, the surface line integral and
//!   its mirror and diffuser limits.
//! - [`linkrate`]: rates of half-duplex, full-duplex and ideal full-duplex DF
//!   relays and of the surface link under a total power constraint.
//! - [`regimes`]: scaling exponents, regime boundaries and crossover search.
//! - [`sweep`]: distance, frequency and size sweeps with CSV output.
//! - [`cli`]: the `risrelay` command line.

pub mod cli;
pub mod error;
pub mod linkrate;
pub mod regimes;
pub mod sweep;
pub mod wavefield;

pub use error::{Error, Result};
pub use linkrate::{relay_rate, ris_rate, RateResult, RelayConfig, RelayProtocol};
pub use sweep::{run_sweep, ExperimentSpec, Figure, FixedParams, Scheme, SweepKind, SweepResult};
pub use wavefield::{
    cylindrical_power_gain, ris_field_diffuser, ris_field_exact, ris_field_mirror, FieldSample,
    LinkBudget, LinkGeometry, Obliquity, PhaseProfile, RisProfile,
};
