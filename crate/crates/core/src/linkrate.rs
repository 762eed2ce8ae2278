//! Achievable rates for decode-and-forward relays and surfaces.
//!
//! Under the total power constraint the relay link splits `P` between the
//! source and the relay (`P_R = P/2` by default) while the surface link gives
//! the source the whole of `P`. No direct source-destination path is modelled.

use crate::error::{Error, Result};
use crate::wavefield::{cylindrical_power_gain, FieldSample, LinkBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelayProtocol {
    HalfDuplexDf,
    FullDuplexDf,
    IdealFullDuplexDf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayConfig {
    pub protocol: RelayProtocol,
    /// `P_R / P`.
    pub relay_power_fraction: f64,
    /// `c` in `I_S = c · N0 · P_R`, with `P_R` read as `P_R / N0`.
    pub self_interference_coefficient: f64,
}

impl RelayConfig {
    pub const DEFAULT_POWER_FRACTION: f64 = 0.5;
    pub const DEFAULT_SELF_INTERFERENCE: f64 = 10.0;

    pub fn new(protocol: RelayProtocol) -> Self {
        Self {
            protocol,
            relay_power_fraction: Self::DEFAULT_POWER_FRACTION,
            self_interference_coefficient: Self::DEFAULT_SELF_INTERFERENCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.relay_power_fraction;
        // A fraction of exactly 1 is allowed so the relay can be compared at full power.
        if !(f.is_finite() && f > 0.0 && f <= 1.0) {
            return Err(Error::domain(
                "relay_power_fraction",
                format!("must lie in (0, 1], got {f}"),
            ));
        }
        let c = self.self_interference_coefficient;
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::domain(
                "self_interference_coefficient",
                format!("must be non-negative, got {c}"),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    /// bit/s/Hz
    pub rate: f64,
    /// End-to-end SNR (SINR for the full-duplex relay), linear.
    pub snr_linear: f64,
}

impl RateResult {
    /// Full-resource rate `log2(1 + snr)`.
    pub fn full_duplex(snr_linear: f64) -> Self {
        Self {
            rate: (1.0 + snr_linear).log2(),
            snr_linear,
        }
    }

    /// Half the resource, `½ log2(1 + snr)`.
    pub fn half_duplex(snr_linear: f64) -> Self {
        Self {
            rate: 0.5 * (1.0 + snr_linear).log2(),
            snr_linear,
        }
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * self.snr_linear.log10()
    }
}

/// Per-hop SNRs of a relay link, before the decode-and-forward minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopSnr {
    pub source_to_relay: f64,
    pub relay_to_destination: f64,
}

pub fn relay_hop_snr(
    budget: &LinkBudget,
    config: &RelayConfig,
    d_sr: f64,
    d_rd: f64,
) -> Result<HopSnr> {
    config.validate()?;
    let gain_sr = cylindrical_power_gain(budget, d_sr)?.amplitude_sq;
    let gain_rd = cylindrical_power_gain(budget, d_rd)?.amplitude_sq;
    let relay_snr = config.relay_power_fraction * budget.reference_snr();

    // Loop-back interference only degrades what the relay itself receives.
    let interference = match config.protocol {
        RelayProtocol::FullDuplexDf => config.self_interference_coefficient * relay_snr,
        RelayProtocol::HalfDuplexDf | RelayProtocol::IdealFullDuplexDf => 0.0,
    };
    Ok(HopSnr {
        source_to_relay: relay_snr * gain_sr / (1.0 + interference),
        relay_to_destination: relay_snr * gain_rd,
    })
}

/// Decode-and-forward rate, limited by the weaker hop.
pub fn relay_rate(
    budget: &LinkBudget,
    config: &RelayConfig,
    d_sr: f64,
    d_rd: f64,
) -> Result<RateResult> {
    let hops = relay_hop_snr(budget, config, d_sr, d_rd)?;
    let snr = hops.source_to_relay.min(hops.relay_to_destination);
    Ok(match config.protocol {
        RelayProtocol::HalfDuplexDf => RateResult::half_duplex(snr),
        RelayProtocol::FullDuplexDf | RelayProtocol::IdealFullDuplexDf => {
            RateResult::full_duplex(snr)
        }
    })
}

/// `log2(1 + (P/N0) |E_ris|²)`, with the source radiating the full power.
pub fn ris_rate(budget: &LinkBudget, field: &FieldSample) -> RateResult {
    RateResult::full_duplex(budget.reference_snr() * field.amplitude_sq)
}
