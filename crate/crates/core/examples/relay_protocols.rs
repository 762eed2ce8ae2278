//! Half-duplex, full-duplex and ideal full-duplex DF relays as self-interference varies.

use ris_relay::{relay_rate, LinkBudget, RelayConfig, RelayProtocol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = LinkBudget::new(28e9, 114.0)?;
    let d0 = 50.0;
    let hd = relay_rate(
        &budget,
        &RelayConfig::new(RelayProtocol::HalfDuplexDf),
        d0,
        d0,
    )?;
    let ideal = relay_rate(
        &budget,
        &RelayConfig::new(RelayProtocol::IdealFullDuplexDf),
        d0,
        d0,
    )?;
    println!(
        "d0 = {d0} m: HD {:.3}, ideal FD {:.3} bit/s/Hz",
        hd.rate, ideal.rate
    );
    for c in [1e-12, 1e-10, 1e-8, 1e-6, 1.0, 10.0] {
        let cfg = RelayConfig {
            self_interference_coefficient: c,
            ..RelayConfig::new(RelayProtocol::FullDuplexDf)
        };
        println!(
            "FD with c = {c:e}: {:.3} bit/s/Hz",
            relay_rate(&budget, &cfg, d0, d0)?.rate
        );
    }
    Ok(())
}
