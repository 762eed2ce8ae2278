//! Where the surface acts as a mirror and where it acts as a point scatterer.

use ris_relay::regimes::RegimeOptions;
use ris_relay::sweep::{log_grid, regime_report};
use ris_relay::FixedParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = log_grid(1.0, 1000.0, 200);
    for tolerance_db in [0.5, 1.0, 2.0] {
        let options = RegimeOptions {
            tolerance_db,
            ..RegimeOptions::default()
        };
        let r = regime_report(&FixedParams::default(), &grid, &options)?;
        let show = |b: Option<f64>| b.map_or("none".to_owned(), |v| format!("{v:.1} m"));
        println!(
            "tolerance {tolerance_db} dB: mirror up to {}, diffuser from {}",
            show(r.mirror_boundary),
            show(r.diffuser_boundary)
        );
    }
    Ok(())
}
