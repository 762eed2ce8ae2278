//! Every scheme at one distance: `cargo run --example single_point -- 25`

use ris_relay::sweep::Scheme;
use ris_relay::wavefield::QuadratureSettings;
use ris_relay::FixedParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d0: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(10.0);
    let params = FixedParams {
        distance_m: d0,
        ..FixedParams::default()
    };
    let scenario = params.scenario()?;
    println!(
        "d0 = {d0} m, {} meta-atoms",
        scenario.anomalous.meta_atom_count(&scenario.budget)
    );
    for scheme in Scheme::ALL {
        let e = scenario.evaluate(scheme, &QuadratureSettings::default())?;
        let samples = e
            .quadrature_samples
            .map_or(String::new(), |n| format!("  ({n} samples)"));
        println!(
            "{:<24} {:>8.2} dB {:>8.3} bit/s/Hz{samples}",
            scheme.name(),
            10.0 * e.snr_linear.log10(),
            e.rate
        );
    }
    Ok(())
}
