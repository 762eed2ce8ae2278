//! Power-law exponents of the surface link and its quadratic growth with length.

use ris_relay::regimes::fit_scaling_exponent;
use ris_relay::sweep::log_grid;
use ris_relay::{ris_field_exact, LinkBudget, LinkGeometry, RisProfile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = LinkBudget::new(28e9, 114.0)?;
    let ris = RisProfile::anomalous(0.75)?;
    let power = |d0: f64| -> ris_relay::Result<f64> {
        let g = LinkGeometry::from_degrees(d0, d0, 45.0, 60.0)?;
        Ok(ris_field_exact(&budget, &g, &ris)?.amplitude_sq)
    };

    for (lo, hi) in [(2.0, 20.0), (500.0, 5000.0)] {
        let samples = log_grid(lo, hi, 60)
            .into_iter()
            .map(|d| power(d).map(|p| (d, p)))
            .collect::<Result<Vec<_>, _>>()?;
        println!(
            "slope over [{lo}, {hi}] m: {:.3}",
            fit_scaling_exponent(&samples)?
        );
    }

    let far = LinkGeometry::from_degrees(5000.0, 5000.0, 45.0, 60.0)?;
    let mut previous = None;
    for half in [0.375, 0.75, 1.5, 3.0] {
        let p = ris_field_exact(&budget, &far, &RisProfile::anomalous(half)?)?.amplitude_sq;
        let ratio = previous.map_or(String::new(), |q: f64| format!("  x{:.3}", p / q));
        println!(
            "2L = {:>5} m at 5 km: {:.3} dB{ratio}",
            2.0 * half,
            10.0 * p.log10()
        );
        previous = Some(p);
    }
    Ok(())
}
