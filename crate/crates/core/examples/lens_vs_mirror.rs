//! Anomalous reflector, focusing lens and the two asymptotes side by side.

use ris_relay::sweep::log_grid;
use ris_relay::{
    ris_field_diffuser, ris_field_exact, ris_field_mirror, LinkBudget, LinkGeometry, RisProfile,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = LinkBudget::new(28e9, 114.0)?;
    let anomalous = RisProfile::anomalous(0.75)?;
    let lens = RisProfile::lens(0.75)?;
    println!(
        "{:>8} {:>9} {:>9} {:>9} {:>9}  [dB]",
        "d0 [m]", "gradient", "lens", "mirror", "diffuser"
    );
    for d0 in log_grid(2.0, 2000.0, 13) {
        let g = LinkGeometry::from_degrees(d0, d0, 45.0, 60.0)?;
        println!(
            "{d0:>8.1} {:>9.2} {:>9.2} {:>9.2} {:>9.2}",
            ris_field_exact(&budget, &g, &anomalous)?.db(),
            ris_field_exact(&budget, &g, &lens)?.db(),
            ris_field_mirror(&budget, &g, anomalous.obliquity()).db(),
            ris_field_diffuser(&budget, &g, &anomalous).db(),
        );
    }
    Ok(())
}
