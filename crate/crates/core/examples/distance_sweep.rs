//! Rate against d0 for every scheme at 28 GHz with a 1.5 m surface.
//!
//! `cargo run --example distance_sweep -- [out.csv]`

use ris_relay::sweep::Figure;
use ris_relay::{run_sweep, FixedParams, Scheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let result = run_sweep(&Figure::Fig3.spec(FixedParams::default()))?;

    let ris = result.column(Scheme::RisAnomalousExact).unwrap();
    let relay = result.column(Scheme::IdealFdDf).unwrap();
    let lens = result.column(Scheme::RisLens).unwrap();
    println!(
        "{:>9} {:>10} {:>10} {:>10}",
        "d0 [m]", "anomalous", "lens", "ideal FD"
    );
    for (i, row) in result.rows.iter().enumerate().step_by(20) {
        println!(
            "{:>9.2} {:>10.3} {:>10.3} {:>10.3}",
            row.value, ris[i], lens[i], relay[i]
        );
    }
    print!("{}", result.summary()?);

    if let Some(path) = std::env::args().nth(1) {
        let manifest = result.write_csv(path.as_ref())?;
        println!("wrote {path} and {}", manifest.display());
    }
    Ok(())
}
