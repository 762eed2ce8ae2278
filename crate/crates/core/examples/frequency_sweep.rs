//! Surface against ideal full-duplex relay from 6 to 100 GHz, indoor (10 m) and outdoor (100 m).

use ris_relay::sweep::Figure;
use ris_relay::{run_sweep, FixedParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for figure in [Figure::Fig4Indoor, Figure::Fig4Outdoor] {
        let result = run_sweep(&figure.spec(FixedParams::default()))?;
        println!("== {figure}");
        print!("{}", result.summary()?);
    }
    Ok(())
}
