//! How long must the surface be to keep up with an ideal full-duplex relay?

use ris_relay::sweep::Figure;
use ris_relay::{run_sweep, FixedParams, LinkBudget, RisProfile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = LinkBudget::new(28e9, 114.0)?;
    for figure in [Figure::Fig5Indoor, Figure::Fig5Outdoor] {
        let result = run_sweep(&figure.spec(FixedParams::default()))?;
        let summary = result.summary()?;
        println!("== {figure}");
        print!("{summary}");
        if let Some(l) = summary.first_match {
            let atoms = RisProfile::anomalous(l)?.meta_atom_count(&budget);
            println!(
                "that is 2L = {:.2} m, {atoms} meta-atoms at lambda/5 spacing",
                2.0 * l
            );
        }
    }
    Ok(())
}
