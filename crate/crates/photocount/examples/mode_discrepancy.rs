//! Exact versus shortcut evaluation of the mean transition probability
//! `⟨n/(n+1)⟩`.  The shortcut `-ln(1-p) ≈ p` gives `p` itself; the exact
//! sum approaches `p/2` at low intensity, so the two differ by a factor
//! of two exactly where the model is most interesting.
//!
//! ```bash
//! cargo run -p photocount --example mode_discrepancy
//! ```

use photocount::distributions::mean_transition_probability;
use photocount::{MeanOccupancy, ModelMode};

fn main() -> photocount::Result<()> {
    println!(
        "{:>10} {:>14} {:>14} {:>12}",
        "nbar", "exact", "shortcut", "exact/shortcut"
    );
    let mut nbar = 1e-4;
    while nbar <= 1e4 {
        let occupancy = MeanOccupancy::new(nbar)?;
        let exact = mean_transition_probability(occupancy, ModelMode::Exact);
        let shortcut = mean_transition_probability(occupancy, ModelMode::Approximate);
        println!(
            "{nbar:>10.1e} {exact:>14.9} {shortcut:>14.9} {:>12.6}",
            exact / shortcut
        );
        nbar *= 10.0;
    }
    println!();
    println!("at nbar = 1 the exact value is 1 - ln 2 = {:.9}", 1.0 - std::f64::consts::LN_2);
    Ok(())
}
