//! The reproducibility contract in action: a run is determined by
//! (seed, trials, mode) alone.  Every trial owns its own counter-selected
//! substream, so worker count and scheduling cannot leak into the result.
//!
//! ```bash
//! cargo run -p photocount --example parallel_determinism
//! ```

use photocount::monte_carlo::sample_window;
use photocount::{CountingWindow, MeanOccupancy, SimulationConfig};

fn main() -> photocount::Result<()> {
    let nbar = MeanOccupancy::new(0.5)?;
    let window = CountingWindow::new(5.0)?;

    let reference = sample_window(nbar, &window, &SimulationConfig::new(42, 100_000))?;
    println!("seed 42, 100000 trials, 1 worker:");
    for (&k, &count) in reference.counts().iter().take(6) {
        println!("  K={k}: {count}");
    }

    for workers in [2, 4, 8] {
        let config = SimulationConfig::new(42, 100_000).with_workers(workers);
        let hist = sample_window(nbar, &window, &config)?;
        println!(
            "{workers} workers: histogram identical to the single-threaded run: {}",
            hist == reference
        );
        assert_eq!(hist, reference);
    }

    let other_seed = sample_window(nbar, &window, &SimulationConfig::new(43, 100_000))?;
    println!(
        "seed 43 differs from seed 42 as it should: {}",
        other_seed != reference
    );
    Ok(())
}
