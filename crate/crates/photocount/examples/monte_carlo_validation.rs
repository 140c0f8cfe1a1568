//! Validates the analytic distributions against the event-level
//! simulator: one million single-response draws and one million window
//! draws, scored by total-variation distance and chi-square.
//!
//! ```bash
//! cargo run --release -p photocount --example monte_carlo_validation
//! ```

use photocount::counting::window_count_pmf;
use photocount::distributions::detection_pmf;
use photocount::monte_carlo::{compare, sample_single_response, sample_window};
use photocount::{CountingWindow, MeanOccupancy, ModelMode, SimulationConfig, TruncationPolicy};

fn main() -> photocount::Result<()> {
    let policy = TruncationPolicy::default();
    let config = SimulationConfig::new(42, 1_000_000).with_workers(4);

    for &nbar in &[0.1, 1.0] {
        let occupancy = MeanOccupancy::new(nbar)?;
        let analytic = detection_pmf(occupancy, &policy)?;
        let hist = sample_single_response(occupancy, &config)?;
        let report = compare(&hist, &analytic)?;
        println!(
            "single response, nbar = {nbar}: TV = {:.3e}, chi-square = {:.2}, empirical mean = {:.6}",
            report.tv_distance,
            report.chi_square,
            hist.mean()
        );
        for bin in report.per_bin.iter().take(5) {
            println!(
                "  k={}: empirical {:.6} analytic {:.6} delta {:+.2e}",
                bin.k, bin.empirical, bin.analytic, bin.delta
            );
        }
    }

    let occupancy = MeanOccupancy::new(0.1)?;
    let window = CountingWindow::new(10.0)?;
    let analytic = window_count_pmf(occupancy, &window, ModelMode::Exact, &policy)?;
    let hist = sample_window(occupancy, &window, &config)?;
    let report = compare(&hist, &analytic)?;
    println!(
        "window, nbar = 0.1, T/τ = 10: TV = {:.3e}, chi-square = {:.2}, empirical mean = {:.6} (exact 1)",
        report.tv_distance,
        report.chi_square,
        hist.mean()
    );
    Ok(())
}
