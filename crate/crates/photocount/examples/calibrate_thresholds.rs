//! Recomputes the Monte Carlo agreement thresholds used by the test
//! suite: for each validated case, run 20 seeds at the stated trial
//! count, report the worst observed total-variation distance, and print
//! the threshold as twice that maximum.
//!
//! ```bash
//! cargo run --release -p photocount --example calibrate_thresholds
//! ```

use photocount::counting::window_count_pmf;
use photocount::distributions::{conditional_response_pmf, detection_pmf};
use photocount::monte_carlo::{compare, sample_single_response, sample_window};
use photocount::{CountingWindow, MeanOccupancy, ModelMode, SimulationConfig, TruncationPolicy};

const SEEDS: u64 = 20;
const WORKERS: usize = 8;

fn main() {
    let policy = TruncationPolicy::default();

    for &(label, nbar, trials) in &[
        ("single response, nbar = 0.1", 0.1, 1_000_000u64),
        ("single response, nbar = 1", 1.0, 1_000_000),
    ] {
        let occupancy = MeanOccupancy::new(nbar).unwrap();
        let analytic = detection_pmf(occupancy, &policy).unwrap();
        let mut worst: f64 = 0.0;
        for seed in 0..SEEDS {
            let config = SimulationConfig::new(seed, trials).with_workers(WORKERS);
            let hist = sample_single_response(occupancy, &config).unwrap();
            worst = worst.max(compare(&hist, &analytic).unwrap().tv_distance);
        }
        report(label, trials, worst);
    }

    {
        let occupancy = MeanOccupancy::new(0.1).unwrap();
        let window = CountingWindow::new(10.0).unwrap();
        let analytic = window_count_pmf(occupancy, &window, ModelMode::Exact, &policy).unwrap();
        let trials = 1_000_000u64;
        let mut worst: f64 = 0.0;
        for seed in 0..SEEDS {
            let config = SimulationConfig::new(seed, trials).with_workers(WORKERS);
            let hist = sample_window(occupancy, &window, &config).unwrap();
            worst = worst.max(compare(&hist, &analytic).unwrap().tv_distance);
        }
        report("window, nbar = 0.1, T/τ = 10", trials, worst);
    }

    {
        // single-response draws restricted to k ≥ 1 and renormalized,
        // checked against the conditional law
        let occupancy = MeanOccupancy::new(1.0).unwrap();
        let h = conditional_response_pmf(occupancy, ModelMode::Exact, &policy).unwrap();
        let trials = 1_000_000u64;
        let mut worst: f64 = 0.0;
        for seed in 0..SEEDS {
            let config = SimulationConfig::new(seed, trials).with_workers(WORKERS);
            let hist = sample_single_response(occupancy, &config).unwrap();
            let responded = hist.total() - hist.count(0);
            let mut l1 = h.tail_bound();
            let top = hist.max_outcome().unwrap().max(h.k_max());
            for k in 1..=top {
                let empirical = hist.count(k) as f64 / responded as f64;
                l1 += (empirical - h.prob(k)).abs();
            }
            worst = worst.max(0.5 * l1);
        }
        report("conditioned single response, nbar = 1", trials, worst);
    }
}

fn report(label: &str, trials: u64, worst: f64) {
    println!(
        "{label}: {trials} trials, worst TV over {SEEDS} seeds = {worst:.6e}, threshold (2x) = {:.6e}",
        2.0 * worst
    );
}
