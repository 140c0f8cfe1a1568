//! Counting over a finite observation window: Poisson-distributed
//! responses, the compound distribution of total photons, the mean
//! identity `E[K] = ⟨n⟩·T/τ`, and additivity over sub-windows.
//!
//! ```bash
//! cargo run -p photocount --example finite_window_counts
//! ```

use photocount::counting::{mean_response_count, response_count_pmf, window_count_pmf};
use photocount::{CountingWindow, MeanOccupancy, ModelMode, TruncationPolicy};

fn main() -> photocount::Result<()> {
    let policy = TruncationPolicy::default();
    let nbar = MeanOccupancy::new(0.5)?;
    let window = CountingWindow::new(4.0)?;

    let m_bar = mean_response_count(nbar, &window, ModelMode::Exact);
    println!("nbar = 0.5, T/τ = 4: mean responses m̄ = {m_bar:.9}");

    let responses = response_count_pmf(nbar, &window, ModelMode::Exact, &policy)?;
    println!("response counts (Poisson):");
    for (m, p) in responses.iter().take(7) {
        println!("  G_{m} = {p:.9}");
    }

    let totals = window_count_pmf(nbar, &window, ModelMode::Exact, &policy)?;
    println!("total photons in the window (compound Poisson):");
    for (k, p) in totals.iter().take(10) {
        println!("  P(K={k}) = {p:.9}");
    }
    println!(
        "  mean E[K] = {:.12}   (⟨n⟩·T/τ = {})",
        totals.mean(),
        nbar.value() * window.value()
    );

    // splitting the window must not change the law: PMF(T1+T2) equals
    // the convolution of PMF(T1) and PMF(T2)
    let first = window_count_pmf(nbar, &CountingWindow::new(1.5)?, ModelMode::Exact, &policy)?;
    let second = window_count_pmf(nbar, &CountingWindow::new(2.5)?, ModelMode::Exact, &policy)?;
    let mut convolved = vec![0.0; first.len() + second.len() - 1];
    for (i, &a) in first.probs().iter().enumerate() {
        for (j, &b) in second.probs().iter().enumerate() {
            convolved[i + j] += a * b;
        }
    }
    let tv: f64 = convolved
        .iter()
        .enumerate()
        .map(|(k, &c)| (totals.prob(k as u64) - c).abs())
        .sum::<f64>()
        / 2.0;
    println!("additivity over 1.5 + 2.5 interaction times: TV distance = {tv:.3e}");
    Ok(())
}
