//! The low-intensity surprise: as `⟨n⟩ → 0` the multi-photon ratios
//! `U_{k+1}/U_k` settle at 1/2 instead of vanishing, and the response
//! sizes approach the pure geometric law `H_k = 2^{-k}`.
//!
//! ```bash
//! cargo run -p photocount --example low_intensity_limit
//! ```

use photocount::distributions::{conditional_response_pmf, detection_pmf};
use photocount::{MeanOccupancy, ModelMode, TruncationPolicy};

fn main() -> photocount::Result<()> {
    let policy = TruncationPolicy::default();

    println!("U_{{k+1}}/U_k for k = 1..5:");
    println!("{:>10} {:>9} {:>9} {:>9} {:>9} {:>9}", "nbar", "k=1", "k=2", "k=3", "k=4", "k=5");
    for &nbar in &[1.0, 0.1, 0.01, 1e-3, 1e-4] {
        let pmf = detection_pmf(MeanOccupancy::new(nbar)?, &policy)?;
        print!("{nbar:>10}");
        for k in 1..=5u64 {
            print!(" {:>9.6}", pmf.prob(k + 1) / pmf.prob(k));
        }
        println!();
    }

    println!();
    println!("response sizes at nbar = 1e-4 versus the limiting law 2^-k:");
    let h = conditional_response_pmf(MeanOccupancy::new(1e-4)?, ModelMode::Exact, &policy)?;
    for k in 1..=6u64 {
        let limit = 0.5f64.powi(k as i32);
        println!(
            "  H_{k} = {:.6}   2^-{k} = {:.6}   difference {:+.2e}",
            h.prob(k),
            limit,
            h.prob(k) - limit
        );
    }
    Ok(())
}
