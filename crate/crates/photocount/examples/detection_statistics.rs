//! Single-response detection statistics: the probability to absorb
//! `k` photons in one elementary detector response, for a few mean
//! occupancies, with the certified tail bound and the mean identity
//! `Σ k·U_k = ⟨n⟩`.
//!
//! ```bash
//! cargo run -p photocount --example detection_statistics
//! ```

use photocount::distributions::{detection_mean, detection_pmf};
use photocount::{MeanOccupancy, TruncationPolicy};

fn main() -> photocount::Result<()> {
    let policy = TruncationPolicy::default();

    for &nbar in &[0.1, 1.0, 5.0] {
        let occupancy = MeanOccupancy::new(nbar)?;
        let pmf = detection_pmf(occupancy, &policy)?;

        println!("mean occupancy ⟨n⟩ = {nbar}");
        println!("  transition probability p = {:.6}", occupancy.transition_probability());
        for (k, p) in pmf.iter().take(8) {
            println!("  U_{k} = {p:.9}");
        }
        println!("  … {} entries retained, tail ≤ {:.3e}", pmf.len(), pmf.tail_bound());
        println!(
            "  normalization: sum + tail = 1 {} {:.3e}",
            if pmf.total_mass() + pmf.tail_bound() >= 1.0 { "+" } else { "-" },
            pmf.normalization_defect()
        );
        let mean = detection_mean(occupancy, &policy)?;
        println!("  mean photons per response Σ k·U_k = {mean:.12} (exact value {nbar})");
        println!();
    }
    Ok(())
}
