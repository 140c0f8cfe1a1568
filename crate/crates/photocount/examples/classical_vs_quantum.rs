//! The headline contrast.  For a beam of independent classical particles
//! the two-particle detection probability dies quadratically, so
//! P(2)/P(1) → 0 with the intensity.  For thermal photons the phase-space
//! cell has no internal structure: the ratios between multi-photon
//! probabilities stay fixed, U_2/U_1 → 1/2, no matter how weak the light.
//!
//! ```bash
//! cargo run -p photocount --example classical_vs_quantum
//! ```

use photocount::distributions::detection_pmf;
use photocount::localization::{classical_count_pmf, ClassicalBeam};
use photocount::{MeanOccupancy, TruncationPolicy};

fn main() -> photocount::Result<()> {
    let policy = TruncationPolicy::default();

    println!(
        "{:>10} {:>16} {:>16}",
        "mean", "classical P2/P1", "quantum U2/U1"
    );
    for &mean in &[1.0, 0.1, 0.01, 1e-3, 1e-4] {
        let beam = ClassicalBeam::new(mean, 1.0, 1.0, 1.0)?;
        let classical = classical_count_pmf(&beam, &policy)?;
        let classical_ratio = classical.prob(2) / classical.prob(1);

        let quantum = detection_pmf(MeanOccupancy::new(mean)?, &policy)?;
        let quantum_ratio = quantum.prob(2) / quantum.prob(1);

        println!("{mean:>10.0e} {classical_ratio:>16.6e} {quantum_ratio:>16.6}");
    }
    println!();
    println!("classical ratio = mean/2 → 0; quantum ratio → 1/2");
    Ok(())
}
