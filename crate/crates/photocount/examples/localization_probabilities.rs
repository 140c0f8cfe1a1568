//! Volume-localization probabilities: the chance that a photon gas
//! huddles inside a sub-volume, and the linearized probability that a
//! small detector volume catches anything at all.
//!
//! ```bash
//! cargo run -p photocount --example localization_probabilities
//! ```

use photocount::localization::{
    relative_detection_probability, volume_occupation_ratio, LocalizationScenario,
};
use photocount::MeanOccupancy;

fn main() -> photocount::Result<()> {
    println!("probability W = (v/v0)^N that N photons sit inside half the volume:");
    for n in [1u64, 2, 5, 10, 20] {
        let scenario = LocalizationScenario::new(1.0, 0.5, 0.0)?.with_photon_count(n);
        println!("  N = {n:>2}: W = {:.6e}", volume_occupation_ratio(&scenario)?);
    }

    println!();
    println!("relative detection probability, definite photon number:");
    for dv in [0.001, 0.005, 0.01, 0.02] {
        let scenario = LocalizationScenario::new(1.0, 1.0, dv)?.with_photon_count(4);
        println!(
            "  N = 4, δv/v = {dv}: Q_d/Q_v = {:.6}",
            relative_detection_probability(&scenario)?
        );
    }

    println!();
    println!("ensemble form, Z cells at mean occupancy ⟨n⟩:");
    let scenario =
        LocalizationScenario::new(1.0, 1.0, 0.01)?.with_ensemble(100, MeanOccupancy::new(0.05)?);
    println!(
        "  Z = 100, ⟨n⟩ = 0.05, δv/v = 0.01: ⟨Q_d/Q_v⟩ = {:.6}",
        relative_detection_probability(&scenario)?
    );

    println!();
    println!("the linearization refuses detector volumes beyond δv/v = 0.1:");
    let too_big = LocalizationScenario::new(1.0, 1.0, 0.2)?.with_photon_count(4);
    match relative_detection_probability(&too_big) {
        Err(err) => println!("  {err}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
