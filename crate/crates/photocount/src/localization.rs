//! Volume-localization probabilities and the classical-particle baseline.
//!
//! A low-density photon gas that once filled `v0` is found inside the
//! sub-volume `v` with relative probability `(v/v0)^N`.  Perturbing `v`
//! by a small detector volume `δv` and expanding to first order gives
//! the relative probability of a detector response, `N·δv/v`, or its
//! ensemble average `Z·⟨n⟩·δv/v` over cell fillings.  For contrast, a
//! beam of independent classical particles yields a plain Poisson count
//! with mean `ρ·u·τ·S`.

use crate::counting::poisson_pmf;
use crate::distributions::MeanOccupancy;
use crate::pmf::{TruncatedPmf, TruncationPolicy};
use crate::{require_finite, require_nonnegative, Error, Result};

/// Largest `δv/v` accepted by the linearized detection formulas; the
/// neglected second-order term is below `N (δv/v)² / 2`.
pub const LINEARIZATION_LIMIT: f64 = 0.1;

/// Geometry and occupancy of a localization experiment.
///
/// The photon content may be specified either as a definite photon
/// number `N` or as an ensemble of `Z` phase-space cells at mean
/// occupancy `⟨n⟩`; operations use whichever is present.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationScenario {
    initial_volume: f64,
    volume: f64,
    detector_volume: f64,
    photon_count: Option<u64>,
    cell_count: Option<u64>,
    mean_occupancy: Option<MeanOccupancy>,
}

impl LocalizationScenario {
    /// A scenario with gas volume `volume ≤ initial_volume` and detector
    /// sensitive volume `detector_volume`.
    pub fn new(initial_volume: f64, volume: f64, detector_volume: f64) -> Result<Self> {
        let initial_volume = require_finite("initial_volume", initial_volume)?;
        let volume = require_finite("volume", volume)?;
        let detector_volume = require_nonnegative("detector_volume", detector_volume)?;
        if initial_volume <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "initial_volume",
                reason: format!("must be positive, got {initial_volume}"),
            });
        }
        if volume <= 0.0 || volume > initial_volume {
            return Err(Error::InvalidParameter {
                name: "volume",
                reason: format!("must lie in (0, initial_volume], got {volume}"),
            });
        }
        Ok(Self {
            initial_volume,
            volume,
            detector_volume,
            photon_count: None,
            cell_count: None,
            mean_occupancy: None,
        })
    }

    /// Fixes a definite total photon number `N`.
    pub fn with_photon_count(mut self, photons: u64) -> Self {
        self.photon_count = Some(photons);
        self
    }

    /// Describes the gas as `cells` phase-space cells at mean occupancy
    /// `⟨n⟩`.
    pub fn with_ensemble(mut self, cells: u64, mean: MeanOccupancy) -> Self {
        self.cell_count = Some(cells);
        self.mean_occupancy = Some(mean);
        self
    }

    /// `δv/v`, the knob of the linearized formulas.
    pub fn detector_fraction(&self) -> f64 {
        self.detector_volume / self.volume
    }
}

/// Relative probability `W = (v/v0)^N` to find the whole gas inside the
/// sub-volume `v`.
pub fn volume_occupation_ratio(scenario: &LocalizationScenario) -> Result<f64> {
    let photons = scenario.photon_count.ok_or(Error::InvalidParameter {
        name: "photon_count",
        reason: "the occupation ratio needs a definite photon number".to_string(),
    })?;
    Ok((scenario.volume / scenario.initial_volume).powf(photons as f64))
}

/// Relative probability to detect some photons when the shutter opens:
/// `N·δv/v` for a definite photon number, `Z·⟨n⟩·δv/v` for an ensemble.
///
/// Valid only in the linearization domain `δv/v ≤ 0.1`.
pub fn relative_detection_probability(scenario: &LocalizationScenario) -> Result<f64> {
    let fraction = scenario.detector_fraction();
    if fraction > LINEARIZATION_LIMIT {
        return Err(Error::OutsideLinearDomain {
            ratio: fraction,
            limit: LINEARIZATION_LIMIT,
        });
    }
    if let Some(photons) = scenario.photon_count {
        return Ok(photons as f64 * fraction);
    }
    match (scenario.cell_count, scenario.mean_occupancy) {
        (Some(cells), Some(mean)) => {
            if cells == 0 {
                return Err(Error::InvalidParameter {
                    name: "cell_count",
                    reason: "must be positive".to_string(),
                });
            }
            Ok(cells as f64 * mean.value() * fraction)
        }
        _ => Err(Error::InvalidParameter {
            name: "scenario",
            reason: "needs either a definite photon number or (cells, mean occupancy)".to_string(),
        }),
    }
}

/// A uniform beam of independent classical particles aimed at the
/// detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalBeam {
    density: f64,
    speed: f64,
    exposure: f64,
    area: f64,
}

impl ClassicalBeam {
    /// Particle density `ρ`, speed `u` toward the detector, exposure
    /// time `τ`, and sensitive area `S`; all nonnegative and finite.
    pub fn new(density: f64, speed: f64, exposure: f64, area: f64) -> Result<Self> {
        Ok(Self {
            density: require_nonnegative("density", density)?,
            speed: require_nonnegative("speed", speed)?,
            exposure: require_nonnegative("exposure", exposure)?,
            area: require_nonnegative("area", area)?,
        })
    }
}

/// Mean number of classical particles in the detection volume,
/// `n_τ = ρ·u·τ·S`.
pub fn classical_mean_count(beam: &ClassicalBeam) -> f64 {
    beam.density * beam.speed * beam.exposure * beam.area
}

/// Counting distribution of the classical beam: independent particles,
/// hence Poisson with mean [`classical_mean_count`].
pub fn classical_count_pmf(beam: &ClassicalBeam, policy: &TruncationPolicy) -> Result<TruncatedPmf> {
    poisson_pmf(classical_mean_count(beam), policy)
}
