//! Photon-counting statistics of thermal light, built from the occupancy
//! statistics of phase-space cells rather than from an instantaneous
//! intensity.
//!
//! A single dimensionless parameter — the mean photon number per cell
//! `⟨n⟩` — fixes the whole model:
//!
//! * a cell holds `n` photons with geometric probability
//!   `P_n = ⟨n⟩^n / (⟨n⟩+1)^(n+1)` ([`distributions::cell_filling_pmf`]);
//! * one elementary detector response absorbs `k` photons from a cell of
//!   filling `n` with geometric probability of mean `n`, so the photon
//!   count of a response is a geometric mixture over cell fillings
//!   ([`distributions::detection_pmf`]);
//! * responses over a finite observation window of dimensionless length
//!   `T/τ` arrive Poisson-distributed, and the total photon count in the
//!   window is the matching compound Poisson distribution
//!   ([`counting::window_count_pmf`]).
//!
//! Every returned distribution is a [`TruncatedPmf`]: a finite prefix of
//! the infinite series together with a certified upper bound on the
//! neglected tail mass, controlled by a [`TruncationPolicy`].
//!
//! The [`monte_carlo`] module realizes the same stochastic process
//! event by event — sample a cell filling, sample an absorbed count,
//! repeat per response over a window — with one reproducible random
//! substream per trial, so results are identical for any worker count.
//! [`monte_carlo::compare`] scores empirical histograms against the
//! analytic distributions by total-variation distance and chi-square.
//!
//! ```
//! use photocount::{distributions, MeanOccupancy, TruncationPolicy};
//!
//! let nbar = MeanOccupancy::new(1.0)?;
//! let pmf = distributions::detection_pmf(nbar, &TruncationPolicy::default())?;
//! // At unit mean occupancy the no-absorption probability is ln 2.
//! assert!((pmf.prob(0) - std::f64::consts::LN_2).abs() < 1e-10);
//! # Ok::<(), photocount::Error>(())
//! ```

pub mod counting;
pub mod distributions;
pub mod localization;
pub mod monte_carlo;
pub mod output;
pub mod pmf;

pub use counting::CountingWindow;
pub use distributions::{MeanOccupancy, ModelMode};
pub use localization::{ClassicalBeam, LocalizationScenario};
pub use monte_carlo::{ComparisonReport, CountHistogram, SimulationConfig};
pub use pmf::{TruncatedPmf, TruncationPolicy};

/// Errors produced by this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A numeric input violated its domain.
    #[error("invalid {name}: {reason}")]
    InvalidParameter {
        /// Which input was rejected.
        name: &'static str,
        /// Why it was rejected.
        reason: String,
    },
    /// A series needed more terms than the policy's hard cap allows.
    #[error("truncation cap exceeded: more than {max_terms} terms needed to certify a tail of {epsilon}")]
    TruncationCapExceeded {
        /// The cap that was hit.
        max_terms: usize,
        /// The tail mass that was requested.
        epsilon: f64,
    },
    /// The request conditions on an event of probability zero.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    /// The detector volume is too large for the linearized localization formulas.
    #[error("outside linearization domain: delta_v/v = {ratio} exceeds {limit}")]
    OutsideLinearDomain {
        /// The offending `δv/v`.
        ratio: f64,
        /// The largest ratio the linearization accepts.
        limit: f64,
    },
    /// A histogram without samples cannot be compared to anything.
    #[error("empty histogram: no recorded trials")]
    EmptyHistogram,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite, got {value}"),
        })
    }
}

pub(crate) fn require_nonnegative(name: &'static str, value: f64) -> Result<f64> {
    let value = require_finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be nonnegative, got {value}"),
        })
    }
}
