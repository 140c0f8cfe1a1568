//! Finite-window statistics.
//!
//! Over an observation window of dimensionless length `T/τ` the detector
//! fires a Poisson-distributed number of responses with mean
//! `m̄ = D · T/τ`, where `D` is the per-slot response probability (see
//! [`ModelMode`]).  Each response contributes an independent photon
//! count drawn from the conditioned single-response distribution, so the
//! total photon count over the window is compound Poisson.  The compound
//! distribution is assembled by direct iterated convolution of truncated
//! arrays; at desk-scale means the Poisson weight dies out after a few
//! dozen terms.

use crate::distributions::{
    conditional_response_pmf, mean_transition_probability, MeanOccupancy, ModelMode,
};
use crate::pmf::{TruncatedPmf, TruncationPolicy, CLAMP_FLOOR};
use crate::{require_nonnegative, Error, Result};

/// Dimensionless observation length `T/τ`, where `τ` is the
/// characteristic interaction time between the radiation and the
/// thermal reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingWindow {
    t_over_tau: f64,
}

impl CountingWindow {
    /// Wraps a window length; must be finite and nonnegative.
    pub fn new(t_over_tau: f64) -> Result<Self> {
        Ok(Self {
            t_over_tau: require_nonnegative("t_over_tau", t_over_tau)?,
        })
    }

    /// The window length `T/τ`.
    pub fn value(&self) -> f64 {
        self.t_over_tau
    }
}

/// Mean number of detector responses in the window, `m̄ = D · T/τ`.
///
/// `D` follows the mode: the exactly evaluated response probability
/// `1 - U_0`, or the transition probability `p` under the shortcut.
pub fn mean_response_count(nbar: MeanOccupancy, window: &CountingWindow, mode: ModelMode) -> f64 {
    mean_transition_probability(nbar, mode) * window.value()
}

/// Poisson distribution with the given mean, truncated once a certified
/// geometric majorant of the remaining tail drops below `ε`.
pub(crate) fn poisson_pmf(mean: f64, policy: &TruncationPolicy) -> Result<TruncatedPmf> {
    debug_assert!(mean >= 0.0);
    if mean == 0.0 {
        return Ok(TruncatedPmf::delta(0));
    }
    if mean > 700.0 {
        // e^{-mean} underflows; nothing at desk scale comes close
        return Err(Error::InvalidParameter {
            name: "mean",
            reason: format!("Poisson mean {mean} too large for direct evaluation"),
        });
    }
    let mut probs = Vec::new();
    let mut term = (-mean).exp();
    let mut m = 0u64;
    loop {
        probs.push(term);
        let next = term * mean / (m + 1) as f64;
        if (m + 1) as f64 > mean {
            // beyond the mode the terms shrink at least geometrically
            let ratio = mean / (m + 2) as f64;
            let bound = next / (1.0 - ratio);
            if bound <= policy.epsilon {
                let (probs, tail) = TruncatedPmf::clamp_and_trim(probs, bound);
                return TruncatedPmf::new(0, probs, tail);
            }
        }
        if probs.len() >= policy.max_terms {
            return Err(policy.cap_error());
        }
        term = next;
        m += 1;
    }
}

/// Distribution `G_m` of the number of detector responses in the window.
pub fn response_count_pmf(
    nbar: MeanOccupancy,
    window: &CountingWindow,
    mode: ModelMode,
    policy: &TruncationPolicy,
) -> Result<TruncatedPmf> {
    poisson_pmf(mean_response_count(nbar, window, mode), policy)
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Distribution of the total number of photons detected in the window:
/// a Poisson number of responses, each contributing an independent draw
/// from the conditioned response distribution.
///
/// At zero occupancy (or a zero-length window) no photon can arrive and
/// the result is the point mass at zero.  The mode enters through `m̄`
/// only; response sizes always follow the exactly normalized conditional
/// distribution, so in `Exact` mode the mean is `⟨n⟩ · T/τ` to within
/// the truncation tolerance.
pub fn window_count_pmf(
    nbar: MeanOccupancy,
    window: &CountingWindow,
    mode: ModelMode,
    policy: &TruncationPolicy,
) -> Result<TruncatedPmf> {
    if window.value() == 0.0 || nbar.value() == 0.0 {
        return Ok(TruncatedPmf::delta(0));
    }
    let m_bar = mean_response_count(nbar, window, mode);
    let g_policy = TruncationPolicy {
        epsilon: policy.epsilon / 2.0,
        max_terms: policy.max_terms,
    };
    let responses = poisson_pmf(m_bar, &g_policy)?;
    // each of the up-to-m̄ convolution factors leaks at most the batch
    // tail, so split the remaining budget accordingly
    let h_policy = TruncationPolicy {
        epsilon: policy.epsilon / (2.0 * (m_bar + 1.0)),
        max_terms: policy.max_terms,
    };
    let batch = conditional_response_pmf(nbar, ModelMode::Exact, &h_policy)?;

    let batch_offset = batch.k_min();
    let mut acc = vec![responses.prob(0)];
    let mut power: Vec<f64> = vec![1.0];
    let mut clamped = 0.0;
    for m in 1..responses.len() as u64 {
        power = convolve(&power, batch.probs());
        // zero out astronomically small entries and drop the trailing
        // run; the removed mass goes into the tail bound
        for p in power.iter_mut() {
            if *p != 0.0 && *p < CLAMP_FLOOR {
                clamped += *p;
                *p = 0.0;
            }
        }
        while power.len() > 1 && power.last() == Some(&0.0) {
            power.pop();
        }
        let offset = (m * batch_offset) as usize;
        let weight = responses.prob(m);
        if acc.len() < offset + power.len() {
            if offset + power.len() > policy.max_terms {
                return Err(policy.cap_error());
            }
            acc.resize(offset + power.len(), 0.0);
        }
        for (i, &p) in power.iter().enumerate() {
            acc[offset + i] += weight * p;
        }
    }
    let tail = responses.tail_bound() + m_bar * batch.tail_bound() + clamped;
    let (acc, tail) = TruncatedPmf::clamp_and_trim(acc, tail);
    TruncatedPmf::new(0, acc, tail)
}

/// Gap `|E[K]/(T/τ) − ⟨n⟩|` between the per-slot time-averaged detection
/// rate over the window and the ensemble mean occupancy.
///
/// Vanishes (up to truncation error) in `Exact` mode; strictly positive
/// under the shortcut, whose response probability is inconsistent with
/// the conditioned response sizes.
pub fn ergodicity_gap(nbar: MeanOccupancy, window: &CountingWindow, mode: ModelMode) -> Result<f64> {
    if window.value() < 1.0 {
        return Err(Error::InvalidParameter {
            name: "t_over_tau",
            reason: format!(
                "the rate gap is defined for windows of at least one interaction time, got {}",
                window.value()
            ),
        });
    }
    let pmf = window_count_pmf(nbar, window, mode, &TruncationPolicy::default())?;
    Ok((pmf.mean() / window.value() - nbar.value()).abs())
}
