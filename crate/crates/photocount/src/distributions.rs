//! Single-response photon statistics.
//!
//! The chain of distributions, all driven by one parameter `⟨n⟩`:
//!
//! * cell filling `P_n = (1-p) p^n` with `p = ⟨n⟩/(⟨n⟩+1)`
//!   ([`cell_filling_pmf`]);
//! * absorption from one cell of known mean `⟨k⟩`: geometric again
//!   ([`absorption_pmf`]);
//! * photons absorbed in one elementary detector response: the mixture
//!   `U_k = Σ_n P_n · (1/(n+1)) (n/(n+1))^k` over cell fillings
//!   ([`detection_pmf`]);
//! * the same mixture conditioned on the detector having responded at
//!   all, `H_k = U_k / D` for `k ≥ 1` ([`conditional_response_pmf`]).
//!
//! The normalizer `D` is where [`ModelMode`] enters: the probability of
//! some response is exactly `1 - U_0 = ⟨n/(n+1)⟩`, but a widely quoted
//! first-order shortcut replaces it with `p` itself.  Both evaluations
//! are provided; `Exact` is the default everywhere.

use crate::pmf::{TruncatedPmf, TruncationPolicy};
use crate::{require_nonnegative, Error, Result};

/// Mean number of photons per phase-space cell — the model's single
/// physical input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanOccupancy {
    nbar: f64,
}

impl MeanOccupancy {
    /// Wraps a mean occupancy; must be finite and nonnegative.
    pub fn new(nbar: f64) -> Result<Self> {
        Ok(Self {
            nbar: require_nonnegative("nbar", nbar)?,
        })
    }

    /// The mean occupancy `⟨n⟩`.
    pub fn value(&self) -> f64 {
        self.nbar
    }

    /// The geometric ratio `p = ⟨n⟩/(⟨n⟩+1)`, always in `[0, 1)`.
    ///
    /// Equals the equilibrium ratio of excited to ground-state atoms in
    /// the two-level picture, and parameterizes every distribution here.
    pub fn transition_probability(&self) -> f64 {
        self.nbar / (self.nbar + 1.0)
    }
}

/// How the probability of "some detector response" is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModelMode {
    /// Sum the no-response probability exactly: `D = 1 - U_0`.
    #[default]
    Exact,
    /// Apply the first-order shortcut `-ln(1-p) ≈ p`, giving `D = p`.
    ///
    /// The shortcut's relative error does not vanish at low intensity
    /// (the exact value approaches `p/2`, not `p`); this variant exists
    /// to reproduce results derived under it.
    Approximate,
}

/// Geometric distribution on `k = 0, 1, 2, …` with entries `(1-r) r^k`,
/// truncated once the remaining tail `r^(K+1)` is at most `ε`.
fn geometric_pmf(ratio: f64, policy: &TruncationPolicy) -> Result<TruncatedPmf> {
    debug_assert!((0.0..1.0).contains(&ratio));
    let mut probs = Vec::new();
    let mut term = 1.0 - ratio;
    let mut tail = 1.0;
    loop {
        probs.push(term);
        tail *= ratio;
        if tail <= policy.epsilon {
            break;
        }
        if probs.len() >= policy.max_terms {
            return Err(policy.cap_error());
        }
        term *= ratio;
    }
    let (probs, tail) = TruncatedPmf::clamp_and_trim(probs, tail);
    TruncatedPmf::new(0, probs, tail)
}

/// Evaluates `Σ_n w_n · Geom(n/(n+1))` over `k = k_min, k_min+1, …`.
///
/// `cell_weights[n]` is the (possibly rescaled) weight of occupancy `n`
/// and `weight_tail` a certified bound on the weight mass beyond the
/// array.  The count index is extended until the certified residual
/// response mass `Σ_n w_n (n/(n+1))^(k+1)` drops to `epsilon_inner`.
fn geometric_mixture(
    cell_weights: &[f64],
    weight_tail: f64,
    k_min: u64,
    epsilon_inner: f64,
    policy: &TruncationPolicy,
) -> Result<TruncatedPmf> {
    // state[n] = (1/(n+1)) (n/(n+1))^k for the current k
    let mut ratios = Vec::with_capacity(cell_weights.len());
    let mut scales = Vec::with_capacity(cell_weights.len());
    let mut state = Vec::with_capacity(cell_weights.len());
    for n in 0..cell_weights.len() {
        let np1 = (n + 1) as f64;
        let ratio = n as f64 / np1;
        ratios.push(ratio);
        scales.push(np1);
        state.push(ratio.powi(k_min as i32) / np1);
    }

    let mut probs = Vec::new();
    let mut residual;
    loop {
        // compensated accumulation: an entry sums up to ~10³ cell terms
        let mut entry = 0.0;
        let mut compensation = 0.0;
        for (w, s) in cell_weights.iter().zip(&state) {
            let term = w * s;
            let t = entry + term;
            if entry.abs() >= term.abs() {
                compensation += (entry - t) + term;
            } else {
                compensation += (term - t) + entry;
            }
            entry = t;
        }
        probs.push(entry + compensation);
        residual = 0.0;
        for (((w, s), r), np1) in cell_weights.iter().zip(&mut state).zip(&ratios).zip(&scales) {
            *s *= r;
            // component mass beyond the current k is w_n (n/(n+1))^(k+1)
            residual += w * *s * np1;
        }
        if residual <= epsilon_inner {
            break;
        }
        if probs.len() >= policy.max_terms {
            return Err(policy.cap_error());
        }
    }
    let (probs, tail) = TruncatedPmf::clamp_and_trim(probs, weight_tail + residual);
    TruncatedPmf::new(k_min, probs, tail)
}

/// Cell weights `(1-p) p^n` for `n = 0..=N`, with `N` chosen so the
/// neglected cell mass `p^(N+1)` is at most `epsilon_outer / scale`;
/// every weight is divided by `scale` as it is produced, so the weights
/// stay representable even when `scale` is tiny.
fn scaled_cell_weights(
    p: f64,
    scale: f64,
    epsilon_outer: f64,
    policy: &TruncationPolicy,
) -> Result<(Vec<f64>, f64)> {
    let mut weights = Vec::new();
    let mut weight = (1.0 - p) / scale;
    let mut remaining = 1.0 / scale;
    loop {
        weights.push(weight);
        remaining *= p;
        if remaining <= epsilon_outer {
            break;
        }
        if weights.len() >= policy.max_terms {
            return Err(policy.cap_error());
        }
        weight *= p;
    }
    Ok((weights, remaining))
}

/// Cell-filling distribution `P_n = (1/(⟨n⟩+1)) (⟨n⟩/(⟨n⟩+1))^n`:
/// geometric with mean `⟨n⟩`.
pub fn cell_filling_pmf(nbar: MeanOccupancy, policy: &TruncationPolicy) -> Result<TruncatedPmf> {
    geometric_pmf(nbar.transition_probability(), policy)
}

/// Instantaneous probability to absorb `k` quanta when the mean absorbed
/// number is `⟨k⟩`: geometric with ratio `⟨k⟩/(⟨k⟩+1)`.
///
/// As a distribution this coincides with [`cell_filling_pmf`] at
/// `⟨n⟩ = ⟨k⟩`; the two inputs play different physical roles.
pub fn absorption_pmf(mean_absorbed: f64, policy: &TruncationPolicy) -> Result<TruncatedPmf> {
    let mean = require_nonnegative("mean_absorbed", mean_absorbed)?;
    geometric_pmf(mean / (mean + 1.0), policy)
}

/// Probability `U_k` to absorb `k` photons in one elementary detector
/// response: the geometric mixture over cell fillings.
///
/// Both the sum over fillings and the count range are truncated with a
/// combined certified tail of at most `policy.epsilon`.
pub fn detection_pmf(nbar: MeanOccupancy, policy: &TruncationPolicy) -> Result<TruncatedPmf> {
    let p = nbar.transition_probability();
    if p == 0.0 {
        return Ok(TruncatedPmf::delta(0));
    }
    let half = policy.epsilon / 2.0;
    let (weights, weight_tail) = scaled_cell_weights(p, 1.0, half, policy)?;
    geometric_mixture(&weights, weight_tail, 0, half, policy)
}

/// Mean of the detection distribution, `Σ_k k·U_k`, evaluated from the
/// truncated prefix.
///
/// The neglected tail contributes at most `tail_bound` times the largest
/// count weight left out, which is negligible at default tolerances; the
/// exact value of the full series is `⟨n⟩`.
pub fn detection_mean(nbar: MeanOccupancy, policy: &TruncationPolicy) -> Result<f64> {
    Ok(detection_pmf(nbar, policy)?.mean())
}

/// Ensemble average `⟨n/(n+1)⟩` of the per-cell transition ratio, i.e.
/// the probability that a response occurs at all.
///
/// In `Exact` mode this is `Σ_{i≥1} p^i / (i(i+1))`, the power series of
/// `1 + ((1-p)/p) ln(1-p)`; the series is used below `p = 1/2` where the
/// closed form cancels badly.  `Approximate` mode returns `p` itself.
/// Both modes return 0 at `⟨n⟩ = 0`.
pub fn mean_transition_probability(nbar: MeanOccupancy, mode: ModelMode) -> f64 {
    let p = nbar.transition_probability();
    match mode {
        ModelMode::Approximate => p,
        ModelMode::Exact => {
            if p == 0.0 {
                0.0
            } else if p < 0.5 {
                let mut sum = 0.0;
                let mut pow = p;
                let mut i = 1.0;
                loop {
                    let term = pow / (i * (i + 1.0));
                    sum += term;
                    if term <= sum * 1e-17 {
                        break;
                    }
                    pow *= p;
                    i += 1.0;
                }
                sum
            } else {
                1.0 + (1.0 - p) / p * (-p).ln_1p()
            }
        }
    }
}

/// Distribution `H_k` of photons absorbed in a response, given that a
/// response occurred; support starts at `k = 1`.
///
/// `H_k = U_k / D` with `D = 1 - U_0` in `Exact` mode.  `Approximate`
/// mode divides by `p` instead, reproducing the shortcut's formula
/// verbatim — the result then sums to `(1-U_0)/p`, not to one.
pub fn conditional_response_pmf(
    nbar: MeanOccupancy,
    mode: ModelMode,
    policy: &TruncationPolicy,
) -> Result<TruncatedPmf> {
    if nbar.value() == 0.0 {
        return Err(Error::DegenerateInput(
            "no detector response can occur at zero mean occupancy".to_string(),
        ));
    }
    let p = nbar.transition_probability();
    let denom = match mode {
        ModelMode::Exact => mean_transition_probability(nbar, ModelMode::Exact),
        ModelMode::Approximate => p,
    };
    let half = policy.epsilon / 2.0;
    // Divide the cell weights by D up front; the rescaled weights are
    // O(1) even when both P_n and D underflow-small individually.
    let (mut weights, weight_tail) = scaled_cell_weights(p, denom, half, policy)?;
    weights[0] = 0.0; // an empty cell never produces a response
    geometric_mixture(&weights, weight_tail, 1, half, policy)
}
