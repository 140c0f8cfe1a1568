//! Truncated probability mass functions with certified tail bounds.
//!
//! All series in this crate are infinite; what a caller receives is a
//! finite prefix plus an upper bound on everything that was cut off.
//! The bound is part of the value: normalization checks are stated as
//! `|sum + tail_bound - 1| ≤ 2ε`, never as `sum ≈ 1`.

use crate::{require_finite, Error, Result};

/// Entries below this magnitude are clamped to zero and their mass is
/// folded into the tail bound.
pub(crate) const CLAMP_FLOOR: f64 = 1e-300;

/// Neumaier compensated sum.  Prefixes can run to tens of thousands of
/// entries; naive summation error would eat into the `2ε` normalization
/// budget at the smallest tolerances.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for value in values {
        let t = sum + value;
        if sum.abs() >= value.abs() {
            compensation += (sum - t) + value;
        } else {
            compensation += (value - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

/// Controls where infinite series are cut off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Certified maximum total probability mass that may be neglected.
    pub epsilon: f64,
    /// Hard cap on retained terms per series; exceeding it is an error.
    pub max_terms: usize,
}

impl TruncationPolicy {
    /// A policy with explicit tail tolerance and term cap.
    pub fn new(epsilon: f64, max_terms: usize) -> Result<Self> {
        let epsilon = require_finite("epsilon", epsilon)?;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must lie in (0, 1), got {epsilon}"),
            });
        }
        if max_terms == 0 {
            return Err(Error::InvalidParameter {
                name: "max_terms",
                reason: "must be at least 1".to_string(),
            });
        }
        Ok(Self { epsilon, max_terms })
    }

    pub(crate) fn cap_error(&self) -> Error {
        Error::TruncationCapExceeded {
            max_terms: self.max_terms,
            epsilon: self.epsilon,
        }
    }
}

impl Default for TruncationPolicy {
    /// `ε = 1e-12` with a cap of 10⁶ terms: comfortable double-precision
    /// headroom for every distribution this crate evaluates at desk scale.
    fn default() -> Self {
        Self {
            epsilon: 1e-12,
            max_terms: 1_000_000,
        }
    }
}

/// A finite prefix of a discrete distribution over counts
/// `k = k_min, k_min+1, …`, plus a certified bound on the neglected mass.
///
/// `k_min` distinguishes full-support distributions (`k_min = 0`) from
/// response-conditioned ones that start at one absorbed photon
/// (`k_min = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPmf {
    k_min: u64,
    probs: Vec<f64>,
    tail_bound: f64,
}

impl TruncatedPmf {
    /// Wraps raw entries. Every entry must be finite and nonnegative.
    pub fn new(k_min: u64, probs: Vec<f64>, tail_bound: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter {
                name: "probs",
                reason: "must contain at least one entry".to_string(),
            });
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidParameter {
                name: "probs",
                reason: "entries must be finite and nonnegative".to_string(),
            });
        }
        let tail_bound = require_finite("tail_bound", tail_bound)?;
        if tail_bound < 0.0 {
            return Err(Error::InvalidParameter {
                name: "tail_bound",
                reason: format!("must be nonnegative, got {tail_bound}"),
            });
        }
        Ok(Self {
            k_min,
            probs,
            tail_bound,
        })
    }

    /// The distribution concentrated on a single count.
    pub fn delta(k: u64) -> Self {
        Self {
            k_min: k,
            probs: vec![1.0],
            tail_bound: 0.0,
        }
    }

    /// Smallest count carried by the prefix.
    pub fn k_min(&self) -> u64 {
        self.k_min
    }

    /// Largest count carried by the prefix.
    pub fn k_max(&self) -> u64 {
        self.k_min + (self.probs.len() as u64 - 1)
    }

    /// Number of retained entries.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// Always false: a prefix carries at least one entry.
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Certified upper bound on the probability mass beyond the prefix.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Probability of the count `k`; zero outside the retained window.
    pub fn prob(&self, k: u64) -> f64 {
        if k < self.k_min {
            return 0.0;
        }
        self.probs.get((k - self.k_min) as usize).copied().unwrap_or(0.0)
    }

    /// The retained entries, indexed from `k_min`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Iterates `(k, probability)` over the retained window.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.k_min + i as u64, p))
    }

    /// Sum of the retained entries (compensated).
    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.probs.iter().copied())
    }

    /// `|sum + tail_bound − 1|`; small for any full distribution.
    pub fn normalization_defect(&self) -> f64 {
        (self.total_mass() + self.tail_bound - 1.0).abs()
    }

    /// Mean of the retained prefix, `Σ k·p_k` (compensated).
    pub fn mean(&self) -> f64 {
        compensated_sum(self.iter().map(|(k, p)| k as f64 * p))
    }

    /// Variance of the retained prefix.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        compensated_sum(self.iter().map(|(k, p)| {
            let d = k as f64 - mean;
            d * d * p
        }))
    }

    /// Clamps sub-`1e-300` entries to zero, folding their mass into the
    /// tail bound, and drops trailing zero entries (but never the first).
    pub(crate) fn clamp_and_trim(mut probs: Vec<f64>, mut tail_bound: f64) -> (Vec<f64>, f64) {
        for p in probs.iter_mut() {
            if *p != 0.0 && *p < CLAMP_FLOOR {
                tail_bound += *p;
                *p = 0.0;
            }
        }
        while probs.len() > 1 && probs.last() == Some(&0.0) {
            probs.pop();
        }
        (probs, tail_bound)
    }
}
