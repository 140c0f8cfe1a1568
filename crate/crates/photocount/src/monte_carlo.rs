//! Event-level simulation of the detection process.
//!
//! Each trial replays the physics generatively: draw a cell filling from
//! the geometric occupancy law, then draw the absorbed photon count from
//! the geometric absorption law of that filling; over a window, draw a
//! Poisson number of responses and redraw the two-stage experiment until
//! it yields at least one photon for each of them.
//!
//! Reproducibility contract: trial `i` consumes its own counter-selected
//! substream of a stream cipher keyed by the seed, so a run is bit
//! identical for any worker count and any scheduling, and histograms
//! merge associatively.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::CountingWindow;
use crate::distributions::{mean_transition_probability, MeanOccupancy, ModelMode};
use crate::pmf::TruncatedPmf;
use crate::{Error, Result};

/// Everything that determines a simulation run.
///
/// Identical `(seed, trials, mode)` produce identical histograms for any
/// `workers` value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    /// Seed of the run; keys the per-trial substreams.
    pub seed: u64,
    /// Number of independent trials.
    pub trials: u64,
    /// Worker threads to spread the trials over.
    pub workers: usize,
    /// Evaluation mode, entering only through the mean response count of
    /// window runs.
    pub mode: ModelMode,
}

impl SimulationConfig {
    /// A single-threaded exact-mode configuration.
    pub fn new(seed: u64, trials: u64) -> Self {
        Self {
            seed,
            trials,
            workers: 1,
            mode: ModelMode::Exact,
        }
    }

    /// Sets the worker-thread count.
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Sets the evaluation mode.
    pub fn with_mode(mut self, mode: ModelMode) -> Self {
        self.mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter {
                name: "trials",
                reason: "must be at least 1".to_string(),
            });
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter {
                name: "workers",
                reason: "must be at least 1".to_string(),
            });
        }
        Ok(())
    }
}

/// Empirical counts per outcome over a fixed number of trials.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountHistogram {
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl CountHistogram {
    /// An empty histogram.
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a histogram from `(outcome, count)` pairs.
    pub fn from_counts<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Self {
        let mut hist = Self::new();
        for (k, c) in pairs {
            if c > 0 {
                *hist.counts.entry(k).or_insert(0) += c;
                hist.total += c;
            }
        }
        hist
    }

    /// Records one outcome.
    pub fn record(&mut self, k: u64) {
        *self.counts.entry(k).or_insert(0) += 1;
        self.total += 1;
    }

    /// Adds another histogram's counts into this one.
    pub fn merge(&mut self, other: &CountHistogram) {
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.total += other.total;
    }

    /// The recorded counts, ordered by outcome.
    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// Number of recorded trials.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Occurrences of the outcome `k`.
    pub fn count(&self, k: u64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Empirical frequency of the outcome `k`.
    pub fn frequency(&self, k: u64) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(k) as f64 / self.total as f64
        }
    }

    /// Largest recorded outcome, if any trial was recorded.
    pub fn max_outcome(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    /// Smallest recorded outcome, if any trial was recorded.
    pub fn min_outcome(&self) -> Option<u64> {
        self.counts.keys().next().copied()
    }

    /// Empirical mean outcome.
    pub fn mean(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts
            .iter()
            .map(|(&k, &c)| k as f64 * c as f64)
            .sum::<f64>()
            / self.total as f64
    }
}

fn splitmix_next(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The substream owned by one trial: the cipher key is expanded from the
/// seed, the stream counter is the trial index.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix_next(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Inverse-CDF geometric draw from a single uniform:
/// `floor(ln(1-u) / ln(ratio))`, with the `ratio = 0` guard.
fn sample_geometric(rng: &mut ChaCha8Rng, ratio: f64) -> u64 {
    if ratio <= 0.0 {
        return 0;
    }
    let u: f64 = rng.random();
    ((1.0 - u).ln() / ratio.ln()).floor() as u64
}

/// Poisson draw by inversion on a single uniform; exact and fast at the
/// desk-scale means used here.
fn sample_poisson(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let u: f64 = rng.random();
    let mut term = (-mean).exp();
    let mut cumulative = term;
    let mut m = 0u64;
    let cap = (10.0 * mean) as u64 + 100;
    while u >= cumulative && m < cap {
        m += 1;
        term *= mean / m as f64;
        cumulative += term;
    }
    m
}

/// One elementary detection experiment: a cell filling, then an absorbed
/// count from that filling.
fn sample_detection(rng: &mut ChaCha8Rng, transition_probability: f64) -> u64 {
    let filling = sample_geometric(rng, transition_probability);
    sample_geometric(rng, filling as f64 / (filling as f64 + 1.0))
}

/// One detector response: redraw the elementary experiment until at
/// least one photon is absorbed.
fn sample_response_size(rng: &mut ChaCha8Rng, transition_probability: f64) -> u64 {
    loop {
        let k = sample_detection(rng, transition_probability);
        if k >= 1 {
            return k;
        }
    }
}

fn run_trials<F>(config: &SimulationConfig, per_trial: F) -> Result<CountHistogram>
where
    F: Fn(&mut ChaCha8Rng) -> u64 + Sync,
{
    config.validate()?;
    let workers = config.workers.min(config.trials as usize).max(1);
    let chunk = config.trials.div_ceil(workers as u64);
    let partials: Vec<CountHistogram> = std::thread::scope(|scope| {
        let per_trial = &per_trial;
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let start = w * chunk;
                let stop = ((w + 1) * chunk).min(config.trials);
                let seed = config.seed;
                scope.spawn(move || {
                    let mut hist = CountHistogram::new();
                    for trial in start..stop {
                        let mut rng = trial_rng(seed, trial);
                        hist.record(per_trial(&mut rng));
                    }
                    hist
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation worker panicked"))
            .collect()
    });
    let mut merged = CountHistogram::new();
    for partial in &partials {
        merged.merge(partial);
    }
    Ok(merged)
}

/// Histogram of photons absorbed in single elementary responses; the
/// empirical law converges to [`crate::distributions::detection_pmf`].
pub fn sample_single_response(
    nbar: MeanOccupancy,
    config: &SimulationConfig,
) -> Result<CountHistogram> {
    let p = nbar.transition_probability();
    run_trials(config, |rng| sample_detection(rng, p))
}

/// Histogram of total photons per observation window; the empirical law
/// converges to [`crate::counting::window_count_pmf`].
pub fn sample_window(
    nbar: MeanOccupancy,
    window: &CountingWindow,
    config: &SimulationConfig,
) -> Result<CountHistogram> {
    let p = nbar.transition_probability();
    let mean_responses = mean_transition_probability(nbar, config.mode) * window.value();
    run_trials(config, move |rng| {
        let responses = sample_poisson(rng, mean_responses);
        (0..responses).map(|_| sample_response_size(rng, p)).sum()
    })
}

/// One row of a histogram/PMF comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinComparison {
    /// Outcome.
    pub k: u64,
    /// Empirical frequency of `k`.
    pub empirical: f64,
    /// Analytic probability of `k`.
    pub analytic: f64,
    /// `empirical - analytic`.
    pub delta: f64,
}

/// Agreement metrics between an empirical histogram and an analytic PMF.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Half the L1 distance over the union of supports, with the
    /// analytic tail bound counted as unmatched mass.
    pub tv_distance: f64,
    /// Pearson chi-square over bins with expected count ≥ 10; sparser
    /// bins and the analytic tail are pooled into one bin.
    pub chi_square: f64,
    /// Per-outcome frequencies, probabilities, and deltas.
    pub per_bin: Vec<BinComparison>,
}

/// Scores a histogram against an analytic distribution.
pub fn compare(hist: &CountHistogram, analytic: &TruncatedPmf) -> Result<ComparisonReport> {
    if hist.total() == 0 {
        return Err(Error::EmptyHistogram);
    }
    let total = hist.total() as f64;
    let lo = analytic.k_min().min(hist.min_outcome().unwrap_or(u64::MAX));
    let hi = analytic.k_max().max(hist.max_outcome().unwrap_or(0));

    let mut l1 = analytic.tail_bound();
    let mut chi_square = 0.0;
    let mut pooled_probability = analytic.tail_bound();
    let mut pooled_observed = 0.0;
    let sparse_threshold = 10.0 / total;
    let mut per_bin = Vec::with_capacity((hi - lo + 1) as usize);

    for k in lo..=hi {
        let observed = hist.count(k) as f64;
        let empirical = observed / total;
        let probability = analytic.prob(k);
        l1 += (empirical - probability).abs();
        per_bin.push(BinComparison {
            k,
            empirical,
            analytic: probability,
            delta: empirical - probability,
        });
        if probability >= sparse_threshold {
            let expected = total * probability;
            let d = observed - expected;
            chi_square += d * d / expected;
        } else {
            pooled_probability += probability;
            pooled_observed += observed;
        }
    }
    let pooled_expected = total * pooled_probability;
    if pooled_expected > 0.0 {
        let d = pooled_observed - pooled_expected;
        chi_square += d * d / pooled_expected;
    } else if pooled_observed > 0.0 {
        chi_square = f64::INFINITY;
    }

    Ok(ComparisonReport {
        tv_distance: 0.5 * l1,
        chi_square,
        per_bin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{conditional_response_pmf, detection_pmf};
    use crate::pmf::TruncationPolicy;

    fn occupancy(nbar: f64) -> MeanOccupancy {
        MeanOccupancy::new(nbar).unwrap()
    }

    #[test]
    fn zero_occupancy_never_detects() {
        let hist = sample_single_response(occupancy(0.0), &SimulationConfig::new(7, 5_000)).unwrap();
        assert_eq!(hist.count(0), 5_000);
        assert_eq!(hist.max_outcome(), Some(0));
    }

    #[test]
    fn empty_window_never_detects() {
        let window = CountingWindow::new(0.0).unwrap();
        let hist = sample_window(occupancy(1.0), &window, &SimulationConfig::new(7, 5_000)).unwrap();
        assert_eq!(hist.count(0), 5_000);
    }

    #[test]
    fn histograms_are_identical_for_any_worker_count() {
        let reference = sample_single_response(occupancy(1.0), &SimulationConfig::new(42, 40_000))
            .unwrap();
        for workers in [2, 3, 8] {
            let hist = sample_single_response(
                occupancy(1.0),
                &SimulationConfig::new(42, 40_000).with_workers(workers),
            )
            .unwrap();
            assert_eq!(hist, reference, "workers = {workers}");
        }

        let window = CountingWindow::new(3.0).unwrap();
        let reference =
            sample_window(occupancy(0.5), &window, &SimulationConfig::new(42, 20_000)).unwrap();
        for workers in [2, 8] {
            let hist = sample_window(
                occupancy(0.5),
                &window,
                &SimulationConfig::new(42, 20_000).with_workers(workers),
            )
            .unwrap();
            assert_eq!(hist, reference, "workers = {workers}");
        }
    }

    #[test]
    fn different_seeds_give_different_histograms() {
        let a = sample_single_response(occupancy(1.0), &SimulationConfig::new(1, 10_000)).unwrap();
        let b = sample_single_response(occupancy(1.0), &SimulationConfig::new(2, 10_000)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn config_validation() {
        assert!(sample_single_response(occupancy(1.0), &SimulationConfig::new(1, 0)).is_err());
        assert!(
            sample_single_response(occupancy(1.0), &SimulationConfig::new(1, 10).with_workers(0))
                .is_err()
        );
    }

    #[test]
    fn empirical_mean_tracks_the_analytic_mean() {
        let trials = 1_000_000u64;
        let pmf = detection_pmf(occupancy(1.0), &TruncationPolicy::default()).unwrap();
        let hist = sample_single_response(
            occupancy(1.0),
            &SimulationConfig::new(42, trials).with_workers(4),
        )
        .unwrap();
        let standard_error = (pmf.variance() / trials as f64).sqrt();
        assert!(
            (hist.mean() - 1.0).abs() < 3.0 * standard_error,
            "mean {} ± {standard_error}",
            hist.mean()
        );
    }

    #[test]
    fn window_empirical_mean_tracks_compound_mean() {
        let window = CountingWindow::new(10.0).unwrap();
        let trials = 100_000u64;
        let hist = sample_window(occupancy(0.1), &window, &SimulationConfig::new(42, trials)).unwrap();
        // compound mean = nbar · T/τ = 1; variance is O(1) here
        assert!((hist.mean() - 1.0).abs() < 0.05, "mean {}", hist.mean());
    }

    #[test]
    fn conditioned_draws_match_the_conditional_law() {
        // dropping the k = 0 bin and renormalizing must reproduce the
        // exact-mode conditional distribution; threshold from the 20-seed
        // calibration run (examples/calibrate_thresholds.rs)
        let hist =
            sample_single_response(occupancy(1.0), &SimulationConfig::new(42, 1_000_000).with_workers(4))
                .unwrap();
        let h = conditional_response_pmf(occupancy(1.0), ModelMode::Exact, &TruncationPolicy::default())
            .unwrap();
        let responded: u64 = hist.total() - hist.count(0);
        let mut l1 = h.tail_bound();
        for k in 1..=hist.max_outcome().unwrap().max(h.k_max()) {
            let empirical = hist.count(k) as f64 / responded as f64;
            l1 += (empirical - h.prob(k)).abs();
        }
        let tv = 0.5 * l1;
        assert!(tv < 6.5e-3, "tv {tv}");
    }

    #[test]
    fn convergence_improves_with_the_square_root_of_trials() {
        // quadrupling the trial count should roughly halve the TV
        // distance; averaged over seeds the ratio sits near 0.5
        let pmf = detection_pmf(occupancy(1.0), &TruncationPolicy::default()).unwrap();
        let mut ratio_sum = 0.0;
        let seeds = 10u64;
        for seed in 0..seeds {
            let coarse =
                sample_single_response(occupancy(1.0), &SimulationConfig::new(seed, 20_000)).unwrap();
            let fine =
                sample_single_response(occupancy(1.0), &SimulationConfig::new(seed, 80_000)).unwrap();
            let tv_coarse = compare(&coarse, &pmf).unwrap().tv_distance;
            let tv_fine = compare(&fine, &pmf).unwrap().tv_distance;
            ratio_sum += tv_fine / tv_coarse;
        }
        let mean_ratio = ratio_sum / seeds as f64;
        assert!(
            (0.3..=0.8).contains(&mean_ratio),
            "mean ratio {mean_ratio}"
        );
    }

    #[test]
    fn compare_scores_a_perfect_match_as_zero() {
        let analytic = TruncatedPmf::new(0, vec![0.25, 0.5, 0.25], 0.0).unwrap();
        let hist = CountHistogram::from_counts([(0, 25), (1, 50), (2, 25)]);
        let report = compare(&hist, &analytic).unwrap();
        assert_eq!(report.tv_distance, 0.0);
        assert_eq!(report.chi_square, 0.0);
    }

    #[test]
    fn compare_scores_matching_deltas_as_zero() {
        let hist = CountHistogram::from_counts([(0, 1_000)]);
        let report = compare(&hist, &TruncatedPmf::delta(0)).unwrap();
        assert_eq!(report.tv_distance, 0.0);
        assert_eq!(report.chi_square, 0.0);
    }

    #[test]
    fn compare_two_bin_example() {
        let analytic = TruncatedPmf::new(0, vec![0.5, 0.5], 0.0).unwrap();
        let hist = CountHistogram::from_counts([(0, 60), (1, 40)]);
        let report = compare(&hist, &analytic).unwrap();
        assert!((report.tv_distance - 0.1).abs() < 1e-15);
    }

    #[test]
    fn compare_rejects_empty_histograms() {
        let err = compare(&CountHistogram::new(), &TruncatedPmf::delta(0)).unwrap_err();
        assert_eq!(err, Error::EmptyHistogram);
    }

    #[test]
    fn compare_covers_empirical_mass_beyond_the_analytic_support() {
        let analytic = TruncatedPmf::new(0, vec![1.0], 0.0).unwrap();
        let hist = CountHistogram::from_counts([(0, 50), (3, 50)]);
        let report = compare(&hist, &analytic).unwrap();
        assert!((report.tv_distance - 0.5).abs() < 1e-15);
        assert!(report.chi_square.is_infinite());
        assert_eq!(report.per_bin.len(), 4);
    }
}
